"""Total scattering matrix and internal modes.

Writing the four blocks as s11, s12, s21, s22 and the propagation
matrix as E, the external response is

    S_tot(p) = s11(p) + s12(p) [E(p) - s22(p)]^{-1} s21(p)

and the internal amplitudes driven by an external vector a are

    B(p) = [E(-p) - s22(-p)]^{-1} s21(-p) a.

A truncated multiple-reflection series is provided as an independent
oracle for testing.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import nan

import numpy as np
import scipy.linalg as sla

from .assemble import assemble_blocks, assemble_propagation
from .errors import NearPole, SeriesDiverges, SizeMismatch
from .graph import Graph, ModeIndex

__all__ = [
    "TotalSMatrix",
    "NEAR_POLE_RTOL",
    "total_scattering",
    "internal_modes",
    "path_sum_oracle",
    "verify_involution",
    "verify_unitarity",
]

# below this singular value ratio the resolvent is treated as singular
NEAR_POLE_RTOL = 1e-12


@dataclass(frozen=True)
class TotalSMatrix:
    """External scattering matrix with a conditioning probe of the
    resolvent matrix E - s22 it was computed from."""

    matrix: np.ndarray
    momentum: complex
    sigma_min: float
    sigma_max: float

    @property
    def condition_report(self) -> tuple[float, float]:
        return (self.sigma_min, self.sigma_max)


def _resolvent(g: Graph, locals_, idx: ModeIndex, p: complex):
    """Blocks and the probed matrix E(p) - s22(p); raises NearPole when
    the probe finds it numerically singular."""
    blocks = assemble_blocks(g, locals_, idx, p)
    prop = assemble_propagation(g, idx, p)
    m = prop.matrix - blocks.int_int
    sigma = np.linalg.svd(m, compute_uv=False)
    s_max = float(sigma[0])
    s_min = float(sigma[-1])
    if s_min <= NEAR_POLE_RTOL * s_max:
        raise NearPole(p, s_min, s_max)
    return blocks, m, s_min, s_max


def total_scattering(g: Graph, locals_, idx: ModeIndex, p: complex) -> TotalSMatrix:
    """Evaluate the total scattering matrix at momentum p.

    For a graph with no internal edges this is the external block
    itself and no conditioning probe applies.
    """
    if g.n_internal == 0:
        blocks = assemble_blocks(g, locals_, idx, p)
        return TotalSMatrix(blocks.ext_ext, p, nan, nan)
    blocks, m, s_min, s_max = _resolvent(g, locals_, idx, p)
    core = sla.solve(m, blocks.int_ext)
    mat = blocks.ext_ext + blocks.ext_int @ core
    return TotalSMatrix(mat, p, s_min, s_max)


def internal_modes(g: Graph, locals_, idx: ModeIndex, p: complex, external) -> np.ndarray:
    """Internal amplitude vector driven by the external vector at p."""
    a = np.asarray(external, dtype=complex)
    if a.shape != (g.n_external,):
        raise SizeMismatch(
            "external vector has shape %r, expected (%d,)" % (a.shape, g.n_external)
        )
    if g.n_internal == 0:
        return np.zeros(0, dtype=complex)
    blocks, m, _, _ = _resolvent(g, locals_, idx, -p)
    return sla.solve(m, blocks.int_ext @ a)


def path_sum_oracle(
    g: Graph,
    locals_,
    idx: ModeIndex,
    p: complex,
    max_order: int | None = None,
    tol: float = 1e-10,
) -> np.ndarray:
    """Multiple-reflection partial sum

        s11 + s12 (sum_{n=0}^{K} [E(-p) s22]^n) E(-p) s21.

    With max_order=None the truncation order is chosen from the
    geometric tail bound so the dropped remainder is below tol. Raises
    SeriesDiverges when the spectral radius of E(-p) s22 reaches 1.
    Intended as a slow independent check of total_scattering.
    """
    blocks = assemble_blocks(g, locals_, idx, p)
    if g.n_internal == 0:
        return blocks.ext_ext.copy()
    e_neg = assemble_propagation(g, idx, -p).matrix
    bounce = e_neg @ blocks.int_int
    rho = float(np.max(np.abs(np.linalg.eigvals(bounce))))
    if rho >= 1.0:
        raise SeriesDiverges("bounce spectral radius %.6f is not below 1" % rho)

    term = e_neg @ blocks.int_ext
    acc = term.copy()
    if max_order is not None:
        for _ in range(max_order):
            term = bounce @ term
            acc += term
    else:
        # observed-norm geometric tail: sum_{m>=1} |term| rho^m
        limit = 100000
        for _ in range(limit):
            term = bounce @ term
            acc += term
            tail = float(np.max(np.abs(term))) * rho / (1.0 - rho)
            if tail < tol:
                break
        else:
            raise SeriesDiverges(
                "tail bound %.3e not reached within %d terms" % (tol, limit)
            )
    return blocks.ext_ext + blocks.ext_int @ acc


def verify_involution(g: Graph, locals_, idx: ModeIndex, p: complex) -> float:
    """Max-norm of S_tot(p) S_tot(-p) - I."""
    if g.n_external == 0:
        return 0.0
    s_plus = total_scattering(g, locals_, idx, p).matrix
    s_minus = total_scattering(g, locals_, idx, -p).matrix
    return float(np.max(np.abs(s_plus @ s_minus - np.eye(g.n_external))))


def verify_unitarity(g: Graph, locals_, idx: ModeIndex, p: complex) -> float:
    """Max-norm of S_tot(p)^dagger S_tot(p) - I; meaningful at real p
    with unitary vertex matrices."""
    if g.n_external == 0:
        return 0.0
    s = total_scattering(g, locals_, idx, p).matrix
    return float(np.max(np.abs(s.conj().T @ s - np.eye(g.n_external))))
