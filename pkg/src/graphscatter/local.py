"""Per-vertex scattering matrices.

A vertex matrix acts on the vertex's slots (externals first, then the
internal half-edges owned by the vertex) and must satisfy the
involution S(p) S(-p) = I. Constant matrices are checked exactly once;
momentum-dependent ones are checked on a fixed sample of momenta.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegreeMismatch, NotInvolutive, ShapeMismatch, SizeMismatch

__all__ = [
    "LocalScattering",
    "INVOLUTION_TOL",
    "constant_local",
    "momentum_local",
    "kirchhoff_local",
    "tetra2_local",
    "check_rotation_invariance",
]

INVOLUTION_TOL = 1e-10

# momentum-dependent matrices are validated on these samples and their
# negatives
_SAMPLE_MOMENTA = tuple(np.linspace(0.1, 10.0, 16))


@dataclass(frozen=True)
class LocalScattering:
    """Scattering matrix at one vertex.

    Exactly one of ``constant`` or ``evaluator`` is set. ``unitary``
    records whether the matrix was unitary at every validation point.
    ``family`` is a round-trip tag for spec files.
    """

    vertex: int
    size: int
    constant: np.ndarray | None
    evaluator: Callable[[complex], np.ndarray] | None
    unitary: bool
    family: str | None = None

    @property
    def is_constant(self) -> bool:
        return self.constant is not None

    def matrix(self, p: complex) -> np.ndarray:
        if self.constant is not None:
            return self.constant
        out = np.asarray(self.evaluator(p), dtype=complex)
        if out.shape != (self.size, self.size):
            raise SizeMismatch(
                "evaluator for vertex %d returned shape %r, expected (%d, %d)"
                % (self.vertex, out.shape, self.size, self.size)
            )
        return out


def _as_square(entries, vertex: int) -> np.ndarray:
    mat = np.asarray(entries, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise SizeMismatch(
            "matrix for vertex %d has shape %r, expected square" % (vertex, mat.shape)
        )
    return mat


def _involution_defect(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a @ b - np.eye(a.shape[0]))))


def _unitarity_defect(a: np.ndarray) -> float:
    return float(np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0]))))


def constant_local(vertex: int, entries) -> LocalScattering:
    """Wrap a constant matrix, verifying S S = I within 1e-10."""
    mat = _as_square(entries, vertex)
    defect = _involution_defect(mat, mat)
    if defect >= INVOLUTION_TOL:
        raise NotInvolutive(
            "matrix for vertex %d violates S*S = I (defect %.3e)" % (vertex, defect)
        )
    mat.flags.writeable = False
    return LocalScattering(
        vertex=vertex,
        size=mat.shape[0],
        constant=mat,
        evaluator=None,
        unitary=_unitarity_defect(mat) < INVOLUTION_TOL,
    )


def momentum_local(
    vertex: int,
    size: int,
    evaluator: Callable[[complex], np.ndarray],
    samples=_SAMPLE_MOMENTA,
) -> LocalScattering:
    """Wrap a momentum-dependent evaluator.

    The involution S(p) S(-p) = I is checked at each sample momentum;
    the matrix is flagged unitary when S(p)^dagger S(p) = I holds at
    every real sample as well. The evaluator must be pure.
    """
    unitary = True
    for p in samples:
        plus = np.asarray(evaluator(p), dtype=complex)
        minus = np.asarray(evaluator(-p), dtype=complex)
        if plus.shape != (size, size) or minus.shape != (size, size):
            raise SizeMismatch(
                "evaluator for vertex %d returned shape %r, expected (%d, %d)"
                % (vertex, plus.shape, size, size)
            )
        defect = _involution_defect(plus, minus)
        if defect >= INVOLUTION_TOL:
            raise NotInvolutive(
                "evaluator for vertex %d violates S(p)S(-p) = I at p=%r (defect %.3e)"
                % (vertex, p, defect)
            )
        if _unitarity_defect(plus) >= INVOLUTION_TOL:
            unitary = False
    return LocalScattering(
        vertex=vertex,
        size=size,
        constant=None,
        evaluator=evaluator,
        unitary=unitary,
    )


def kirchhoff_local(vertex: int, degree: int) -> LocalScattering:
    """Scale-invariant matrix (2/n) J - I at a degree-n vertex."""
    if degree < 1:
        raise SizeMismatch("degree must be at least 1, got %d" % degree)
    mat = np.full((degree, degree), 2.0 / degree, dtype=complex)
    mat -= np.eye(degree)
    mat.flags.writeable = False
    return LocalScattering(
        vertex=vertex,
        size=degree,
        constant=mat,
        evaluator=None,
        unitary=True,
        family="kirchhoff",
    )


def tetra2_local(vertex: int, degree: int = 4) -> LocalScattering:
    """The second rotation-invariant matrix at a degree-4 vertex.

    Row 0 is (-1/2, 1/2, 1/2, 1/2); the remaining rows have diagonal
    5/6 and off-diagonal entries 1/2 toward slot 0 and -1/6 otherwise.
    """
    if degree != 4:
        raise DegreeMismatch("this family requires a degree-4 vertex, got %d" % degree)
    mat = np.array(
        [
            [-3, 3, 3, 3],
            [3, 5, -1, -1],
            [3, -1, 5, -1],
            [3, -1, -1, 5],
        ],
        dtype=complex,
    ) / 6.0
    mat.flags.writeable = False
    return LocalScattering(
        vertex=vertex,
        size=4,
        constant=mat,
        evaluator=None,
        unitary=True,
        family="tetra2",
    )


def check_rotation_invariance(s: LocalScattering, cycle) -> bool:
    """True when conjugating by the given cyclic permutation of the
    internal slots (slot 0 held fixed) leaves the matrix unchanged
    within 1e-12.

    ``cycle`` permutes the internal slots 0..n-1 of a vertex with one
    external slot and n internal slots, and must be a single n-cycle.
    """
    cycle = list(cycle)
    n = s.size - 1
    if len(cycle) != n or sorted(cycle) != list(range(n)):
        raise ShapeMismatch(
            "expected a permutation of %d internal slots, got %r" % (n, cycle)
        )
    # single-cycle check: the orbit of 0 must have length n
    seen = 0
    pos = 0
    while True:
        pos = cycle[pos]
        seen += 1
        if pos == 0:
            break
    if seen != n:
        raise ShapeMismatch("permutation %r is not a single %d-cycle" % (cycle, n))

    rot = np.zeros((s.size, s.size))
    rot[0, 0] = 1.0
    for old, new in enumerate(cycle):
        rot[1 + new, 1 + old] = 1.0

    if s.is_constant:
        mats = [s.constant]
    else:
        mats = [s.matrix(p) for p in _SAMPLE_MOMENTA]
    return all(float(np.max(np.abs(rot @ m @ rot.T - m))) < 1e-12 for m in mats)
