"""Secular determinant, its polynomial form, pole extraction and
compact-graph spectra.

For commensurable edge lengths (all integer multiples of a declared
unit) with constant vertex matrices the secular determinant
det(E - s22) is a polynomial in zeta = exp(-i p unit). Its
coefficients are recovered by sampling on the unit circle and an
inverse discrete Fourier transform. Roots where the total scattering
matrix stays bounded are classified as removable and dropped from the
pole list by default.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .assemble import assemble_blocks, assemble_propagation, resolve_locals
from .errors import (
    DegenerateConstantPolynomial,
    EmptyInterval,
    FitResidualTooLarge,
    FixtureUnknown,
    IncommensurableLengths,
    NonConstantLocals,
    NotCompact,
    ValidationError,
)
from .graph import Graph, ModeIndex

__all__ = [
    "SecularPolynomial",
    "PoleRecord",
    "secular_determinant",
    "secular_polynomial",
    "find_poles",
    "compact_spectrum",
    "symmetry_factor_check",
]

# coefficients below this fraction of the largest one count as zero
COEFF_TRIM_RTOL = 1e-12
# interpolation must reproduce held-out determinant samples this well
FIT_RTOL = 1e-9
ROOT_DEDUP_TOL = 1e-8


@dataclass(frozen=True)
class SecularPolynomial:
    """det(E - s22) as a polynomial in zeta = exp(-i p unit_length).

    coefficients[k] multiplies zeta**k; degree_bound is the sum of
    length/unit over all directed internal slots. The source system is
    kept so that roots can be refined against the exact determinant.
    """

    unit_length: float
    coefficients: np.ndarray
    degree_bound: int
    slot_powers: tuple[int, ...]
    graph: Graph
    vertex_locals: tuple
    index: ModeIndex

    def __call__(self, zeta: complex) -> complex:
        return complex(np.polynomial.polynomial.polyval(zeta, self.coefficients))


@dataclass(frozen=True)
class PoleRecord:
    """One root of the secular polynomial.

    p_representative is the principal momentum with
    exp(-i p unit_length) = zeta; the zeta value itself is the
    authoritative location. multiplicity is the size of the root
    cluster after deduplication. removable marks roots at which the
    total scattering matrix stays bounded; they are only reported on
    request.
    """

    zeta: complex
    p_representative: complex
    multiplicity: int
    removable: bool = False


def secular_determinant(g: Graph, locals_, idx: ModeIndex, p: complex) -> complex:
    """det(E(p) - s22(p)); the empty determinant is 1."""
    if g.n_internal == 0:
        return 1.0 + 0.0j
    blocks = assemble_blocks(g, locals_, idx, p)
    prop = assemble_propagation(g, idx, p)
    return complex(np.linalg.det(prop.matrix - blocks.int_int))


def _slot_powers(idx: ModeIndex, unit: float) -> tuple[int, ...]:
    if not (unit > 0):
        raise ValidationError("unit length must be positive, got %r" % unit)
    powers = []
    for length in idx.slot_length:
        m = round(length / unit)
        if m < 1 or abs(length - m * unit) > 1e-9 * unit:
            raise IncommensurableLengths(
                "edge length %r is not an integer multiple of unit %r" % (length, unit)
            )
        powers.append(m)
    return tuple(powers)


def _propagation_in_zeta(idx: ModeIndex, powers, zeta: complex, derivative: int = 0):
    """E as a function of zeta, or its first or second zeta-derivative."""
    n = idx.n_internal_slots
    mat = np.zeros((n, n), dtype=complex)
    for s in range(n):
        m = powers[s]
        if derivative == 0:
            val = zeta**m
        elif derivative == 1:
            val = m * zeta ** (m - 1)
        else:
            val = m * (m - 1) * zeta ** (m - 2) if m >= 2 else 0.0
        mat[idx.partner[s], s] = val
    return mat


def secular_polynomial(g: Graph, locals_, idx: ModeIndex, unit: float) -> SecularPolynomial:
    """Fit the polynomial form of the secular determinant.

    Requires constant vertex matrices and all edge lengths integer
    multiples of the unit. Samples the determinant at 2(D+1) roots of
    unity where D is the degree bound, inverts the discrete Fourier
    transform and verifies the fit at 8 held-out points.
    """
    resolved = resolve_locals(g, locals_, idx)
    if not all(loc.is_constant for loc in resolved):
        raise NonConstantLocals(
            "polynomial form requires constant vertex matrices"
        )
    powers = _slot_powers(idx, unit)
    degree = sum(powers)
    if degree == 0:
        return SecularPolynomial(
            unit_length=unit,
            coefficients=np.ones(1, dtype=complex),
            degree_bound=0,
            slot_powers=powers,
            graph=g,
            vertex_locals=tuple(resolved),
            index=idx,
        )

    s22 = assemble_blocks(g, resolved, idx, 0.0).int_int
    n_samples = 2 * (degree + 1)
    nodes = np.exp(-2j * np.pi * np.arange(n_samples) / n_samples)
    values = np.array(
        [np.linalg.det(_propagation_in_zeta(idx, powers, z) - s22) for z in nodes]
    )
    coeffs = np.fft.ifft(values)

    scale = float(np.max(np.abs(coeffs)))
    tail = float(np.max(np.abs(coeffs[degree + 1 :]))) if n_samples > degree + 1 else 0.0
    if tail > COEFF_TRIM_RTOL * scale:
        raise FitResidualTooLarge(
            "sampled determinant is not a degree-%d polynomial (tail %.3e)"
            % (degree, tail)
        )
    coeffs = np.ascontiguousarray(coeffs[: degree + 1])

    held_out = np.exp(-2j * np.pi * (np.arange(8) + 0.5) / n_samples)
    for z in held_out:
        fitted = np.polynomial.polynomial.polyval(z, coeffs)
        direct = np.linalg.det(_propagation_in_zeta(idx, powers, z) - s22)
        if abs(fitted - direct) > FIT_RTOL * max(scale, 1e-300):
            raise FitResidualTooLarge(
                "fit residual %.3e at held-out point" % abs(fitted - direct)
            )

    coeffs.flags.writeable = False
    return SecularPolynomial(
        unit_length=unit,
        coefficients=coeffs,
        degree_bound=degree,
        slot_powers=powers,
        graph=g,
        vertex_locals=tuple(resolved),
        index=idx,
    )


def _refine_root(poly: SecularPolynomial, s22: np.ndarray, zeta: complex) -> complex:
    """Newton steps on the reciprocal logarithmic derivative of the
    determinant; its zeros are simple at every root, so multiple roots
    do not lose accuracy."""
    idx = poly.index
    powers = poly.slot_powers
    z = complex(zeta)
    for _ in range(5):
        m = _propagation_in_zeta(idx, powers, z) - s22
        mp = _propagation_in_zeta(idx, powers, z, derivative=1)
        mpp = _propagation_in_zeta(idx, powers, z, derivative=2)
        try:
            x = np.linalg.solve(m, mp)
            y = np.linalg.solve(m, mpp)
        except np.linalg.LinAlgError:
            break
        t = np.trace(x)
        tp = np.trace(y) - np.trace(x @ x)
        if tp == 0:
            break
        step = t / tp
        z = z + step
        if abs(step) < 1e-15 * max(1.0, abs(z)):
            break
    return z


def _cluster_roots(roots) -> list[tuple[complex, int]]:
    """Greedy chaining within ROOT_DEDUP_TOL; returns (mean, size)."""
    remaining = list(roots)
    clusters = []
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        changed = True
        while changed:
            changed = False
            for r in remaining[:]:
                if any(abs(r - m) <= ROOT_DEDUP_TOL for m in members):
                    members.append(r)
                    remaining.remove(r)
                    changed = True
        clusters.append((sum(members) / len(members), len(members)))
    return clusters


def _bounded_at(poly: SecularPolynomial, s22: np.ndarray, zeta: complex, radius: float) -> float:
    """Largest total-scattering entry magnitude on a small circle."""
    g = poly.graph
    idx = poly.index
    blocks = assemble_blocks(g, poly.vertex_locals, idx, 0.0)
    worst = 0.0
    for angle in (0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi):
        z = zeta + radius * cmath.exp(1j * angle)
        m = _propagation_in_zeta(idx, poly.slot_powers, z) - s22
        try:
            core = np.linalg.solve(m, blocks.int_ext)
        except np.linalg.LinAlgError:
            return math.inf
        s = blocks.ext_ext + blocks.ext_int @ core
        worst = max(worst, float(np.max(np.abs(s))))
    return worst


def _pole_order(poly, s22, zeta: complex, nearest: float) -> int:
    """Growth exponent of the total scattering matrix at a root: 0 for
    removable, k for a pole of order k."""
    radius = min(1e-4, nearest / 16.0)
    big = _bounded_at(poly, s22, zeta, radius)
    small = _bounded_at(poly, s22, zeta, radius / 8.0)
    if big == 0.0 or not math.isfinite(big) or not math.isfinite(small):
        return 1
    return max(0, round(math.log(small / big) / math.log(8.0)))


def find_poles(poly: SecularPolynomial, include_removable: bool = False) -> list[PoleRecord]:
    """Roots of the secular polynomial in zeta.

    Companion-matrix eigenvalues refined by Newton iteration,
    deduplicated within 1e-8 (multiplicity = cluster size) and sorted
    by modulus then argument. Roots where the total scattering matrix
    stays bounded are dropped unless include_removable is set; for a
    compact graph every root is kept since there is no external block
    to probe.
    """
    c = np.asarray(poly.coefficients)
    if len(c) == 0:
        raise DegenerateConstantPolynomial("empty polynomial has no roots")
    scale = float(np.max(np.abs(c)))
    if scale == 0.0:
        raise DegenerateConstantPolynomial("zero polynomial")
    keep = np.abs(c) >= COEFF_TRIM_RTOL * scale
    first = int(np.argmax(keep))
    last = len(c) - 1 - int(np.argmax(keep[::-1]))
    if last - first < 1:
        if poly.degree_bound == 0:
            raise DegenerateConstantPolynomial(
                "graph has no internal edges; determinant is constant"
            )
        # monomial c*zeta^k: no roots away from zeta = 0, hence no poles
        return []
    window = c[first : last + 1]

    raw = np.roots(window[::-1])
    s22 = assemble_blocks(poly.graph, poly.vertex_locals, poly.index, 0.0).int_int
    refined = [_refine_root(poly, s22, z) for z in raw]
    clusters = _cluster_roots(refined)

    classify = poly.graph.n_external > 0
    records = []
    for zeta, size in clusters:
        if classify:
            others = [abs(zeta - other) for other, _ in clusters if other is not zeta]
            nearest = min(others) if others else math.inf
            order = _pole_order(poly, s22, zeta, nearest)
            removable = order == 0
        else:
            removable = False
        if removable and not include_removable:
            continue
        p_rep = 1j * cmath.log(zeta) / poly.unit_length
        records.append(
            PoleRecord(
                zeta=zeta,
                p_representative=p_rep,
                multiplicity=size,
                removable=removable,
            )
        )
    records.sort(key=lambda r: (abs(r.zeta), cmath.phase(r.zeta)))
    return records


def _momentum_determinant_traces(g, locals_, idx, p, h=1e-6):
    """t = tr(M^-1 M') and t' = tr(M^-1 M'') - tr((M^-1 M')^2) for
    M(p) = E(p) - s22(p); vertex-matrix derivatives fall back to
    central differences when momentum dependent."""
    resolved = locals_
    lengths = np.asarray(idx.slot_length)
    e = assemble_propagation(g, idx, p).matrix
    ep = e @ np.diag(-1j * lengths)
    epp = e @ np.diag(-(lengths**2))
    if all(loc.is_constant for loc in resolved):
        s22 = assemble_blocks(g, resolved, idx, p).int_int
        s22p = 0.0
        s22pp = 0.0
    else:
        s22 = assemble_blocks(g, resolved, idx, p).int_int
        plus = assemble_blocks(g, resolved, idx, p + h).int_int
        minus = assemble_blocks(g, resolved, idx, p - h).int_int
        s22p = (plus - minus) / (2.0 * h)
        s22pp = (plus - 2.0 * s22 + minus) / (h * h)
    m = e - s22
    x = np.linalg.solve(m, ep - s22p)
    y = np.linalg.solve(m, epp - s22pp)
    t = np.trace(x)
    tp = np.trace(y) - np.trace(x @ x)
    return t, tp


def compact_spectrum(g: Graph, locals_, idx: ModeIndex, p_min: float, p_max: float):
    """Real zeros of the secular determinant on [p_min, p_max] for a
    graph without external edges.

    Scans the determinant magnitude on a grid of step
    pi / (8 * total internal length), takes every local minimum
    through a bounded minimizer and Newton polish, and keeps roots
    where the determinant has dropped at least seven orders of
    magnitude below the grid scale.
    """
    if g.n_external > 0:
        raise NotCompact(
            "spectrum is defined for graphs without external edges; found %d"
            % g.n_external
        )
    if not (p_min < p_max):
        raise EmptyInterval("need p_min < p_max, got [%r, %r]" % (p_min, p_max))
    resolved = resolve_locals(g, locals_, idx)

    step = math.pi / (8.0 * g.total_internal_length)
    count = max(int(math.ceil((p_max - p_min) / step)) + 1, 9)
    grid = np.linspace(p_min, p_max, count)
    mags = np.array(
        [abs(secular_determinant(g, resolved, idx, p)) for p in grid]
    )
    scale = float(np.max(mags))
    if scale == 0.0:
        scale = 1.0

    candidates = []
    for i in range(count):
        left = mags[i - 1] if i > 0 else math.inf
        right = mags[i + 1] if i < count - 1 else math.inf
        if mags[i] <= left and mags[i] <= right:
            candidates.append(i)

    roots = []
    for i in candidates:
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, count - 1)]
        if lo == hi:
            continue
        result = scipy.optimize.minimize_scalar(
            lambda p: abs(secular_determinant(g, resolved, idx, p)) ** 2,
            bounds=(lo, hi),
            method="bounded",
        )
        p_root = float(result.x)
        for _ in range(5):
            t, tp = _momentum_determinant_traces(g, resolved, idx, p_root)
            if tp == 0:
                break
            step_c = t / tp
            p_root = float((p_root + step_c).real)
            if abs(step_c) < 1e-15 * max(1.0, abs(p_root)):
                break
        if p_root < p_min - 1e-12 or p_root > p_max + 1e-12:
            continue
        if abs(secular_determinant(g, resolved, idx, p_root)) > 1e-7 * scale:
            continue
        roots.append(min(max(p_root, p_min), p_max))

    roots.sort()
    deduped = []
    for r in roots:
        if not deduped or abs(r - deduped[-1]) > ROOT_DEDUP_TOL:
            deduped.append(r)
    return deduped


def _sign_multiset(colour_matrices) -> list[tuple[tuple[int, ...], int]]:
    """Joint eigenvalue sign patterns with their multiplicities for a
    family of commuting symmetric involutions."""
    mats = [np.asarray(m) for m in colour_matrices]
    nu = len(mats)
    n = mats[0].shape[0]
    traces = []
    for mask in range(2**nu):
        prod = np.eye(n)
        for a in range(nu):
            if (mask >> a) & 1:
                prod = prod @ mats[a]
        traces.append(float(np.trace(prod).real))
    patterns = []
    for bits in range(2**nu):
        sigma = tuple(1 if (bits >> a) & 1 == 0 else -1 for a in range(nu))
        acc = 0.0
        for mask in range(2**nu):
            sign = 1
            for a in range(nu):
                if (mask >> a) & 1:
                    sign *= sigma[a]
            acc += sign * traces[mask]
        count = acc / (2**nu)
        rounded = round(count)
        if abs(count - rounded) > 1e-9:
            raise FixtureUnknown(
                "joint eigenspace dimension %r is not an integer; the "
                "factorization shortcut does not apply" % count
            )
        if rounded < 0:
            raise FixtureUnknown("negative eigenspace dimension %d" % rounded)
        if rounded:
            patterns.append((sigma, rounded))
    total = sum(cnt for _, cnt in patterns)
    if total != n:
        raise FixtureUnknown(
            "eigenspace dimensions sum to %d, expected %d" % (total, n)
        )
    return patterns


def symmetry_factor_check(g: Graph, locals_, idx: ModeIndex, colour_matrices) -> bool:
    """Verify that the product of per-sign-pattern reduced determinants
    matches the assembled secular polynomial coefficientwise within
    1e-9 of its largest coefficient.

    Requires identical constant vertex matrices everywhere, equal edge
    lengths, no loops and a full proper edge colouring given as its
    vertex-pairing matrices. Refuses with FixtureUnknown when the
    reduction does not apply.
    """
    resolved = resolve_locals(g, locals_, idx)
    if not all(loc.is_constant for loc in resolved):
        raise FixtureUnknown("reduction requires constant vertex matrices")
    base = resolved[0].constant
    for loc in resolved[1:]:
        if loc.size != resolved[0].size or np.max(np.abs(loc.constant - base)) > 0:
            raise FixtureUnknown(
                "reduction requires the same matrix at every vertex"
            )
    if any(e.is_loop for e in g.internal_edges):
        raise FixtureUnknown("reduction does not cover loops")

    lengths = {e.length for e in g.internal_edges}
    if len(lengths) != 1:
        raise FixtureUnknown("reduction requires equal edge lengths")
    unit = lengths.pop()

    n_ext = {g.external_degree(v) for v in range(g.vertex_count)}
    n_int = {g.internal_degree(v) for v in range(g.vertex_count)}
    if len(n_ext) != 1 or len(n_int) != 1:
        raise FixtureUnknown("reduction requires a regular fixture")
    k_ext = n_ext.pop()
    nu = n_int.pop()

    mats = [np.asarray(m, dtype=float) for m in colour_matrices]
    if len(mats) != nu:
        raise FixtureUnknown(
            "expected %d colour matrices, got %d" % (nu, len(mats))
        )
    n = g.vertex_count
    for a, mat in enumerate(mats):
        if mat.shape != (n, n):
            raise FixtureUnknown("colour matrix %d has shape %r" % (a, mat.shape))
        if np.max(np.abs(mat - mat.T)) > 0 or np.max(np.abs(mat @ mat - np.eye(n))) > 1e-12:
            raise FixtureUnknown("colour matrix %d is not a symmetric involution" % a)
        if np.max(np.abs(np.diag(mat))) > 0:
            raise FixtureUnknown("colour matrix %d pairs a vertex with itself" % a)
    for a in range(nu):
        for b in range(a + 1, nu):
            if np.max(np.abs(mats[a] @ mats[b] - mats[b] @ mats[a])) > 0:
                raise FixtureUnknown("colour matrices %d and %d do not commute" % (a, b))

    # per-vertex reduced block in colour order; must come out the same
    # at every vertex for the factorization to make sense
    neighbor_of = []
    for v in range(g.vertex_count):
        row = []
        for mat in mats:
            (partners,) = np.nonzero(mat[v])
            if len(partners) != 1:
                raise FixtureUnknown("colour matrix is not a perfect pairing")
            row.append(int(partners[0]))
        neighbor_of.append(row)

    s_red = None
    for v in range(g.vertex_count):
        heads = [idx.internal_order[s][1] for s in idx.vertex_internal[v]]
        # position of each colour's partner in the vertex's slot order
        try:
            perm = [heads.index(neighbor_of[v][a]) for a in range(nu)]
        except ValueError:
            raise FixtureUnknown(
                "colour pairing at vertex %d does not match the graph" % v
            )
        block = base[k_ext:, k_ext:]
        reduced = block[np.ix_(perm, perm)]
        if s_red is None:
            s_red = reduced
        elif np.max(np.abs(reduced - s_red)) > 1e-12:
            raise FixtureUnknown(
                "reduced block depends on the vertex; colouring and matrix "
                "are not aligned"
            )

    left = np.array([1.0 + 0.0j])
    for sigma, count in _sign_multiset(mats):
        d = np.diag(np.asarray(sigma, dtype=float))
        factor = np.linalg.det(d) * np.poly(d @ s_red)
        for _ in range(count):
            left = np.polymul(left, factor)

    assembled = secular_polynomial(g, resolved, idx, unit)
    right = np.asarray(assembled.coefficients)[::-1]
    if len(left) != len(right):
        width = max(len(left), len(right))
        left = np.pad(left, (width - len(left), 0))
        right = np.pad(right, (width - len(right), 0))
    tol = FIT_RTOL * float(np.max(np.abs(right)))
    return bool(np.max(np.abs(left - right)) <= tol)
