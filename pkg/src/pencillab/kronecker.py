"""Kronecker canonical structure of matrix pencils.

Block builders, assembly of canonical pencils, random equivalence
scrambling, and the staircase recovery of the invariants: minimal indices
through nullities of block-Toeplitz resultant matrices, regular structure
through chain (Weyr-type) rank sequences at sampled points plus infinity.
The staircase recovers structure only; equivalence transforms, when
needed, are found separately by :func:`equivalence_transforms`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import (
    InconsistentSingularityEvidence,
    InvalidStructure,
    RankDecisionUnstable,
    TransformUnavailable,
)
from .linalg import (
    anchored_rank,
    det_sample_nodes,
    det_zero_sweep,
    numerical_rank,
    rank_threshold,
    sampled_determinants,
    singular_values,
)
from .pencil import Pencil, as_matrix

# ---------------------------------------------------------------------------
# canonical blocks


def build_block(kind: str, size: int, eigenvalue: complex | None = None) -> Pencil:
    """One canonical Kronecker block as a pencil.

    kind is one of ``"L"`` (size x (size+1) column-minimal block, size >= 0),
    ``"L_transpose"`` ((size+1) x size row-minimal block, size >= 0),
    ``"jordan"`` (size >= 1, needs ``eigenvalue``) or ``"nilpotent"``
    (size >= 1).  Size-0 L blocks are the degenerate 0x1 / 1x0 shapes.
    """
    if kind == "L":
        if size < 0:
            raise InvalidStructure("L block needs size >= 0")
        a = np.zeros((size, size + 1), dtype=complex)
        b = np.zeros((size, size + 1), dtype=complex)
        for i in range(size):
            a[i, i + 1] = 1.0
            b[i, i] = 1.0
        return Pencil(a, b)
    if kind == "L_transpose":
        p = build_block("L", size)
        return p.transposed()
    if kind == "jordan":
        if size < 1:
            raise InvalidStructure("jordan block needs size >= 1")
        if eigenvalue is None:
            raise InvalidStructure("jordan block needs an eigenvalue")
        a = np.eye(size, dtype=complex) * complex(eigenvalue) + np.diag(
            np.ones(size - 1, dtype=complex), 1
        )
        return Pencil(a, np.eye(size, dtype=complex))
    if kind == "nilpotent":
        if size < 1:
            raise InvalidStructure("nilpotent block needs size >= 1")
        b = np.diag(np.ones(size - 1, dtype=complex), 1)
        return Pencil(np.eye(size, dtype=complex), b)
    raise InvalidStructure(f"unknown block kind {kind!r}")


def direct_sum(pencils) -> Pencil:
    """Block-diagonal direct sum of pencils, degenerate shapes included."""
    pencils = list(pencils)
    rows = sum(p.rows for p in pencils)
    cols = sum(p.cols for p in pencils)
    a = np.zeros((rows, cols), dtype=complex)
    b = np.zeros((rows, cols), dtype=complex)
    r = c = 0
    for p in pencils:
        a[r : r + p.rows, c : c + p.cols] = p.a
        b[r : r + p.rows, c : c + p.cols] = p.b
        r += p.rows
        c += p.cols
    return Pencil(a, b)


# ---------------------------------------------------------------------------
# structure description


def _merge_indexed(pairs) -> tuple[tuple[int, int], ...]:
    merged: dict[int, int] = {}
    for idx, mult in pairs:
        idx = int(idx)
        mult = int(mult)
        if idx < 0:
            raise InvalidStructure(f"minimal index must be >= 0, got {idx}")
        if mult < 1:
            raise InvalidStructure(f"multiplicity must be >= 1, got {mult}")
        merged[idx] = merged.get(idx, 0) + mult
    return tuple(sorted(merged.items()))


@dataclass(frozen=True)
class KroneckerStructure:
    """Multiset description of a pencil's Kronecker canonical form.

    ``col_minimal`` and ``row_minimal`` hold (index, multiplicity) pairs
    sorted ascending; ``jordan`` holds (size, eigenvalue) pairs for the
    finite regular part (the block parameter, i.e. the pencil determinant
    vanishes at minus the eigenvalue); ``nilpotent`` holds the sizes of
    the infinite-eigenvalue blocks.
    """

    col_minimal: tuple[tuple[int, int], ...] = ()
    row_minimal: tuple[tuple[int, int], ...] = ()
    jordan: tuple[tuple[int, complex], ...] = ()
    nilpotent: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "col_minimal", _merge_indexed(self.col_minimal))
        object.__setattr__(self, "row_minimal", _merge_indexed(self.row_minimal))
        jordan = []
        for size, lam in self.jordan:
            if int(size) < 1:
                raise InvalidStructure(f"jordan size must be >= 1, got {size}")
            jordan.append((int(size), complex(lam)))
        jordan.sort(key=lambda t: (t[1].real, t[1].imag, t[0]))
        object.__setattr__(self, "jordan", tuple(jordan))
        nil = tuple(sorted(int(s) for s in self.nilpotent))
        if any(s < 1 for s in nil):
            raise InvalidStructure("nilpotent sizes must be >= 1")
        object.__setattr__(self, "nilpotent", nil)

    @property
    def rows(self) -> int:
        return (
            sum(e * m for e, m in self.col_minimal)
            + sum((d + 1) * m for d, m in self.row_minimal)
            + sum(s for s, _ in self.jordan)
            + sum(self.nilpotent)
        )

    @property
    def cols(self) -> int:
        return (
            sum((e + 1) * m for e, m in self.col_minimal)
            + sum(d * m for d, m in self.row_minimal)
            + sum(s for s, _ in self.jordan)
            + sum(self.nilpotent)
        )

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def singular_only(self) -> bool:
        return not self.jordan and not self.nilpotent

    def block_count(self) -> int:
        return (
            sum(m for _, m in self.col_minimal)
            + sum(m for _, m in self.row_minimal)
            + len(self.jordan)
            + len(self.nilpotent)
        )


def assemble(structure: KroneckerStructure) -> Pencil:
    """Canonical block-diagonal pencil for a structure.

    Block order: row-minimal blocks by ascending index, column-minimal
    blocks by ascending index, Jordan blocks, nilpotent blocks.  The
    singular-first ordering is what the commuting-structure module indexes
    against positionally.
    """
    blocks: list[Pencil] = []
    for d, mult in structure.row_minimal:
        blocks.extend(build_block("L_transpose", d) for _ in range(mult))
    for e, mult in structure.col_minimal:
        blocks.extend(build_block("L", e) for _ in range(mult))
    for size, lam in structure.jordan:
        blocks.append(build_block("jordan", size, lam))
    for size in structure.nilpotent:
        blocks.append(build_block("nilpotent", size))
    if not blocks:
        return Pencil(np.zeros((0, 0), dtype=complex), np.zeros((0, 0), dtype=complex))
    return direct_sum(blocks)


def structures_match(
    s1: KroneckerStructure, s2: KroneckerStructure, tol: ToleranceConfig = DEFAULT_TOL
) -> bool:
    """Structure equality with eigenvalue comparison up to the cluster tolerance."""
    if s1.col_minimal != s2.col_minimal or s1.row_minimal != s2.row_minimal:
        return False
    if s1.nilpotent != s2.nilpotent:
        return False
    if len(s1.jordan) != len(s2.jordan):
        return False
    remaining = list(s2.jordan)
    for size, lam in s1.jordan:
        hit = None
        for i, (size2, lam2) in enumerate(remaining):
            if size == size2 and abs(lam - lam2) <= 100 * tol.eig_cluster_tol * max(1.0, abs(lam)):
                hit = i
                break
        if hit is None:
            return False
        remaining.pop(hit)
    return True


# ---------------------------------------------------------------------------
# random equivalence transforms


@dataclass(frozen=True)
class EquivalencePair:
    """Left/right transforms (S, T) of a strict pencil equivalence."""

    s: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "s", as_matrix(self.s))
        object.__setattr__(self, "t", as_matrix(self.t))
        for name, m in (("s", self.s), ("t", self.t)):
            if m.shape[0] != m.shape[1]:
                raise InvalidStructure(f"transform {name} must be square, got {m.shape}")
            if m.shape[0] and numerical_rank(m) != m.shape[0]:
                raise InvalidStructure(f"transform {name} is numerically singular")

    def apply(self, p: Pencil) -> Pencil:
        return Pencil(self.s @ p.a @ self.t, self.s @ p.b @ self.t)


def random_well_conditioned(n: int, rng: np.random.Generator, max_cond: float = 100.0) -> np.ndarray:
    """Random complex matrix with condition number at most max_cond.

    Built as unitary * diagonal * unitary with log-uniform diagonal spread.
    """
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    q1, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    q2, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    half = np.log(max_cond) / 2.0
    diag = np.exp(rng.uniform(-half, half, n))
    return q1 @ (diag[:, None] * q2)


def scramble(p: Pencil, seed: int, max_cond: float = 100.0) -> tuple[Pencil, EquivalencePair]:
    """Hide a pencil behind random well-conditioned transforms.

    Returns (S^-1 (A + lam B) T^-1, (S, T)); applying the returned pair to
    the scrambled pencil recovers the input.
    """
    rng = np.random.default_rng(seed)
    s = random_well_conditioned(p.rows, rng, max_cond)
    t = random_well_conditioned(p.cols, rng, max_cond)
    a = np.linalg.solve(s, np.linalg.solve(t.T, p.a.T).T)
    b = np.linalg.solve(s, np.linalg.solve(t.T, p.b.T).T)
    return Pencil(a, b), EquivalencePair(s, t)


# ---------------------------------------------------------------------------
# staircase rank decisions


def _staircase_rank(m: np.ndarray, tol: ToleranceConfig, context: str, scale: float = 0.0) -> int:
    """Numerical rank with a guard band around the cutoff.

    ``scale`` anchors the cutoff to the ambient problem magnitude, so a
    shifted matrix that degenerates to pure rounding noise is still read
    as rank deficient.  A singular value within a factor 10 of the cutoff
    means the decision is not trustworthy at this tolerance, which the
    staircase reports rather than silently guessing.
    """
    if m.size == 0:
        return 0
    s = singular_values(m)
    anchor = max(float(s[0]) if s.size else 0.0, scale)
    if anchor == 0.0:
        return 0
    thr = tol.rank_rel_tol * anchor * max(m.shape)
    in_band = (s >= thr / 10.0) & (s <= thr * 10.0)
    if np.any(in_band):
        sigma = float(s[np.argmax(in_band)])
        raise RankDecisionUnstable(
            f"{context}: singular value {sigma:.3e} within a factor 10 of cutoff {thr:.3e}",
            sigma=sigma,
            threshold=thr,
        )
    return int(np.count_nonzero(s > thr))


def _pencil_sample_nodes(p: Pencil, tol: ToleranceConfig) -> np.ndarray:
    count = max(tol.sample_count, 2 * max(p.rows, p.cols) + 2)
    return det_sample_nodes(p, count)


def normal_rank(p: Pencil, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Maximum rank of A + lam B over the sample node set."""
    nodes = _pencil_sample_nodes(p, tol)
    return max(numerical_rank(p.at(lam), tol) for lam in nodes)


def _normal_rank_checked(p: Pencil, tol: ToleranceConfig) -> int:
    """Normal rank where at least one maximal node must decide cleanly."""
    nodes = _pencil_sample_nodes(p, tol)
    base = p.norm_scale()
    ranks = []
    errors = []
    for lam in nodes:
        try:
            ranks.append(
                _staircase_rank(p.at(lam), tol, "normal rank sweep", scale=base * max(1.0, abs(lam)))
            )
        except RankDecisionUnstable as exc:
            errors.append(exc)
    if not ranks:
        raise errors[0]
    return max(ranks)


# ---------------------------------------------------------------------------
# minimal indices via block-Toeplitz nullities


def _toeplitz_resultant(p: Pencil, k: int) -> np.ndarray:
    """Coefficient matrix of degree-k polynomial kernel vectors.

    x(lam) = x_0 + ... + x_k lam^k solves (A + lam B) x(lam) = 0 exactly
    when the stacked convolution system with A on the diagonal and B
    shifted below (plus the trailing B x_k = 0 row) annihilates the
    coefficient stack.
    """
    m, n = p.shape
    t = np.zeros(((k + 2) * m, (k + 1) * n), dtype=complex)
    for j in range(k + 1):
        t[j * m : (j + 1) * m, j * n : (j + 1) * n] = p.a
        t[(j + 1) * m : (j + 2) * m, j * n : (j + 1) * n] = p.b
    return t

def _minimal_indices(
    p: Pencil, total: int, tol: ToleranceConfig
) -> tuple[tuple[int, int], ...]:
    """Column minimal indices from first differences of kernel dimensions.

    The space of polynomial kernel vectors of degree <= k has dimension
    sum over minimal indices e of max(0, k + 1 - e); its first difference
    in k counts the indices <= k.
    """
    if total <= 0:
        return ()
    counts: list[int] = []
    prev_nullity = 0
    prev_delta = 0
    k = 0
    reached = 0
    while reached < total:
        nullity = (k + 1) * p.cols - _staircase_rank(
            _toeplitz_resultant(p, k), tol, f"kernel resultant k={k}", scale=p.norm_scale()
        )
        delta = nullity - prev_nullity
        count_k = delta - prev_delta
        if count_k < 0 or delta > total:
            raise RankDecisionUnstable(
                f"inconsistent kernel dimension sequence at degree {k}: "
                f"nullities do not form a valid staircase"
            )
        counts.append(count_k)
        reached = delta
        prev_nullity, prev_delta = nullity, delta
        k += 1
        if k > p.cols + 1:
            raise RankDecisionUnstable(
                "minimal index search exceeded the dimension bound; rank sequence unreliable"
            )
    return tuple((e, c) for e, c in enumerate(counts) if c > 0)


# ---------------------------------------------------------------------------
# regular structure via chain rank sequences


def _chain_matrix(a0: np.ndarray, bc: np.ndarray, k: int) -> np.ndarray:
    """Block lower-bidiagonal system whose kernel holds chains of length k+1."""
    m, n = a0.shape
    s = np.zeros(((k + 1) * m, (k + 1) * n), dtype=complex)
    for j in range(k + 1):
        s[j * m : (j + 1) * m, j * n : (j + 1) * n] = a0
        if j > 0:
            s[j * m : (j + 1) * m, (j - 1) * n : j * n] = bc
    return s


def _chain_sizes(
    a0: np.ndarray,
    bc: np.ndarray,
    kernel_offset: int,
    cap: int,
    tol: ToleranceConfig,
    context: str,
    scale: float = 0.0,
) -> list[int]:
    """Block sizes of the point structure from nullity first differences.

    Each column-minimal block inflates every chain space by one dimension
    per degree, which ``kernel_offset`` subtracts away.
    """
    n = a0.shape[1]
    counts_ge: list[int] = []
    prev_nullity = 0
    k = 0
    while True:
        nullity = (k + 1) * n - _staircase_rank(
            _chain_matrix(a0, bc, k), tol, f"{context} chain k={k}", scale=scale
        )
        step = nullity - prev_nullity
        count = step - kernel_offset
        if count <= 0:
            break
        counts_ge.append(count)
        prev_nullity = nullity
        k += 1
        if k > cap:
            raise RankDecisionUnstable(
                f"{context}: chain sequence exceeded the size bound {cap}"
            )
    sizes: list[int] = []
    for j, c in enumerate(counts_ge):
        nxt = counts_ge[j + 1] if j + 1 < len(counts_ge) else 0
        sizes.extend([j + 1] * (c - nxt))
    return sizes


def _det_polynomial(p: Pencil, tol: ToleranceConfig) -> np.ndarray | None:
    """Trimmed determinant interpolant coefficients, or None when it vanishes."""
    n = p.rows
    if n == 0:
        return None
    nodes = det_sample_nodes(p, n + 1)
    all_zero, _ = det_zero_sweep(p, nodes, tol)
    if all_zero:
        return None
    dets = sampled_determinants(p, nodes)
    radius = abs(nodes[0])
    coeffs = np.fft.fft(dets) / (n + 1) / radius ** np.arange(n + 1)
    if not np.all(np.isfinite(coeffs)):
        return None
    mx = float(np.max(np.abs(coeffs)))
    degree = n
    while degree > 0 and abs(coeffs[degree]) < tol.det_zero_tol * mx:
        degree -= 1
    if degree == 0:
        return None
    return coeffs[: degree + 1]


def _poly_roots(coeffs: np.ndarray) -> np.ndarray:
    degree = len(coeffs) - 1
    monic = coeffs / coeffs[-1]
    comp = np.zeros((degree, degree), dtype=complex)
    if degree > 1:
        comp[1:, :-1] = np.eye(degree - 1)
    comp[:, -1] = -monic[:-1]
    return np.linalg.eigvals(comp)


def _poly_derivative(coeffs: np.ndarray) -> np.ndarray:
    if len(coeffs) <= 1:
        return np.zeros(1, dtype=complex)
    return coeffs[1:] * np.arange(1, len(coeffs))


def _poly_eval(coeffs: np.ndarray, z: complex) -> complex:
    acc = 0.0 + 0.0j
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def _newton_refine(coeffs: np.ndarray, multiplicity: int, z0: complex, radius: float) -> complex:
    """Polish an m-fold root estimate on the (m-1)-th derivative.

    An m-fold root of the interpolant is a simple root of its (m-1)-th
    derivative, where Newton recovers machine accuracy even though the raw
    roots split by ~eps**(1/m).
    """
    c = coeffs
    for _ in range(multiplicity - 1):
        c = _poly_derivative(c)
    if len(c) < 2:
        return z0
    d = _poly_derivative(c)
    z = z0
    for _ in range(80):
        dv = _poly_eval(d, z)
        if dv == 0.0:
            return z0
        step = _poly_eval(c, z) / dv
        z = z - step
        if abs(z - z0) > 50.0 * radius * max(1.0, abs(z0)):
            return z0
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            break
    return z


# Raw interpolant roots of an m-fold eigenvalue split by ~eps**(1/m); the
# cluster radius escalates until the recovered sizes tile the regular part.
_EIG_CLUSTER_LADDER = (3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1)


def _projection_charts(
    p: Pencil, r: int, tol: ToleranceConfig, rng: np.random.Generator
) -> list[dict]:
    """Determinant interpolants of two independent rank-r projections.

    Both projections inherit every true spectrum point of the pencil while
    their spurious roots almost surely differ.  Each draw carries two
    charts: the pencil as given and with the coefficients swapped, whose
    roots are reciprocals; one sampling circle cannot resolve roots spread
    over many decades, but between the two charts every root lies in a
    well-conditioned region.
    """
    m, n = p.shape
    charts: list[dict] = []
    for _ in range(6):
        if len(charts) == 2:
            break
        u = rng.standard_normal((r, m)) + 1j * rng.standard_normal((r, m))
        v = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
        u /= np.sqrt(m)
        v /= np.sqrt(n)
        proj = Pencil(u @ p.a @ v, u @ p.b @ v)
        forward = _det_polynomial(proj, tol)
        if forward is None:
            continue
        reverse = _det_polynomial(Pencil(proj.b, proj.a), tol)
        radius = abs(det_sample_nodes(proj, 1)[0])
        charts.append({"forward": forward, "reverse": reverse, "radius": radius})
    return charts


def _chart_roots(chart: dict) -> np.ndarray:
    """Roots of one projection, each taken from its trustworthy chart."""
    radius = chart["radius"]
    roots = [z for z in _poly_roots(chart["forward"]) if abs(z) <= radius]
    if chart["reverse"] is not None:
        for mu in _poly_roots(chart["reverse"]):
            if mu != 0 and abs(mu) * radius < 1.0:
                roots.append(1.0 / mu)
    return np.array(roots, dtype=complex)


def _refine_cluster(chart: dict, members: list[complex], radius: float) -> complex:
    """Newton-polish a root cluster on whichever chart owns its center."""
    center = complex(np.mean(members))
    if abs(center) <= chart["radius"] or chart["reverse"] is None:
        return _newton_refine(chart["forward"], len(members), center, radius)
    inv = _newton_refine(chart["reverse"], len(members), 1.0 / center, radius)
    if inv == 0:
        return center
    return 1.0 / inv


def _finite_structure_attempt(
    p: Pencil,
    r: int,
    s_right: int,
    g_finite: int,
    tol: ToleranceConfig,
    base: float,
    roots1: np.ndarray,
    roots2: np.ndarray,
    chart1: dict,
    radius: float,
) -> list[tuple[int, complex]] | None:
    """One clustering-radius attempt at the finite regular structure.

    Returns the block list when the recovered sizes exactly tile the
    finite regular part, None when this radius cannot explain it.
    """
    matched = [
        z
        for z in roots1
        if roots2.size and np.min(np.abs(roots2 - z)) <= radius * max(1.0, abs(z))
    ]
    if not matched:
        return None
    clusters = _single_linkage(matched, radius)

    jordan: list[tuple[int, complex]] = []
    points: list[complex] = []
    total = 0
    for members in clusters:
        center = complex(np.mean(members))
        lam0 = _refine_cluster(chart1, members, radius)
        point_scale = base * max(1.0, abs(lam0))
        candidates = [lam0] if abs(lam0 - center) <= 1e-12 else [lam0, center]
        sizes: list[int] = []
        for lam in candidates:
            if anchored_rank(p.at(lam), point_scale, tol) >= r:
                continue
            try:
                sizes = _chain_sizes(
                    p.at(lam), p.b, s_right, g_finite, tol,
                    f"structure at {lam:.6g}", scale=point_scale,
                )
            except RankDecisionUnstable:
                continue
            if sizes:
                lam0 = lam
                break
        if not sizes:
            continue
        jordan.extend((size, -lam0) for size in sizes)
        points.append(lam0)
        total += sum(sizes)
        if total > g_finite:
            return None
    if total != g_finite:
        return None
    # Split roots of one multiple eigenvalue can masquerade as several
    # nearby simple ones and still tile the size budget; recovered points
    # closer than the guard margin are not trustworthy at this radius.
    # The guard is capped so that large ladder rungs (which exist to merge
    # wide high-multiplicity rings) cannot disqualify genuinely distinct
    # eigenvalues at moderate separation.
    guard = min(25.0 * radius, 0.3)
    for i, zi in enumerate(points):
        for zj in points[i + 1 :]:
            if abs(zi - zj) <= guard * max(1.0, abs(zi), abs(zj)):
                return None
    return jordan


def _single_linkage(values: list[complex], radius: float) -> list[list[complex]]:
    """Connected components under |z - w| <= radius * max(1, |z|, |w|)."""
    remaining = list(values)
    clusters: list[list[complex]] = []
    while remaining:
        seed = remaining.pop()
        members = [seed]
        grew = True
        while grew:
            grew = False
            for z in list(remaining):
                if any(abs(z - w) <= radius * max(1.0, abs(z), abs(w)) for w in members):
                    members.append(z)
                    remaining.remove(z)
                    grew = True
        clusters.append(members)
    return clusters


def _finite_regular_structure(
    p: Pencil,
    r: int,
    s_right: int,
    g_finite: int,
    tol: ToleranceConfig,
    rng: np.random.Generator,
    base: float,
) -> list[tuple[int, complex]]:
    """Finite regular blocks of the pencil, validated against its size."""
    charts = _projection_charts(p, r, tol, rng)
    if len(charts) < 2:
        raise RankDecisionUnstable(
            "projected determinants vanished repeatedly; cannot locate the finite spectrum"
        )
    roots1, roots2 = _chart_roots(charts[0]), _chart_roots(charts[1])
    for radius in _EIG_CLUSTER_LADDER:
        jordan = _finite_structure_attempt(
            p, r, s_right, g_finite, tol, base, roots1, roots2, charts[0], radius
        )
        if jordan is not None:
            return jordan
    raise RankDecisionUnstable(
        f"finite regular structure unresolved: no clustering radius tiles "
        f"{g_finite} dimensions"
    )


# ---------------------------------------------------------------------------
# the staircase


def staircase_structure(p: Pencil, tol: ToleranceConfig = DEFAULT_TOL) -> KroneckerStructure:
    """Kronecker invariants of a pencil (structure only, no transforms).

    Column minimal indices come from the kernel resultant nullities of the
    pencil, row minimal indices from the transposed pencil, nilpotent
    sizes from chain sequences with the roles of A and B swapped, and the
    finite regular structure from chain sequences at projection-validated
    spectrum points.  A final shape audit must account for every row and
    column; anything unexplained raises :class:`RankDecisionUnstable`.
    """
    m, n = p.shape
    if m == 0 or n == 0:
        col = ((0, n),) if n else ()
        row = ((0, m),) if m else ()
        return KroneckerStructure(col_minimal=col, row_minimal=row)
    rng = np.random.default_rng(tol.rng_seed ^ 0x5CA1AB1E)
    r = _normal_rank_checked(p, tol)
    s_right = n - r
    s_left = m - r
    col_minimal = _minimal_indices(p, s_right, tol)
    row_minimal = _minimal_indices(p.transposed(), s_left, tol)

    rows_singular = sum(e * mult for e, mult in col_minimal) + sum(
        (d + 1) * mult for d, mult in row_minimal
    )
    cols_singular = sum((e + 1) * mult for e, mult in col_minimal) + sum(
        d * mult for d, mult in row_minimal
    )
    g = m - rows_singular
    if g != n - cols_singular or g < 0:
        raise RankDecisionUnstable(
            f"singular structure does not tile the pencil: {m - rows_singular} rows vs "
            f"{n - cols_singular} columns left for the regular part"
        )

    nilpotent: list[int] = []
    jordan: list[tuple[int, complex]] = []
    if g > 0:
        base = p.norm_scale()
        nilpotent = _chain_sizes(p.b, p.a, s_right, g, tol, "infinite structure", scale=base)
        g_finite = g - sum(nilpotent)
        if g_finite < 0:
            raise RankDecisionUnstable("infinite structure exceeds the regular part")
        if g_finite > 0:
            jordan = _finite_regular_structure(p, r, s_right, g_finite, tol, rng, base)
    return KroneckerStructure(
        col_minimal=col_minimal,
        row_minimal=row_minimal,
        jordan=tuple(jordan),
        nilpotent=tuple(nilpotent),
    )


# ---------------------------------------------------------------------------
# singularity decision


@dataclass(frozen=True)
class SingularityEvidence:
    """Two-channel singularity verdict for a square pencil."""

    singular: bool
    rank_verdict: bool
    det_verdict: bool
    normal_rank: int
    dimension: int
    max_det_ratio: float
    node_count: int

    def __bool__(self) -> bool:
        return self.singular


def is_singular(p: Pencil, tol: ToleranceConfig = DEFAULT_TOL) -> SingularityEvidence:
    """Decide whether det(A + lam B) vanishes identically.

    Two independent decision channels must agree: rank deficiency of
    A + lam B across the whole node sweep (the staircase's minimal-block
    witness) and negligibility of every sampled determinant.  Disagreement
    raises :class:`InconsistentSingularityEvidence` with both verdicts.
    """
    if not p.is_square:
        raise ValueError(f"singularity is defined for square pencils, got {p.shape}")
    n = p.rows
    if n == 0:
        return SingularityEvidence(False, False, False, 0, 0, 0.0, 0)
    nodes = _pencil_sample_nodes(p, tol)
    r = max(numerical_rank(p.at(lam), tol) for lam in nodes)
    rank_verdict = r < n
    det_verdict, worst_ratio = det_zero_sweep(p, nodes, tol)
    if rank_verdict != det_verdict:
        raise InconsistentSingularityEvidence(
            f"rank sweep says singular={rank_verdict} but determinant sweep says "
            f"singular={det_verdict} (normal rank {r}/{n}, max pivot ratio {worst_ratio:.3e})",
            rank_verdict=rank_verdict,
            det_verdict=det_verdict,
        )
    return SingularityEvidence(
        singular=rank_verdict,
        rank_verdict=rank_verdict,
        det_verdict=det_verdict,
        normal_rank=r,
        dimension=n,
        max_det_ratio=worst_ratio,
        node_count=len(nodes),
    )


# ---------------------------------------------------------------------------
# equivalence transforms to a known canonical form


def equivalence_transforms(
    p: Pencil,
    target: Pencil,
    tol: ToleranceConfig = DEFAULT_TOL,
    rng: np.random.Generator | None = None,
    tries: int = 12,
    max_cond: float = 1e8,
) -> tuple[np.ndarray, np.ndarray]:
    """Invertible (S, T) with S (A + lam B) T equal to the target pencil.

    Solves the coupled intertwining system S A = D_A R, S B = D_B R for
    (S, R) as a nullspace problem; a random element of that nullspace is
    almost surely invertible whenever the pencils are strictly equivalent.
    The reconstruction is verified before returning, so an untrustworthy
    answer raises :class:`TransformUnavailable` instead of escaping.
    """
    if not p.is_square or not target.is_square or p.shape != target.shape:
        raise TransformUnavailable(
            f"transform solve needs equal square shapes, got {p.shape} and {target.shape}"
        )
    n = p.rows
    if n == 0:
        return np.zeros((0, 0), dtype=complex), np.zeros((0, 0), dtype=complex)
    if rng is None:
        rng = np.random.default_rng(tol.rng_seed ^ 0x7A115)
    n2 = n * n
    k = np.zeros((2 * n2, 2 * n2), dtype=complex)
    basis = np.zeros((n, n), dtype=complex)
    for idx in range(n2):
        i, j = divmod(idx, n)
        basis[i, j] = 1.0
        k[:n2, idx] = (basis @ p.a).reshape(-1)
        k[n2:, idx] = (basis @ p.b).reshape(-1)
        k[:n2, n2 + idx] = -(target.a @ basis).reshape(-1)
        k[n2:, n2 + idx] = -(target.b @ basis).reshape(-1)
        basis[i, j] = 0.0
    _, sig, vh = np.linalg.svd(k)
    thr = rank_threshold(sig, k.shape, tol)
    null_dim = int(np.count_nonzero(sig <= thr)) if thr > 0 else 2 * n2
    if null_dim == 0:
        raise TransformUnavailable("intertwining system has no nullspace; pencils not equivalent")
    null = vh[2 * n2 - null_dim :].conj().T
    scale = max(target.norm_scale(), 1.0)
    for _ in range(tries):
        w = rng.standard_normal(null_dim) + 1j * rng.standard_normal(null_dim)
        x = null @ w
        s = x[:n2].reshape(n, n)
        rmat = x[n2:].reshape(n, n)
        if np.linalg.cond(s) > max_cond or np.linalg.cond(rmat) > max_cond:
            continue
        t = np.linalg.inv(rmat)
        err = max(
            float(np.linalg.norm(s @ p.a @ t - target.a)),
            float(np.linalg.norm(s @ p.b @ t - target.b)),
        )
        if err <= 1e-8 * scale:
            return s, t
    raise TransformUnavailable(
        f"no well-conditioned transforms found in {tries} draws from a "
        f"{null_dim}-dimensional intertwining space"
    )
