"""Dense complex linear algebra substrate.

Factorizations are delegated to LAPACK through numpy (complex SVD;
eigenvalues via Hessenberg reduction plus shifted QR, which is what
``zgeev`` performs).  Everything tolerance-sensitive is parameterized by
:class:`~pencillab.config.ToleranceConfig` and the helpers here are the
single place rank/zero decisions get made.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import warnings

import numpy as np
import scipy.linalg

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import DecompositionError, SingularPencil
from .pencil import Pencil, as_matrix

# Double roots of an interpolated polynomial split by about sqrt(eps) in
# floating point; clustering has to bridge that gap even when the user
# tolerance is tighter.
_CLUSTER_FLOOR = 4.0 * np.sqrt(np.finfo(float).eps)


@dataclass(frozen=True)
class SpectrumList:
    """Eigenvalues with algebraic multiplicities.

    ``infinite`` counts eigenvalues at infinity (pencil use only); for a
    plain matrix spectrum it is zero and multiplicities sum to the
    dimension.
    """

    values: tuple[complex, ...]
    multiplicities: tuple[int, ...]
    infinite: int = 0

    def __post_init__(self):
        if len(self.values) != len(self.multiplicities):
            raise ValueError("values and multiplicities must have equal length")
        if any(m < 1 for m in self.multiplicities):
            raise ValueError("multiplicities must be positive")

    @property
    def total(self) -> int:
        return sum(self.multiplicities) + self.infinite

    def expanded(self) -> list[complex]:
        """All finite values repeated by multiplicity."""
        out: list[complex] = []
        for v, m in zip(self.values, self.multiplicities):
            out.extend([v] * m)
        return out


def svd(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full SVD returning (U, sigma, V) with m = U @ diag(sigma) @ V*.

    Note V is returned directly (not its conjugate transpose).
    """
    m = as_matrix(m)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise DecompositionError(f"SVD did not converge: {exc}", detail=str(exc)) from exc
    return u, s, vh.conj().T


def singular_values(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return np.zeros(0)
    try:
        return np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise DecompositionError(f"SVD did not converge: {exc}", detail=str(exc)) from exc


def rank_threshold(sigma: np.ndarray, shape: tuple[int, int], tol: ToleranceConfig) -> float:
    """Cutoff below which singular values count as zero."""
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0.0
    return tol.rank_rel_tol * float(sigma[0]) * max(shape)


def numerical_rank(m, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Number of singular values above the relative cutoff."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0
    s = singular_values(m)
    thr = rank_threshold(s, m.shape, tol)
    if thr == 0.0:
        return 0
    return int(np.count_nonzero(s > thr))


def anchored_rank(m, scale: float, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Numerical rank with the cutoff anchored to an ambient magnitude.

    Useful for shifted matrices that may degenerate to rounding noise, for
    which the purely relative cutoff would report full rank.
    """
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0
    s = singular_values(m)
    anchor = max(float(s[0]) if s.size else 0.0, float(scale))
    if anchor == 0.0:
        return 0
    thr = tol.rank_rel_tol * anchor * max(m.shape)
    return int(np.count_nonzero(s > thr))


def null_space(m, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the right kernel, one column per kernel direction."""
    m = as_matrix(m)
    if m.size == 0:
        return np.eye(m.shape[1], dtype=complex)
    u, s, v = svd(m)
    thr = rank_threshold(s, m.shape, tol)
    r = int(np.count_nonzero(s > thr)) if thr > 0.0 else 0
    return np.ascontiguousarray(v[:, r:])


def determinant(m) -> complex:
    """LU-based determinant."""
    m = np.asarray(m, dtype=complex)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"determinant needs a square matrix, got {m.shape}")
    if m.shape[0] == 0:
        return 1.0 + 0.0j
    return complex(np.linalg.det(m))


def cluster_values(values, tol: ToleranceConfig = DEFAULT_TOL) -> SpectrumList:
    """Group nearby complex values into (value, multiplicity) clusters.

    Values are sorted lexicographically by (Re, Im) and chained into a
    cluster while they stay within the cluster radius of the running
    centroid.  The radius is relative to the centroid magnitude with an
    absolute floor of 1.
    """
    vs = sorted((complex(v) for v in values), key=lambda z: (z.real, z.imag))
    if not vs:
        return SpectrumList((), ())
    radius_tol = max(tol.eig_cluster_tol, _CLUSTER_FLOOR)
    reps: list[complex] = []
    mults: list[int] = []
    current = [vs[0]]
    centroid = vs[0]
    for v in vs[1:]:
        if abs(v - centroid) <= radius_tol * max(1.0, abs(centroid)):
            current.append(v)
            centroid = sum(current) / len(current)
        else:
            reps.append(centroid)
            mults.append(len(current))
            current = [v]
            centroid = v
    reps.append(centroid)
    mults.append(len(current))
    return SpectrumList(tuple(reps), tuple(mults))


def eigenvalues(m, tol: ToleranceConfig = DEFAULT_TOL) -> SpectrumList:
    """Matrix spectrum with multiplicities from eigenvalue clustering."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"eigenvalues need a square matrix, got {m.shape}")
    if m.shape[0] == 0:
        return SpectrumList((), ())
    try:
        vals = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"QR eigenvalue iteration did not converge: {exc}",
                                 detail=str(exc)) from exc
    return cluster_values(vals, tol)


# ---------------------------------------------------------------------------
# determinant sampling of a pencil


def det_sample_nodes(p: Pencil, count: int) -> np.ndarray:
    """Equally spaced nodes on a circle whose radius balances |A| against |B|."""
    na = float(np.linalg.norm(p.a))
    nb = float(np.linalg.norm(p.b))
    radius = max(na, 1e-12) / max(nb, 1e-12)
    radius = float(np.clip(radius, 1e-3, 1e3))
    return radius * np.exp(2j * np.pi * np.arange(count) / count)


def sampled_determinants(p: Pencil, nodes) -> np.ndarray:
    """Determinants of the norm-scaled pencil at the given nodes.

    The uniform 1/s**n scaling keeps values representable without moving
    any root of the determinant polynomial.
    """
    s = p.norm_scale()
    if s == 0.0:
        return np.zeros(len(nodes), dtype=complex)
    a, b = p.a / s, p.b / s
    return np.array([np.linalg.det(a + lam * b) for lam in nodes])


def pivot_collapse_ratio(m) -> float:
    """Smallest-to-largest LU pivot magnitude ratio.

    The determinant equals the pivot product up to sign, so a collapsed
    ratio is the determinant-channel witness that the value is numerically
    zero; healthy ratios track the conditioning of the matrix instead of
    its norm, which keeps the test meaningful for spread spectra.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape[0] == 0:
        return 1.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, _ = scipy.linalg.lu_factor(m, check_finite=False)
    diag = np.abs(np.diag(lu))
    top = float(diag.max())
    if top == 0.0:
        return 0.0
    return float(diag.min() / top)


def det_zero_sweep(p: Pencil, nodes, tol: ToleranceConfig) -> tuple[bool, float]:
    """Determinant-channel singularity verdict over a node sweep.

    Returns (all determinants negligible, largest pivot ratio observed).
    """
    worst = 0.0
    all_zero = True
    for lam in nodes:
        ratio = pivot_collapse_ratio(p.at(lam))
        worst = max(worst, ratio)
        if ratio >= tol.det_zero_tol:
            all_zero = False
    return all_zero, worst


def pencil_determinant_coefficients(p: Pencil, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Coefficients c_0..c_n of det(A/s + lam*B/s) recovered by DFT.

    Sampling on an equispaced circle makes the interpolation an inverse
    DFT, which is perfectly conditioned; the uniform 1/s**n scaling leaves
    the roots untouched.
    """
    if not p.is_square:
        raise ValueError("determinant interpolation needs a square pencil")
    n = p.rows
    nodes = det_sample_nodes(p, n + 1)
    dets = sampled_determinants(p, nodes)
    radius = abs(nodes[0])
    coeffs = np.fft.fft(dets) / (n + 1) / radius ** np.arange(n + 1)
    return coeffs


def pencil_eigenvalues(p: Pencil, tol: ToleranceConfig = DEFAULT_TOL) -> SpectrumList:
    """Roots of det(A + lam*B) with multiplicities, plus the count at infinity.

    The determinant is interpolated at n+1 circle nodes and the interpolant
    is solved through a companion-matrix eigenproblem.  Degree deficiency
    of the interpolant is reported as eigenvalues at infinity.  Raises
    :class:`SingularPencil` when every sampled determinant is negligible.
    """
    if not p.is_square:
        raise ValueError("pencil eigenvalues need a square pencil")
    n = p.rows
    if n == 0:
        return SpectrumList((), ())
    nodes = det_sample_nodes(p, n + 1)
    all_zero, _ = det_zero_sweep(p, nodes, tol)
    if all_zero:
        raise SingularPencil(
            "all sampled determinants are negligible; the pencil appears singular"
        )
    dets = sampled_determinants(p, nodes)
    radius = abs(nodes[0])
    coeffs = np.fft.fft(dets) / (n + 1) / radius ** np.arange(n + 1)
    mx = float(np.max(np.abs(coeffs)))
    degree = n
    while degree > 0 and abs(coeffs[degree]) < tol.det_zero_tol * mx:
        degree -= 1
    if degree == 0:
        return SpectrumList((), (), infinite=n)
    roots = _companion_roots(coeffs[: degree + 1])
    spectrum = cluster_values(roots, tol)
    return SpectrumList(spectrum.values, spectrum.multiplicities, infinite=n - degree)


def _companion_roots(coeffs: np.ndarray) -> np.ndarray:
    """Roots of sum(coeffs[j] * lam**j) via the companion eigenproblem."""
    degree = len(coeffs) - 1
    monic = coeffs / coeffs[-1]
    comp = np.zeros((degree, degree), dtype=complex)
    if degree > 1:
        comp[1:, :-1] = np.eye(degree - 1)
    comp[:, -1] = -monic[:-1]
    try:
        return np.linalg.eigvals(comp)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(
            f"companion eigenvalue iteration did not converge: {exc}", detail=str(exc)
        ) from exc
