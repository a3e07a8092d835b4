"""Joint numerical range tests and isotropic-vector certificates.

Membership of the origin in the joint numerical range W(A, B) is
certified constructively (common kernel vector, or the Kronecker-form
reduction for singular pencils) or by randomized local search; absence is
never claimed, except for the convex hull, where a positive direction of
the four-matrix Hermitian sweep is a genuine separation certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares, minimize, minimize_scalar

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import NotSingular, RankDecisionUnstable, TransformUnavailable
from .kronecker import (
    KroneckerStructure,
    assemble,
    build_block,
    direct_sum,
    equivalence_transforms,
    is_singular,
    staircase_structure,
)
from .linalg import null_space
from .pencil import Pencil, as_matrix

CERT_REL_TOL = 1e-8
BOUNDARY_TOL = 1e-7
INSIDE_SLACK = 1e-8
DOUBLY_COMMUTE_REL_TOL = 1e-10


def herm_parts(m) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian and skew parts (H, K) with m = H + iK."""
    m = np.asarray(m, dtype=complex)
    return (m + m.conj().T) / 2.0, (m - m.conj().T) / 2.0j


def jnr_sample(a, b, count: int, seed: int) -> list[tuple[complex, complex]]:
    """Joint numerical range samples from seeded random unit vectors."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"need square matrices of equal size, got {a.shape} and {b.shape}")
    rng = np.random.default_rng(seed)
    n = a.shape[0]
    out = []
    for _ in range(count):
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        z /= np.linalg.norm(z)
        out.append((complex(z.conj() @ a @ z), complex(z.conj() @ b @ z)))
    return out


# ---------------------------------------------------------------------------
# isotropic certificates


@dataclass(frozen=True)
class IsotropicCertificate:
    """Unit vector with both quadratic-form residuals, plus its provenance.

    ``method`` is one of ``"kernel"``, ``"kronecker-constructive"``,
    ``"random-search"``.
    """

    vector: np.ndarray
    residual_a: float
    residual_b: float
    method: str

    def is_valid(self, a, b, rel_tol: float = CERT_REL_TOL) -> bool:
        """Recompute the residuals from scratch and test them."""
        a = np.asarray(a, dtype=complex)
        b = np.asarray(b, dtype=complex)
        x = self.vector
        if abs(np.linalg.norm(x) - 1.0) > 1e-12:
            return False
        ra = abs(x.conj() @ a @ x)
        rb = abs(x.conj() @ b @ x)
        return bool(
            ra <= rel_tol * max(float(np.linalg.norm(a)), 1e-300)
            and rb <= rel_tol * max(float(np.linalg.norm(b)), 1e-300)
        )


def _certificate(a, b, x, method: str) -> IsotropicCertificate:
    x = np.asarray(x, dtype=complex)
    x = x / np.linalg.norm(x)
    return IsotropicCertificate(
        vector=x,
        residual_a=float(abs(x.conj() @ a @ x)),
        residual_b=float(abs(x.conj() @ b @ x)),
        method=method,
    )


def _search_residual_functions(a, b):
    n = a.shape[0]
    sa = max(float(np.linalg.norm(a)), 1e-300)
    sb = max(float(np.linalg.norm(b)), 1e-300)

    def resid(u):
        z = u[:n] + 1j * u[n:]
        nz = float((z @ z.conj()).real)
        qa = (z.conj() @ a @ z) / (nz * sa)
        qb = (z.conj() @ b @ z) / (nz * sb)
        return np.array([qa.real, qa.imag, qb.real, qb.imag])

    def jac(u):
        z = u[:n] + 1j * u[n:]
        nz = float((z @ z.conj()).real)
        rows = []
        for m, sm in ((a, sa), (b, sb)):
            q = z.conj() @ m @ z
            mz = m @ z
            msz = m.conj().T @ z
            dq = np.concatenate([mz + msz.conj(), -1j * mz + 1j * msz.conj()])
            df = dq / (nz * sm) - q * (2.0 * u) / (nz * nz * sm)
            rows.append(df.real)
            rows.append(df.imag)
        return np.vstack(rows)

    return resid, jac


def isotropic_search(
    a,
    b,
    tol: ToleranceConfig = DEFAULT_TOL,
    restarts: int = 200,
    seed: int | None = None,
    target_rel: float = 1e-11,
) -> IsotropicCertificate | None:
    """Randomized search for a common isotropic unit vector.

    Gauss-Newton polishing of the two complex quadratic forms from random
    starts; returns the first certificate below ``target_rel`` residuals,
    the best valid one otherwise, or None when the search found nothing
    acceptable (which proves nothing about non-membership).
    """
    a = as_matrix(a)
    b = as_matrix(b)
    n = a.shape[0]
    if n == 0:
        return None
    sa = max(float(np.linalg.norm(a)), 1e-300)
    sb = max(float(np.linalg.norm(b)), 1e-300)
    if sa <= 1e-300 and sb <= 1e-300:
        x = np.zeros(n, dtype=complex)
        x[0] = 1.0
        return _certificate(a, b, x, "random-search")
    rng = np.random.default_rng(tol.rng_seed if seed is None else seed)
    resid, jac = _search_residual_functions(a, b)
    best: IsotropicCertificate | None = None
    for _ in range(restarts):
        u0 = rng.standard_normal(2 * n)
        sol = least_squares(resid, u0, jac=jac, method="trf", xtol=3e-16, ftol=3e-16, gtol=3e-16)
        z = sol.x[:n] + 1j * sol.x[n:]
        nz = np.linalg.norm(z)
        if nz < 1e-12:
            continue
        cert = _certificate(a, b, z / nz, "random-search")
        if best is None or cert.residual_a / sa + cert.residual_b / sb < (
            best.residual_a / sa + best.residual_b / sb
        ):
            best = cert
        if cert.residual_a <= target_rel * sa and cert.residual_b <= target_rel * sb:
            return cert
    if best is not None and best.is_valid(a, b):
        return best
    return None


def isotropic_from_singular(p: Pencil, tol: ToleranceConfig = DEFAULT_TOL) -> IsotropicCertificate:
    """Common isotropic vector of the coefficients of a singular pencil.

    Follows the constructive proof: a common kernel vector when one
    exists; otherwise reduce to a leading diag(L_e, L_d^T) corner with
    equivalence transforms, pick the corner vector orthogonal to the
    relevant rows of T^-1 S*, and push it back through S*.  When the
    transforms cannot be trusted, falls back to randomized search; the
    certificate's ``method`` field records which path produced it.
    """
    if not p.is_square:
        raise ValueError(f"isotropic construction needs a square pencil, got {p.shape}")
    if not is_singular(p, tol):
        raise NotSingular("pencil is not singular; no isotropic vector is guaranteed")
    a, b = p.a, p.b
    n = p.rows

    kernel = null_space(np.vstack([a, b]), tol)
    if kernel.shape[1] > 0:
        cert = _certificate(a, b, kernel[:, 0], "kernel")
        if cert.is_valid(a, b):
            return cert

    cert = _constructive_certificate(p, tol)
    if cert is not None and cert.is_valid(a, b):
        return cert

    cert = isotropic_search(a, b, tol, restarts=600)
    if cert is not None and cert.is_valid(a, b):
        return cert
    raise TransformUnavailable(
        "no trustworthy Kronecker transforms and randomized search failed; "
        "cannot certify the guaranteed isotropic vector"
    )


def _constructive_certificate(p: Pencil, tol: ToleranceConfig) -> IsotropicCertificate | None:
    try:
        structure = staircase_structure(p, tol)
    except RankDecisionUnstable:
        return None
    if not structure.col_minimal or not structure.row_minimal:
        return None
    eps1 = structure.col_minimal[0][0]
    del1 = structure.row_minimal[0][0]

    remaining: list[Pencil] = []
    col_left = list(structure.col_minimal)
    col_left[0] = (eps1, col_left[0][1] - 1)
    row_left = list(structure.row_minimal)
    row_left[0] = (del1, row_left[0][1] - 1)
    for d, mult in row_left:
        remaining.extend(build_block("L_transpose", d) for _ in range(mult))
    for e, mult in col_left:
        remaining.extend(build_block("L", e) for _ in range(mult))
    for size, lam in structure.jordan:
        remaining.append(build_block("jordan", size, lam))
    for size in structure.nilpotent:
        remaining.append(build_block("nilpotent", size))
    target = direct_sum(
        [build_block("L", eps1), build_block("L_transpose", del1)] + remaining
    )
    try:
        s, t = equivalence_transforms(p, target, tol)
    except TransformUnavailable:
        return None
    x_mat = np.linalg.inv(t) @ s.conj().T
    rows = range(eps1 + 1, eps1 + del1 + 1)
    cols = range(eps1, eps1 + del1 + 1)
    constraints = np.conj(x_mat[np.ix_(list(rows), list(cols))])
    v_basis = null_space(constraints, tol)
    if v_basis.shape[1] == 0:
        return None
    w = np.zeros(p.rows, dtype=complex)
    w[eps1 : eps1 + del1 + 1] = v_basis[:, 0]
    x = s.conj().T @ w
    if np.linalg.norm(x) < 1e-12:
        return None
    return _certificate(p.a, p.b, x, "kronecker-constructive")


# ---------------------------------------------------------------------------
# convex hull of the joint numerical range


@dataclass(frozen=True)
class SeparationCertificate:
    """Direction in R^4 along which the whole range clears the origin."""

    direction: np.ndarray
    margin: float

    def is_valid(self, a, b, slack: float = 1e-8) -> bool:
        mats = _real_range_matrices(a, b)
        combined = np.tensordot(self.direction, mats, axes=1)
        lam_min = float(np.linalg.eigvalsh(combined)[0])
        return lam_min >= self.margin - slack * max(1.0, abs(self.margin))


@dataclass(frozen=True)
class ConvHullMembership:
    """Outcome of the origin-in-convex-hull decision.

    ``strongest_min`` is the maximal smallest eigenvalue over swept
    directions: positive means separated (origin outside), nonpositive
    means every direction reaches the origin (origin in the closed hull).
    """

    verdict: str  # "inside" | "outside" | "boundary"
    strongest_min: float
    direction: np.ndarray
    scale: float
    certificate: SeparationCertificate | None = None


def _real_range_matrices(a, b) -> np.ndarray:
    ha, ka = herm_parts(a)
    hb, kb = herm_parts(b)
    return np.stack([ha, ka, hb, kb])


def _sphere_lattice(count: int) -> np.ndarray:
    """Low-discrepancy direction set on the unit 3-sphere.

    Kronecker sequence with plastic-constant increments pushed through the
    uniform parametrization of S^3 (double-polar form); deterministic.
    """
    g = 1.2207440846057596  # real root of x**3 = x + 1
    alphas = np.array([1.0 / g, 1.0 / g**2, 1.0 / g**3])
    i = np.arange(count)[:, None] + 0.5
    t, p1, p2 = ((i * alphas) % 1.0).T
    return np.stack(
        [
            np.sqrt(1.0 - t) * np.sin(2 * np.pi * p1),
            np.sqrt(1.0 - t) * np.cos(2 * np.pi * p1),
            np.sqrt(t) * np.sin(2 * np.pi * p2),
            np.sqrt(t) * np.cos(2 * np.pi * p2),
        ],
        axis=1,
    )


def conv_hull_membership(
    a,
    b,
    tol: ToleranceConfig = DEFAULT_TOL,
    directions: int = 2000,
    boundary_tol: float = BOUNDARY_TOL,
) -> ConvHullMembership:
    """Decide whether the origin lies in the closed convex hull of W(A, B).

    Sweeps the smallest eigenvalue of u1 H_A + u2 K_A + u3 H_B + u4 K_B
    over a low-discrepancy lattice of directions and polishes the best
    one.  A strictly positive optimum is a separation certificate; an
    optimum within the boundary band stays inconclusive; anything at or
    below the numerical zero slack means the origin is in the hull.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"need square matrices of equal size, got {a.shape} and {b.shape}")
    mats = _real_range_matrices(a, b)
    scale = max(float(np.linalg.norm(m)) for m in mats)
    if scale <= 0.0:
        return ConvHullMembership("inside", 0.0, np.array([1.0, 0.0, 0.0, 0.0]), 1.0)

    def lam_min(u):
        u = u / np.linalg.norm(u)
        return float(np.linalg.eigvalsh(np.tensordot(u, mats, axes=1))[0])

    grid = _sphere_lattice(max(directions, 8))
    values = np.array([lam_min(u) for u in grid])
    order = np.argsort(values)[::-1]
    best_val = values[order[0]]
    best_dir = grid[order[0]]
    for idx in order[:3]:
        res = minimize(
            lambda u: -lam_min(u),
            grid[idx],
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000},
        )
        if -res.fun > best_val:
            best_val = -res.fun
            best_dir = res.x / np.linalg.norm(res.x)
    if best_val > boundary_tol * scale:
        cert = SeparationCertificate(direction=best_dir, margin=float(best_val))
        return ConvHullMembership("outside", float(best_val), best_dir, scale, cert)
    if best_val > INSIDE_SLACK * scale:
        return ConvHullMembership("boundary", float(best_val), best_dir, scale)
    return ConvHullMembership("inside", float(best_val), best_dir, scale)


def pencil_nr_is_plane(a, b, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether the numerical range of A + lam B covers the whole plane."""
    return conv_hull_membership(a, b, tol).verdict in ("inside", "boundary")


def nr_contains(p: Pencil, lam0: complex, tol: ToleranceConfig = DEFAULT_TOL,
                grid: int = 360) -> bool:
    """Whether 0 lies in the (convex) numerical range of A + lam0 B.

    Sweeps the smallest eigenvalue of the rotated Hermitian part over
    directions of the complex plane and polishes the maximum; the origin
    belongs to the range exactly when no direction separates it.
    """
    if not p.is_square:
        raise ValueError(f"numerical range needs a square pencil, got {p.shape}")
    m = p.at(complex(lam0))
    h, k = herm_parts(m)
    scale = max(float(np.linalg.norm(h)), float(np.linalg.norm(k)))
    if scale <= 0.0 or p.rows == 0:
        return True

    def lam_min(theta):
        return float(np.linalg.eigvalsh(np.cos(theta) * h + np.sin(theta) * k)[0])

    thetas = np.linspace(0.0, 2 * np.pi, max(grid, 8), endpoint=False)
    values = np.array([lam_min(t) for t in thetas])
    best_idx = int(np.argmax(values))
    step = 2 * np.pi / len(thetas)
    center = thetas[best_idx]
    res = minimize_scalar(
        lambda t: -lam_min(t),
        bounds=(center - step, center + step),
        method="bounded",
        options={"xatol": 1e-13},
    )
    best = max(float(values[best_idx]), float(-res.fun))
    return best <= INSIDE_SLACK * scale


def is_doubly_commuting(a, b, rel_tol: float = DOUBLY_COMMUTE_REL_TOL) -> bool:
    """AB = BA and A*B = BA*, each up to 1e-10 relative to |A| |B|."""
    a = as_matrix(a)
    b = as_matrix(b)
    scale = float(np.linalg.norm(a)) * float(np.linalg.norm(b))
    return (
        float(np.linalg.norm(a @ b - b @ a)) <= rel_tol * scale
        and float(np.linalg.norm(a.conj().T @ b - b @ a.conj().T)) <= rel_tol * scale
    )
