"""Structure theory of pencils with commuting coefficients.

Covers the intertwiner equation A M B = B M A for canonical singular
direct sums (block zero/Toeplitz/Hankel pattern and its free-parameter
count, cross-checked by a brute-force vectorized solver), the
feasibility inequalities a commuting pair's Kronecker multiplicities must
satisfy, and the equality-case construction of an invertible multiplier
E making EA and EB commute.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import EqualityConditionFails, InvalidStructure, TransformUnavailable
from .kronecker import KroneckerStructure, assemble, equivalence_transforms, staircase_structure
from .linalg import null_space, numerical_rank
from .pencil import Pencil

PATTERN_REL_TOL = 1e-8
BRUTE_FORCE_MAX_DIM = 12


# ---------------------------------------------------------------------------
# singular-only structures


@dataclass(frozen=True)
class SingularStructure:
    """Kronecker data of a direct sum of singular blocks only.

    Both families list (index, multiplicity) ascending and may include the
    index-0 group; ``row_minimal`` describes transposed (row) blocks,
    ``col_minimal`` the column blocks.
    """

    row_minimal: tuple[tuple[int, int], ...] = ()
    col_minimal: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        ks = KroneckerStructure(
            col_minimal=self.col_minimal, row_minimal=self.row_minimal
        )
        object.__setattr__(self, "row_minimal", ks.row_minimal)
        object.__setattr__(self, "col_minimal", ks.col_minimal)

    @classmethod
    def from_kronecker(cls, structure: KroneckerStructure) -> "SingularStructure":
        if not structure.singular_only:
            raise InvalidStructure("structure has regular blocks; not singular-only")
        return cls(row_minimal=structure.row_minimal, col_minimal=structure.col_minimal)

    def to_kronecker(self) -> KroneckerStructure:
        return KroneckerStructure(
            col_minimal=self.col_minimal, row_minimal=self.row_minimal
        )

    @property
    def rows(self) -> int:
        return self.to_kronecker().rows

    @property
    def cols(self) -> int:
        return self.to_kronecker().cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def zero_row_count(self) -> int:
        return dict(self.row_minimal).get(0, 0)

    def zero_col_count(self) -> int:
        return dict(self.col_minimal).get(0, 0)

    def positive_row_groups(self) -> list[tuple[int, int]]:
        return [(d, m) for d, m in self.row_minimal if d > 0]

    def positive_col_groups(self) -> list[tuple[int, int]]:
        return [(e, m) for e, m in self.col_minimal if e > 0]


def _require_square_singular(s: SingularStructure) -> int:
    if not s.is_square:
        raise InvalidStructure(
            f"intertwiner pattern needs a square structure, got {s.rows} x {s.cols}"
        )
    return s.rows


# ---------------------------------------------------------------------------
# the intertwiner pattern


@dataclass(frozen=True)
class PatternBlock:
    """One block of the intertwiner pattern in global coordinates."""

    row_start: int
    col_start: int
    rows: int
    cols: int
    kind: str  # "free" | "zero" | "toeplitz" | "toeplitz_t" | "hankel"
    params: int


@dataclass(frozen=True)
class IntertwinerPattern:
    """Blockwise description of all solutions of A M B = B M A."""

    structure: SingularStructure
    blocks: tuple[PatternBlock, ...]

    @property
    def zero_blocks(self):
        return tuple(b for b in self.blocks if b.kind == "zero")

    @property
    def toeplitz_blocks(self):
        return tuple(b for b in self.blocks if b.kind in ("toeplitz", "toeplitz_t"))

    @property
    def hankel_blocks(self):
        return tuple(b for b in self.blocks if b.kind == "hankel")

    @property
    def free_blocks(self):
        return tuple(b for b in self.blocks if b.kind == "free")

    @property
    def parameter_count(self) -> int:
        return sum(b.params for b in self.blocks)


def _instance_row_blocks(s: SingularStructure) -> list[tuple[str, int, int]]:
    """(side, index value, height) per block instance, in canonical order."""
    out = []
    for d, mult in s.row_minimal:
        out.extend([("delta", d, d)] * mult)
    for e, mult in s.col_minimal:
        out.extend([("eps", e, e + 1)] * mult)
    return out


def _instance_col_blocks(s: SingularStructure) -> list[tuple[str, int, int]]:
    out = []
    for d, mult in s.row_minimal:
        out.extend([("delta", d, d + 1)] * mult)
    for e, mult in s.col_minimal:
        out.extend([("eps", e, e)] * mult)
    return out


def _classify(row_side: str, ri: int, col_side: str, cj: int) -> str:
    """Pattern kind of one block, given the two group indices.

    The banded-Toeplitz blocks carry index-difference many parameters: the
    shift relations of the intertwining equation act from the top row down
    and from the bottom row up, truncating the band to offsets
    0..(difference-1); the brute-force solver confirms the count.
    """
    if row_side == "delta" and col_side == "delta":
        if cj == 0:
            return "free"
        if ri <= cj:
            return "zero"
        return "toeplitz"
    if row_side == "delta" and col_side == "eps":
        return "zero"
    if row_side == "eps" and col_side == "delta":
        if ri == 0 or cj == 0:
            return "free"
        return "hankel"
    # eps x eps
    if ri == 0:
        return "free"
    if ri >= cj:
        return "zero"
    return "toeplitz_t"


def _block_params(kind: str, rows: int, cols: int) -> int:
    if kind == "free":
        return rows * cols
    if kind == "zero":
        return 0
    if kind == "toeplitz":
        return rows - cols + 1
    if kind == "toeplitz_t":
        return cols - rows + 1
    if kind == "hankel":
        return rows + cols - 1
    raise InvalidStructure(f"unknown pattern kind {kind!r}")


def intertwiner_pattern(s: SingularStructure) -> IntertwinerPattern:
    """Full block map of the A M B = B M A solution space."""
    _require_square_singular(s)
    blocks = []
    r0 = 0
    for row_side, ri, height in _instance_row_blocks(s):
        if height == 0:
            continue
        c0 = 0
        for col_side, cj, width in _instance_col_blocks(s):
            if width == 0:
                continue
            kind = _classify(row_side, ri, col_side, cj)
            blocks.append(
                PatternBlock(r0, c0, height, width, kind, _block_params(kind, height, width))
            )
            c0 += width
        r0 += height
    return IntertwinerPattern(structure=s, blocks=tuple(blocks))


def pattern_parameter_count(s: SingularStructure) -> int:
    """Free parameters of the intertwiner pattern, by shape arithmetic."""
    return intertwiner_pattern(s).parameter_count


def _project_block(sub: np.ndarray, kind: str) -> np.ndarray:
    """Orthogonal projection of a block onto its pattern subspace."""
    if kind == "free":
        return sub
    if kind == "zero":
        return np.zeros_like(sub)
    if kind == "toeplitz_t":
        return _project_block(sub.T, "toeplitz").T
    rows, cols = sub.shape
    out = np.zeros_like(sub)
    if kind == "toeplitz":
        for offset in range(rows - cols + 1):
            idx = [(t + offset, t) for t in range(cols) if t + offset < rows]
            mean = np.mean([sub[i, j] for i, j in idx])
            for i, j in idx:
                out[i, j] = mean
        return out
    if kind == "hankel":
        for anti in range(rows + cols - 1):
            idx = [
                (i, anti - i)
                for i in range(max(0, anti - cols + 1), min(rows, anti + 1))
            ]
            mean = np.mean([sub[i, j] for i, j in idx])
            for i, j in idx:
                out[i, j] = mean
        return out
    raise InvalidStructure(f"unknown pattern kind {kind!r}")


def matches_pattern(m, s: SingularStructure, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether a matrix conforms to the intertwiner pattern of the structure.

    The matrix must already be expressed in the canonical block frame;
    no detection under unknown equivalence is attempted.
    """
    m = np.asarray(m, dtype=complex)
    n = _require_square_singular(s)
    if m.shape != (n, n):
        raise InvalidStructure(f"matrix shape {m.shape} does not match structure size {n}")
    scale = max(float(np.linalg.norm(m)), 1e-300)
    for blk in intertwiner_pattern(s).blocks:
        sub = m[blk.row_start : blk.row_start + blk.rows, blk.col_start : blk.col_start + blk.cols]
        if np.linalg.norm(sub - _project_block(sub, blk.kind)) > PATTERN_REL_TOL * scale:
            return False
    return True


def random_pattern_matrix(s: SingularStructure, rng: np.random.Generator) -> np.ndarray:
    """Random matrix conforming to the intertwiner pattern (free params filled)."""
    n = _require_square_singular(s)
    m = np.zeros((n, n), dtype=complex)

    def rand(count):
        return rng.standard_normal(count) + 1j * rng.standard_normal(count)

    for blk in intertwiner_pattern(s).blocks:
        sub = np.zeros((blk.rows, blk.cols), dtype=complex)
        if blk.kind == "free":
            sub = rng.standard_normal((blk.rows, blk.cols)) + 1j * rng.standard_normal(
                (blk.rows, blk.cols)
            )
        elif blk.kind == "toeplitz":
            params = rand(blk.params)
            for offset in range(blk.params):
                for t in range(blk.cols):
                    if t + offset < blk.rows:
                        sub[t + offset, t] = params[offset]
        elif blk.kind == "toeplitz_t":
            params = rand(blk.params)
            for offset in range(blk.params):
                for t in range(blk.rows):
                    if t + offset < blk.cols:
                        sub[t, t + offset] = params[offset]
        elif blk.kind == "hankel":
            params = rand(blk.rows + blk.cols - 1)
            for i in range(blk.rows):
                for j in range(blk.cols):
                    sub[i, j] = params[i + j]
        m[blk.row_start : blk.row_start + blk.rows, blk.col_start : blk.col_start + blk.cols] = sub
    return m


# ---------------------------------------------------------------------------
# brute-force intertwiner solver


def intertwiner_space(a, b, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[int, list[np.ndarray]]:
    """Orthonormal basis of {M : A M B = B M A} by a vectorized nullspace.

    The n^2 x n^2 operator is assembled column by column; matrices beyond
    n = 12 are refused to keep the dense solve bounded.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"need square matrices of equal size, got {a.shape} and {b.shape}")
    n = a.shape[0]
    if n > BRUTE_FORCE_MAX_DIM:
        raise ValueError(
            f"matrix dimension {n} exceeds the n <= {BRUTE_FORCE_MAX_DIM} brute-force bound"
        )
    if n == 0:
        return 0, []
    op = np.zeros((n * n, n * n), dtype=complex)
    unit = np.zeros((n, n), dtype=complex)
    for idx in range(n * n):
        i, j = divmod(idx, n)
        unit[i, j] = 1.0
        op[:, idx] = (a @ unit @ b - b @ unit @ a).reshape(-1)
        unit[i, j] = 0.0
    basis_vectors = null_space(op, tol)
    basis = [np.ascontiguousarray(basis_vectors[:, k].reshape(n, n)) for k in range(basis_vectors.shape[1])]
    return len(basis), basis


# ---------------------------------------------------------------------------
# feasibility of commuting Kronecker structures


def commuting_feasible(structure: KroneckerStructure) -> tuple[bool, list[dict]]:
    """Check the multiplicity inequalities a commuting pair must satisfy.

    Per family (row and column minimal indices, ascending, index-0 group
    first): index_i * mult_i <= mult_0 + ... + mult_{i-1}.  Returns every
    violated inequality.
    """
    violations = []
    for family, groups in (("row", structure.row_minimal), ("col", structure.col_minimal)):
        zero = dict(groups).get(0, 0)
        positive = [(v, m) for v, m in groups if v > 0]
        seen = zero
        for i, (value, mult) in enumerate(positive, start=1):
            lhs = value * mult
            if lhs > seen:
                violations.append(
                    {"family": family, "group": i, "index": value, "multiplicity": mult,
                     "lhs": lhs, "rhs": seen}
                )
            seen += mult
    return not violations, violations


def verify_necessity(a, b, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Commuting coefficients must land on a feasible Kronecker structure.

    Returns the assertion outcome; False signals a numerical or logic
    failure, never a counterexample.
    """
    from .koszul import _require_commuting

    a, b = _require_commuting(a, b, tol)
    structure = staircase_structure(Pencil(a, b), tol)
    ok, _ = commuting_feasible(structure)
    return ok


def is_equality_case(s: SingularStructure) -> bool:
    """Whether every feasibility inequality holds with equality."""
    for groups, zero in (
        (s.positive_row_groups(), s.zero_row_count()),
        (s.positive_col_groups(), s.zero_col_count()),
    ):
        seen = zero
        for value, mult in groups:
            if value * mult != seen:
                return False
            seen += mult
    return True


# ---------------------------------------------------------------------------
# the equality-case multiplier


def multiplier_pattern_matrix(s: SingularStructure) -> np.ndarray:
    """The explicit pattern-conformant block permutation for the equality case.

    Identity blocks walk each minimal-index family one group down (rows of
    group i land on the columns of group i-1), the band rows feed the
    first column group of the other family, and the final corner is closed
    with an anti-identity inside the Hankel region.
    """
    n = _require_square_singular(s)
    if not is_equality_case(s):
        raise EqualityConditionFails("structure multiplicities are not in the equality case")
    n0 = s.zero_row_count()
    m0 = s.zero_col_count()
    delta_groups = s.positive_row_groups()
    eps_groups = s.positive_col_groups()
    k = len(delta_groups)
    l = len(eps_groups)

    # row layout: delta groups ascending, band (index-0 column blocks), eps groups
    delta_row = []
    pos = 0
    for d, mult in delta_groups:
        delta_row.append((pos, d * mult))
        pos += d * mult
    band_rows = (pos, m0)
    pos += m0
    eps_row = []
    for e, mult in eps_groups:
        eps_row.append((pos, (e + 1) * mult))
        pos += (e + 1) * mult
    assert pos == n

    # column layout: star (index-0 row blocks), delta groups, eps groups
    star_cols = (0, n0)
    pos = n0
    delta_col = []
    for d, mult in delta_groups:
        delta_col.append((pos, (d + 1) * mult))
        pos += (d + 1) * mult
    eps_col = []
    for e, mult in eps_groups:
        eps_col.append((pos, e * mult))
        pos += e * mult
    assert pos == n

    p = np.zeros((n, n), dtype=complex)

    def place(rows, cols, anti=False):
        r0, rn = rows
        c0, cn = cols
        if rn != cn:
            raise EqualityConditionFails(
                f"equality-case block mismatch: {rn} rows against {cn} columns"
            )
        block = np.fliplr(np.eye(rn)) if anti else np.eye(rn)
        p[r0 : r0 + rn, c0 : c0 + cn] = block

    if k == 0 and l == 0:
        return np.eye(n, dtype=complex)
    if k >= 1:
        place(delta_row[0], star_cols)
        for i in range(1, k):
            place(delta_row[i], delta_col[i - 1])
    if l >= 1:
        place(band_rows, eps_col[0])
        for a in range(l - 1):
            place(eps_row[a], eps_col[a + 1])
    leftover_rows = eps_row[l - 1] if l >= 1 else band_rows
    leftover_cols = delta_col[k - 1] if k >= 1 else star_cols
    place(leftover_rows, leftover_cols, anti=True)
    return p


def construct_multiplier(p: Pencil, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Invertible E with EA and EB commuting, for equality-case pencils.

    The pencil's Kronecker form must consist of singular blocks only, with
    multiplicities in the equality case; otherwise
    :class:`EqualityConditionFails`.  Uses equivalence transforms to the
    canonical form, so ill-conditioned inputs surface as
    :class:`TransformUnavailable` rather than an unverified answer.
    """
    if not p.is_square:
        raise ValueError(f"multiplier construction needs a square pencil, got {p.shape}")
    n = p.rows
    structure = staircase_structure(p, tol)
    if not structure.singular_only:
        raise EqualityConditionFails(
            f"Kronecker form has regular blocks (jordan={structure.jordan}, "
            f"nilpotent={structure.nilpotent}); the construction covers singular blocks only"
        )
    s = SingularStructure.from_kronecker(structure)
    if not is_equality_case(s):
        raise EqualityConditionFails(
            "block multiplicities satisfy the feasibility inequalities only strictly; "
            "the explicit construction needs the equality case"
        )
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    canonical = assemble(structure)
    smat, tmat = equivalence_transforms(p, canonical, tol)

    def verified(pattern) -> np.ndarray | None:
        e = tmat @ pattern @ smat
        ea, eb = e @ p.a, e @ p.b
        scale = max(float(np.linalg.norm(ea)) * float(np.linalg.norm(eb)), 1e-300)
        commutator = float(np.linalg.norm(ea @ eb - eb @ ea))
        if numerical_rank(e, tol) == n and commutator <= 1e-8 * scale:
            return e
        return None

    e = verified(multiplier_pattern_matrix(s))
    if e is not None:
        return e
    # The blockwise identity walk can violate the truncated Toeplitz bands
    # when consecutive groups tile the shared dimension with misaligned
    # instance grids; any invertible element of the solution space still
    # yields a commuting product, so draw one.
    rng = np.random.default_rng(tol.rng_seed ^ 0xE0)
    for _ in range(24):
        pattern = random_pattern_matrix(s, rng)
        if numerical_rank(pattern, tol) != n:
            continue
        e = verified(pattern)
        if e is not None:
            return e
    raise TransformUnavailable(
        "multiplier verification failed for the explicit construction and for "
        "randomized draws from the solution space"
    )


CONJECTURE_LABEL = "conjecture-level evidence"


@dataclass(frozen=True)
class MultiplierSearchResult:
    """Outcome of the randomized multiplier search (never a proof)."""

    found: bool
    multiplier: np.ndarray | None
    attempts: int
    evidence: str = CONJECTURE_LABEL


def search_multiplier(
    p: Pencil,
    tol: ToleranceConfig = DEFAULT_TOL,
    seed: int | None = None,
    restarts: int = 200,
) -> MultiplierSearchResult:
    """Randomized search for an invertible E with EA, EB commuting.

    Samples the solution space of A E B = B E A; any invertible element
    works, because multiplying that relation by E gives the commutator.
    Output is conjecture-level evidence for the feasibility question, one
    way or the other; failure proves nothing.
    """
    if not p.is_square:
        raise ValueError(f"multiplier search needs a square pencil, got {p.shape}")
    n = p.rows
    dim, basis = intertwiner_space(p.a, p.b, tol)
    if dim == 0:
        return MultiplierSearchResult(found=False, multiplier=None, attempts=0)
    rng = np.random.default_rng(tol.rng_seed if seed is None else seed)
    scale_ab = max(float(np.linalg.norm(p.a)) * float(np.linalg.norm(p.b)), 1e-300)
    for attempt in range(1, restarts + 1):
        coeffs = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        e = sum(c * m for c, m in zip(coeffs, basis))
        if numerical_rank(e, tol) != n:
            continue
        ea, eb = e @ p.a, e @ p.b
        comm = float(np.linalg.norm(ea @ eb - eb @ ea))
        norm_e = float(np.linalg.norm(e))
        if comm <= 1e-8 * max(norm_e * norm_e * scale_ab, 1e-300):
            return MultiplierSearchResult(found=True, multiplier=e, attempts=attempt)
    return MultiplierSearchResult(found=False, multiplier=None, attempts=restarts)
