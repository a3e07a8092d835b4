"""The linear pencil type: an ordered pair (A, B) representing A + lam*B."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidMatrix


def as_matrix(data) -> np.ndarray:
    """Validate and freeze a complex matrix.

    Accepts anything ``np.asarray`` understands, promotes to complex128,
    requires a 2-D shape and finite entries, and returns a read-only array
    so downstream code can share it without defensive copies.
    """
    m = np.array(data, dtype=complex, order="C")
    if m.ndim != 2:
        raise InvalidMatrix(f"expected a 2-D matrix, got ndim={m.ndim}")
    if m.size and not np.all(np.isfinite(m.view(float))):
        bad = np.argwhere(~np.isfinite(m))
        i, j = bad[0]
        raise InvalidMatrix(f"non-finite entry at row {i}, column {j}")
    m.flags.writeable = False
    return m


@dataclass(frozen=True)
class Pencil:
    """An ordered pair of equal-shape complex matrices, read as A + lam*B."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", as_matrix(self.a))
        object.__setattr__(self, "b", as_matrix(self.b))
        if self.a.shape != self.b.shape:
            raise InvalidMatrix(
                f"pencil coefficients must share a shape, got {self.a.shape} and {self.b.shape}"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def at(self, lam: complex) -> np.ndarray:
        """Evaluate A + lam*B."""
        return self.a + lam * self.b

    def transposed(self) -> "Pencil":
        return Pencil(self.a.T.copy(), self.b.T.copy())

    def norm_scale(self) -> float:
        """A common magnitude for both coefficients, used to relativize cutoffs."""
        return max(float(np.linalg.norm(self.a)), float(np.linalg.norm(self.b)))
