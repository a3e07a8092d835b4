"""Numerical tolerance settings.

Every rank, singularity and clustering decision in the package is made
against thresholds collected in one immutable :class:`ToleranceConfig`
value, so that reports can state exactly which cutoffs produced them.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ToleranceConfig:
    """Thresholds used by rank and spectrum decisions.

    rank_rel_tol
        Relative cutoff for numerical rank: singular values below
        ``rank_rel_tol * sigma_1 * max(rows, cols)`` count as zero.
    det_zero_tol
        Relative cutoff below which a sampled determinant counts as zero.
    eig_cluster_tol
        Radius used when clustering eigenvalues into multiplicities.
    sample_count
        Number of sample nodes for determinant/rank sweeps over the
        pencil parameter; raised internally to ``2 * max(rows) + 2``
        whenever determinant sampling needs more.
    rng_seed
        Seed for every internal randomized step (projections, searches),
        so results are reproducible.
    """

    rank_rel_tol: float = 1e-10
    det_zero_tol: float = 1e-9
    eig_cluster_tol: float = 1e-8
    sample_count: int = 64
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("rank_rel_tol", "det_zero_tol", "eig_cluster_tol"):
            value = getattr(self, name)
            if not (value > 0.0):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        if self.sample_count < 2:
            raise ValueError(f"sample_count must be >= 2, got {self.sample_count!r}")
        if self.rng_seed < 0:
            raise ValueError(f"rng_seed must be a nonnegative integer, got {self.rng_seed!r}")


DEFAULT_TOL = ToleranceConfig()
