"""Blocked dense primitives.

Gram-type matrices of size F x F are never formed here: statistics of
``M = left @ right`` are streamed over square column tiles and reduced in
ascending tile order, so results do not depend on tile size or threading
beyond floating-point rounding inside a single tile.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import cho_solve

from .exceptions import ContractError, SingularityError

__all__ = [
    "TilePlan",
    "OffdiagStats",
    "as_dense",
    "gemm_tile",
    "offdiag_stats",
    "gram_diagonal",
    "least_squares_rows",
]


@dataclass(frozen=True)
class TilePlan:
    """How to cut the feature axis into column tiles.

    ``tile_cols`` larger than the feature count is clamped to it at use time.
    """

    tile_cols: int = 256
    parallel_tiles: bool = False
    max_workers: int | None = None

    def __post_init__(self):
        if int(self.tile_cols) != self.tile_cols or self.tile_cols < 1:
            raise ContractError(f"tile_cols must be a positive integer, got {self.tile_cols!r}")

    def tiles(self, n):
        width = min(self.tile_cols, n)
        return [(start, min(start + width, n)) for start in range(0, n, width)]


DEFAULT_PLAN = TilePlan()


class OffdiagStats(NamedTuple):
    max_abs_offdiag: float
    sum_sq_offdiag: float


def as_dense(a, name="matrix"):
    """Return ``a`` as a finite 2-D float64 array (no copy when possible)."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise ContractError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ContractError(f"{name} contains NaN or Inf")
    return arr


def _check_range(rng, limit, what):
    start, stop = (rng.start, rng.stop) if isinstance(rng, (range, slice)) else rng
    start = 0 if start is None else int(start)
    stop = limit if stop is None else int(stop)
    if not 0 <= start <= stop <= limit:
        raise ContractError(f"{what} range [{start}, {stop}) outside [0, {limit})")
    return start, stop


def gemm_tile(a, b, row_range=None, col_range=None):
    """Sub-block ``(a @ b)[rows, cols]`` computed from the needed slices only."""
    a = as_dense(a, "a")
    b = as_dense(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ContractError(f"inner dimensions differ: {a.shape} @ {b.shape}")
    r0, r1 = _check_range(row_range or (0, a.shape[0]), a.shape[0], "row")
    c0, c1 = _check_range(col_range or (0, b.shape[1]), b.shape[1], "column")
    return a[r0:r1] @ b[:, c0:c1]


def _block_partial(left_rows, right_cols, diagonal_block):
    block = left_rows @ right_cols
    if diagonal_block:
        np.fill_diagonal(block, 0.0)
    sq = block * block
    return float(np.max(np.abs(block), initial=0.0)), float(np.sum(sq))


def offdiag_stats(right, plan=None, left=None):
    """Max and sum of squares of the off-diagonal entries of ``M``.

    With ``left=None`` the matrix is the Gram ``right.T @ right`` of a d x F
    code; otherwise it is the F x F product ``left @ right`` with ``left`` of
    shape F x d.

    Returns
    -------
    OffdiagStats
        ``(max_{i != j} |M_ij|, sum_{i != j} M_ij**2)``. The sum is combined
        across tiles with exact rounding (``math.fsum``).
    """
    plan = plan or DEFAULT_PLAN
    right = as_dense(right, "right")
    n = right.shape[1]
    symmetric = left is None
    if symmetric:
        left_t = right.T
    else:
        left_t = as_dense(left, "left")
        if left_t.shape != (n, right.shape[0]):
            raise ContractError(
                f"left must have shape {(n, right.shape[0])}, got {left_t.shape}"
            )
    if n < 2:
        raise ContractError(f"need at least 2 features, got F={n}")

    tiles = plan.tiles(n)

    def row_job(i):
        r0, r1 = tiles[i]
        rows = np.ascontiguousarray(left_t[r0:r1])
        out = []
        for j in range(i if symmetric else 0, len(tiles)):
            c0, c1 = tiles[j]
            mx, sq = _block_partial(rows, right[:, c0:c1], i == j)
            if symmetric and j != i:
                sq *= 2.0
            out.append((mx, sq))
        return out

    if plan.parallel_tiles and len(tiles) > 1:
        with ThreadPoolExecutor(max_workers=plan.max_workers) as pool:
            partials = list(pool.map(row_job, range(len(tiles))))
    else:
        partials = [row_job(i) for i in range(len(tiles))]

    # ascending tile order; fsum makes the sum independent of grouping
    flat = [p for row in partials for p in row]
    max_abs = max(p[0] for p in flat)
    total = math.fsum(p[1] for p in flat)
    return OffdiagStats(max_abs, total)


def gram_diagonal(left, right):
    """Diagonal of ``left @ right`` in O(F d)."""
    left = as_dense(left, "left")
    right = as_dense(right, "right")
    if left.shape != right.T.shape:
        raise ContractError(f"shapes {left.shape} and {right.shape} do not pair")
    return np.einsum("ij,ji->i", left, right)


def least_squares_rows(psi, rtol=1e-12):
    """Minimum-norm readout ``G = Psi.T (Psi Psi.T)^-1`` of shape F x d.

    ``G @ Psi`` is the orthogonal projector onto the row space of ``Psi``.
    The d x d normal matrix is Cholesky-factored; a pivot ratio below
    ``rtol`` counts as singular.
    """
    psi = as_dense(psi, "psi")
    gram = psi @ psi.T
    try:
        chol = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise SingularityError("Psi Psi^T is not positive definite") from exc
    pivots = np.diag(chol) ** 2
    if pivots.min() < rtol * pivots.max():
        raise SingularityError(
            f"Psi Psi^T is numerically singular (pivot ratio {pivots.min() / pivots.max():.3e})"
        )
    x = cho_solve((chol, True), psi)
    return np.ascontiguousarray(x.T)
