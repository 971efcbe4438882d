"""Linear readouts, unit-diagonal rescaling and Welch-floor checks.

A readout ``G`` (F x d) paired with a code ``Psi`` (d x F) defines the
F x F cross-talk matrix ``M = G Psi``. Nothing here materializes ``M``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .codes import welch_pair_floor
from .exceptions import ContractError, DegenerateDiagonalError, DomainError
from .kernels import DEFAULT_PLAN, as_dense, gram_diagonal, least_squares_rows, offdiag_stats

__all__ = [
    "ReadoutKind",
    "Readout",
    "CrosstalkReport",
    "DeltaFloorCheck",
    "transpose_readout",
    "least_squares_readout",
    "rescale_to_unit_diagonal",
    "crosstalk",
    "delta_floor_check",
    "empirical_delta",
    "UNIT_DIAGONAL_TOL",
]

UNIT_DIAGONAL_TOL = 1e-9


class ReadoutKind(str, enum.Enum):
    TRANSPOSE = "Transpose"
    LEAST_SQUARES = "LeastSquares"
    EXTERNAL = "External"


@dataclass(frozen=True, eq=False)
class Readout:
    G: np.ndarray
    kind: ReadoutKind = ReadoutKind.EXTERNAL
    unit_diagonal: bool = False

    def __post_init__(self):
        g = np.array(as_dense(self.G, "readout"), copy=True)
        g.setflags(write=False)
        object.__setattr__(self, "G", g)
        object.__setattr__(self, "kind", ReadoutKind(self.kind))

    @property
    def F(self):
        return self.G.shape[0]

    @property
    def d(self):
        return self.G.shape[1]


class CrosstalkReport(NamedTuple):
    d: int
    F: int
    sum_sq_offdiag: float
    mean_sq_offdiag: float
    max_abs_offdiag: float
    floor_sum: float
    floor_mean: float
    floor_max: float
    slack_sum: float

    @property
    def floor_satisfied(self):
        """Welch floors with the documented absolute slack (1e-6 F, 1e-9)."""
        return (
            self.sum_sq_offdiag >= self.floor_sum - 1e-6 * self.F
            and self.max_abs_offdiag >= self.floor_max - 1e-9
        )


class DeltaFloorCheck(NamedTuple):
    lhs: float
    rhs: float
    consistent: bool


def _psi(code):
    return code.columns if hasattr(code, "columns") else as_dense(code, "psi")


def _check_pair(G, psi):
    if G.shape != psi.T.shape:
        raise ContractError(f"readout shape {G.shape} does not pair with code shape {psi.shape}")


def transpose_readout(code):
    """``G = Psi^T``; unit diagonal because the code columns are unit norm."""
    return Readout(_psi(code).T, ReadoutKind.TRANSPOSE, unit_diagonal=True)


def least_squares_readout(code, unit_diagonal=True, eps_diag=1e-8):
    """Minimum-norm readout, rescaled to unit diagonal unless told otherwise."""
    psi = _psi(code)
    G = least_squares_rows(psi)
    if unit_diagonal:
        return rescale_to_unit_diagonal(G, psi, eps_diag, kind=ReadoutKind.LEAST_SQUARES)
    return Readout(G, ReadoutKind.LEAST_SQUARES, unit_diagonal=False)


def rescale_to_unit_diagonal(G, psi, eps_diag=1e-8, kind=None):
    """Divide every row of ``G`` by the matching diagonal entry of ``G Psi``.

    Raises
    ------
    DegenerateDiagonalError
        If some ``|(G Psi)_ii| < eps_diag``; ``exc.index`` is the row.
    """
    if isinstance(G, Readout):
        kind = kind or G.kind
        G = G.G
    G = as_dense(G, "G")
    psi = _psi(psi)
    _check_pair(G, psi)
    diag = gram_diagonal(G, psi)
    bad = np.flatnonzero(np.abs(diag) < eps_diag)
    if bad.size:
        i = int(bad[0])
        raise DegenerateDiagonalError(i, float(diag[i]), eps_diag)
    return Readout(G / diag[:, None], kind or ReadoutKind.EXTERNAL, unit_diagonal=True)


def crosstalk(readout, code, plan=None):
    """Off-diagonal statistics of ``G Psi`` against the three Welch floors."""
    if not readout.unit_diagonal:
        raise ContractError("crosstalk needs a unit-diagonal readout; rescale it first")
    psi = _psi(code)
    _check_pair(readout.G, psi)
    d, F = psi.shape
    if F < 2:
        raise ContractError(f"need at least 2 features, got F={F}")
    mx, sq = offdiag_stats(psi, plan or DEFAULT_PLAN, left=readout.G)
    floor_sum = F * (F - d) / d
    floor_mean = (F - d) / (d * (F - 1))
    return CrosstalkReport(
        d=d,
        F=F,
        sum_sq_offdiag=sq,
        mean_sq_offdiag=sq / (F * (F - 1)),
        max_abs_offdiag=mx,
        floor_sum=floor_sum,
        floor_mean=floor_mean,
        floor_max=math.sqrt(floor_mean) if F > d else 0.0,
        slack_sum=sq - floor_sum,
    )


def delta_floor_check(delta, d, F):
    """Is a uniform singleton readout error ``delta`` geometrically possible?

    Compares ``delta / (1 - delta)`` with the pair floor
    ``sqrt((F-d)/(d(F-1)))``; only defined for ``0 <= delta < 1/2``.
    """
    if not 0 <= delta < 0.5:
        raise DomainError(f"delta must lie in [0, 1/2), got {delta!r}")
    if F <= d:
        raise ContractError(f"delta floor needs F > d, got d={d}, F={F}")
    lhs = delta / (1.0 - delta)
    rhs = welch_pair_floor(d, F)
    return DeltaFloorCheck(lhs, rhs, lhs >= rhs - 1e-12)


def empirical_delta(readout, code, plan=None):
    """``max_i ||G phi_i - e_i||_inf`` over the code's own columns."""
    G = readout.G if isinstance(readout, Readout) else as_dense(readout, "G")
    psi = _psi(code)
    _check_pair(G, psi)
    diag_err = float(np.max(np.abs(gram_diagonal(G, psi) - 1.0)))
    if psi.shape[1] < 2:
        return diag_err
    mx, _ = offdiag_stats(psi, plan or DEFAULT_PLAN, left=G)
    return max(diag_err, mx)
