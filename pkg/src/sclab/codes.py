"""Feature dictionaries (codes) and their geometric certificates."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ContractError, ConvergenceError
from .kernels import DEFAULT_PLAN, as_dense, offdiag_stats

__all__ = [
    "CodeKind",
    "Code",
    "CodeCertificate",
    "welch_pair_floor",
    "identity_code",
    "random_unit_code",
    "basis_union_code",
    "tight_frame_code",
    "frame_bound_gap",
    "certify",
]

UNIT_NORM_TOL = 1e-10
TIGHT_GAP_TOL = 1e-9


class CodeKind(str, enum.Enum):
    RANDOM_UNIT = "RandomUnit"
    TIGHT_FRAME = "TightFrame"
    BASIS_UNION = "BasisUnion"
    IDENTITY = "Identity"
    EXTERNAL = "External"


@dataclass(frozen=True, eq=False)
class Code:
    """A d x F dictionary with unit-norm columns.

    The column matrix is stored read-only; duplicated columns are allowed.
    """

    columns: np.ndarray
    kind: CodeKind = CodeKind.EXTERNAL

    def __post_init__(self):
        cols = as_dense(self.columns, "code columns")
        d, F = cols.shape
        if d < 1 or F < 1:
            raise ContractError(f"code must have d >= 1 and F >= 1, got {cols.shape}")
        dev = np.max(np.abs(np.linalg.norm(cols, axis=0) - 1.0))
        if dev > UNIT_NORM_TOL:
            raise ContractError(f"code columns are not unit norm (max deviation {dev:.3e})")
        cols = np.array(cols, dtype=np.float64, order="C", copy=True)
        cols.setflags(write=False)
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "kind", CodeKind(self.kind))

    @property
    def d(self):
        return self.columns.shape[0]

    @property
    def F(self):
        return self.columns.shape[1]

    @classmethod
    def from_matrix(cls, matrix, normalize=False, kind=CodeKind.EXTERNAL):
        """Wrap a user matrix, optionally normalizing its columns first."""
        m = as_dense(matrix, "code matrix")
        if normalize:
            norms = np.linalg.norm(m, axis=0)
            if np.any(norms == 0):
                raise ContractError("cannot normalize a zero column")
            m = m / norms
        return cls(m, kind)


@dataclass(frozen=True)
class CodeCertificate:
    d: int
    F: int
    coherence: float
    sum_sq_offdiag: float
    welch_pair_floor: float
    is_tight_frame: bool
    frame_bound_gap: float


def welch_pair_floor(d, F):
    """Smallest possible coherence ``sqrt((F-d) / (d(F-1)))``; 0 when F <= d."""
    if F <= d:
        return 0.0
    return math.sqrt((F - d) / (d * (F - 1)))


def _normalize_columns(m):
    return m / np.linalg.norm(m, axis=0)


def identity_code(d):
    return Code(np.eye(d), CodeKind.IDENTITY)


def random_unit_code(d, F, seed=None):
    """F independent uniform points on the unit sphere of R^d.

    ``seed`` may be anything accepted by :func:`numpy.random.default_rng`,
    including a ``Generator``.
    """
    _check_dims(d, F)
    rng = np.random.default_rng(seed)
    return Code(_normalize_columns(rng.standard_normal((d, F))), CodeKind.RANDOM_UNIT)


def _random_orthogonal(d, rng):
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    # sign fix makes the draw Haar-distributed
    return q * np.where(np.diag(r) < 0, -1.0, 1.0)


def basis_union_code(d, k, seed=None):
    """Concatenation of ``k`` random orthonormal bases; a tight frame with F = k d."""
    _check_dims(d, k, names=("d", "k"))
    rng = np.random.default_rng(seed)
    blocks = [_random_orthogonal(d, rng) for _ in range(k)]
    return Code(_normalize_columns(np.hstack(blocks)), CodeKind.BASIS_UNION)


def frame_bound_gap(columns):
    """``max |eig((d/F) Phi Phi^T) - 1|``."""
    d, F = columns.shape
    eig = np.linalg.eigvalsh((d / F) * (columns @ columns.T))
    return float(np.max(np.abs(eig - 1.0)))


def tight_frame_code(d, F, seed=None, tol=1e-10, max_iters=10000):
    """Unit-norm tight frame by alternating projections.

    Each sweep maps the columns to the nearest tight frame
    ``sqrt(F/d) (Phi Phi^T)^{-1/2} Phi`` and then renormalizes every column.
    Stops once the frame-bound gap of the renormalized frame is at most
    ``tol``.

    Raises
    ------
    ConvergenceError
        If ``max_iters`` sweeps do not reach ``tol``; ``exc.gap`` holds the
        final gap.
    """
    _check_dims(d, F)
    if F < d:
        raise ContractError(f"a tight frame needs F >= d, got d={d}, F={F}")
    rng = np.random.default_rng(seed)
    phi = _normalize_columns(rng.standard_normal((d, F)))
    scale = math.sqrt(F / d)
    gap = frame_bound_gap(phi)
    for _ in range(max_iters):
        if gap <= tol:
            return Code(phi, CodeKind.TIGHT_FRAME)
        w, v = np.linalg.eigh(phi @ phi.T)
        phi = scale * ((v / np.sqrt(w)) @ v.T) @ phi
        phi = _normalize_columns(phi)
        gap = frame_bound_gap(phi)
    if gap <= tol:
        return Code(phi, CodeKind.TIGHT_FRAME)
    raise ConvergenceError(
        f"tight frame (d={d}, F={F}) did not converge in {max_iters} iterations; gap={gap:.3e}",
        gap,
    )


def certify(code, plan=None):
    """Coherence, cross-talk energy and tightness of a code."""
    plan = plan or DEFAULT_PLAN
    d, F = code.d, code.F
    if F >= 2:
        mu, sq = offdiag_stats(code.columns, plan)
    else:
        mu, sq = 0.0, 0.0
    gap = frame_bound_gap(code.columns)
    return CodeCertificate(
        d=d,
        F=F,
        coherence=min(float(mu), 1.0),
        sum_sq_offdiag=float(sq),
        welch_pair_floor=welch_pair_floor(d, F),
        is_tight_frame=gap <= TIGHT_GAP_TOL,
        frame_bound_gap=gap,
    )


def _check_dims(d, F, names=("d", "F")):
    for name, v in zip(names, (d, F)):
        if int(v) != v or v < 1:
            raise ContractError(f"{name} must be a positive integer, got {v!r}")
