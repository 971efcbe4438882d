"""scikit-learn compatible wrappers around encode / decode / readout.

These let a code plug into ``sklearn.pipeline.Pipeline``: encoding maps
Boolean states (n x F) to ambient vectors (n x d), the readout and decoder
map ambient vectors back to F feature scores.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_random_state

from .codes import Code, certify
from .exceptions import ContractError
from .kernels import TilePlan
from .readouts import crosstalk, least_squares_readout, rescale_to_unit_diagonal, transpose_readout
from .sparse import NoiseKind, NoiseSpec, recovery_certificate

__all__ = ["SuperpositionEncoder", "LinearReadout", "ThresholdDecoder"]


def _code(code):
    if isinstance(code, Code):
        return code
    if code is None:
        raise ContractError("a code (Code or d x F array) is required")
    return Code.from_matrix(code)


class SuperpositionEncoder(TransformerMixin, BaseEstimator):
    """Map Boolean states ``B`` (n x F) to ``X = B Phi^T (+ noise)``.

    Parameters
    ----------
    code : Code or array of shape (d, F)
    noise : str or NoiseSpec, default="none"
        Only ambient noise (``"gaussian:sigma"``) changes ``X``.
    random_state : int, Generator or None
    """

    def __init__(self, code=None, noise="none", random_state=None):
        self.code = code
        self.noise = noise
        self.random_state = random_state

    def fit(self, B=None, y=None):
        code = _code(self.code)
        self.code_ = code
        self.noise_ = NoiseSpec.parse(self.noise)
        if self.noise_.kind is NoiseKind.SCORE_BOUNDED:
            raise ContractError("score-bounded noise lives in the decoder, not the encoder")
        self.n_features_in_ = code.F
        return self

    def transform(self, B):
        check_is_fitted(self, "code_")
        B = check_array(B, dtype=np.float64)
        if B.shape[1] != self.code_.F:
            raise ContractError(f"expected {self.code_.F} feature columns, got {B.shape[1]}")
        X = B @ self.code_.columns.T
        if self.noise_.kind is NoiseKind.GAUSSIAN_AMBIENT and self.noise_.level > 0:
            rng = check_random_state(self.random_state)
            X = X + self.noise_.level * rng.standard_normal(X.shape)
        return X


class LinearReadout(TransformerMixin, BaseEstimator):
    """Linear readout ``x -> G x`` with unit-diagonal normalization.

    After ``fit``: ``readout_`` (a :class:`~sclab.readouts.Readout`) and
    ``crosstalk_`` (its :class:`~sclab.readouts.CrosstalkReport` against the
    Welch floors, when F >= 2).

    Parameters
    ----------
    code : Code or array of shape (d, F)
    method : {"transpose", "least_squares"} or array of shape (F, d)
    tile_cols : int
    """

    def __init__(self, code=None, method="transpose", tile_cols=256):
        self.code = code
        self.method = method
        self.tile_cols = tile_cols

    def fit(self, X=None, y=None):
        code = _code(self.code)
        if isinstance(self.method, str):
            if self.method == "transpose":
                readout = transpose_readout(code)
            elif self.method == "least_squares":
                readout = least_squares_readout(code)
            else:
                raise ContractError(f"unknown readout method {self.method!r}")
        else:
            readout = rescale_to_unit_diagonal(np.asarray(self.method, dtype=np.float64), code)
        self.code_ = code
        self.readout_ = readout
        self.crosstalk_ = crosstalk(readout, code, TilePlan(self.tile_cols)) if code.F >= 2 else None
        self.n_features_in_ = code.d
        return self

    def transform(self, X):
        check_is_fitted(self, "readout_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.code_.d:
            raise ContractError(f"expected {self.code_.d} ambient columns, got {X.shape[1]}")
        return X @ self.readout_.G.T


class ThresholdDecoder(TransformerMixin, BaseEstimator):
    """Threshold the scores ``Phi^T x`` at ``level``.

    ``transform`` returns scores, ``predict`` the decoded Boolean states and
    ``score`` the fraction of rows recovered exactly.
    """

    def __init__(self, code=None, level=0.5, tile_cols=256):
        self.code = code
        self.level = level
        self.tile_cols = tile_cols

    def fit(self, X=None, y=None):
        code = _code(self.code)
        self.code_ = code
        self.certificate_ = certify(code, TilePlan(self.tile_cols))
        self.coherence_ = self.certificate_.coherence
        self.n_features_in_ = code.d
        return self

    def certified_sparsity(self, nu=0.0):
        """Largest s with ``s mu + nu < 1/2`` (only meaningful at level 1/2)."""
        check_is_fitted(self, "certificate_")
        if self.level != 0.5:
            raise ContractError("certificates are only issued at level 1/2")
        mu = self.coherence_
        if mu == 0:
            return self.code_.F if nu < 0.5 else 0
        s = int(np.floor((0.5 - nu) / mu))
        while s > 0 and not recovery_certificate(mu, s, nu).satisfied:
            s -= 1
        return max(min(s, self.code_.F), 0)

    def decision_function(self, X):
        check_is_fitted(self, "code_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.code_.d:
            raise ContractError(f"expected {self.code_.d} ambient columns, got {X.shape[1]}")
        return X @ self.code_.columns

    transform = decision_function

    def predict(self, X):
        return self.decision_function(X) >= self.level

    def score(self, X, B):
        B = np.asarray(B).astype(bool)
        return float(np.mean(np.all(self.predict(X) == B, axis=1)))
