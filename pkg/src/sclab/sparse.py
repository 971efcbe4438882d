"""Sparse Boolean states, superposed encodings and the threshold decoder."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .codes import Code, CodeCertificate
from .exceptions import ContractError
from .kernels import DEFAULT_PLAN, gram_diagonal, offdiag_stats

__all__ = [
    "StateModel",
    "SparseState",
    "fixed_support_state",
    "bernoulli_state",
    "NoiseKind",
    "NoiseSpec",
    "encode",
    "draw_score_noise",
    "DecodeResult",
    "threshold_decode",
    "threshold_decode_batch",
    "RecoveryCertificate",
    "recovery_certificate",
    "LinearEnergy",
    "linear_energy",
    "exact_linear_energy",
    "states_matrix",
]


class StateModel(str, enum.Enum):
    FIXED_SUPPORT = "FixedSupport"
    BERNOULLI_EXPECTED = "BernoulliExpected"


@dataclass(frozen=True, eq=False)
class SparseState:
    """Boolean vector in {0,1}^F stored as its sorted support.

    ``s`` is the nominal sparsity: the exact support size for
    ``FixedSupport`` and the expected size for ``BernoulliExpected``.
    """

    F: int
    support: np.ndarray
    model: StateModel = StateModel.FIXED_SUPPORT
    s: float | None = None

    def __post_init__(self):
        supp = np.asarray(self.support, dtype=np.int64).ravel()
        if supp.size and (np.any(np.diff(supp) <= 0) or supp[0] < 0 or supp[-1] >= self.F):
            raise ContractError("support must be strictly increasing indices in [0, F)")
        supp = supp.copy()
        supp.setflags(write=False)
        object.__setattr__(self, "support", supp)
        object.__setattr__(self, "model", StateModel(self.model))
        if self.s is None:
            object.__setattr__(self, "s", supp.size)
        if self.model is StateModel.FIXED_SUPPORT and supp.size != self.s:
            raise ContractError(f"FixedSupport state has {supp.size} indices, expected {self.s}")

    @property
    def size(self):
        """Realized support size |S|."""
        return int(self.support.size)

    def indicator(self):
        b = np.zeros(self.F, dtype=bool)
        b[self.support] = True
        return b

    @classmethod
    def from_indicator(cls, b, model=StateModel.FIXED_SUPPORT, s=None):
        b = np.asarray(b).astype(bool).ravel()
        return cls(b.size, np.flatnonzero(b), model, s)


def fixed_support_state(F, s, seed=None):
    """Uniformly random support of exactly ``s`` indices."""
    if not 0 <= s <= F:
        raise ContractError(f"need 0 <= s <= F, got s={s}, F={F}")
    rng = np.random.default_rng(seed)
    supp = np.sort(rng.choice(F, size=int(s), replace=False))
    return SparseState(F, supp, StateModel.FIXED_SUPPORT, int(s))


def bernoulli_state(F, s, seed=None):
    """Independent Bernoulli(s/F) coordinates; the realized size is random."""
    if not 0 <= s <= F:
        raise ContractError(f"need 0 <= s <= F, got s={s}, F={F}")
    rng = np.random.default_rng(seed)
    b = rng.random(F) < s / F
    return SparseState(F, np.flatnonzero(b), StateModel.BERNOULLI_EXPECTED, s)


class NoiseKind(str, enum.Enum):
    NONE = "None"
    GAUSSIAN_AMBIENT = "GaussianAmbient"
    SCORE_BOUNDED = "ScoreBounded"


_NOISE_PREFIX = {
    "none": NoiseKind.NONE,
    "gaussian": NoiseKind.GAUSSIAN_AMBIENT,
    "score": NoiseKind.SCORE_BOUNDED,
}


@dataclass(frozen=True)
class NoiseSpec:
    """Noise model.

    ``GaussianAmbient`` adds ``eta ~ N(0, level^2 I_d)`` to the ambient vector;
    ``ScoreBounded`` adds i.i.d. uniform ``[-level, level]`` perturbations to
    the scores, so the score-noise bound holds by construction.
    """

    kind: NoiseKind = NoiseKind.NONE
    level: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        if not self.level >= 0 or not math.isfinite(self.level):
            raise ContractError(f"noise level must be finite and >= 0, got {self.level!r}")
        if self.kind is NoiseKind.NONE and self.level != 0:
            raise ContractError("noise kind None takes no level")

    @classmethod
    def parse(cls, text):
        """Parse ``"none"``, ``"gaussian:0.1"`` or ``"score:0.05"``."""
        if isinstance(text, NoiseSpec):
            return text
        name, _, level = str(text).strip().partition(":")
        try:
            kind = _NOISE_PREFIX[name.lower()]
        except KeyError:
            raise ContractError(f"unknown noise spec {text!r}") from None
        return cls(kind, float(level) if level else 0.0)

    @property
    def label(self):
        if self.kind is NoiseKind.NONE:
            return "none"
        prefix = "gaussian" if self.kind is NoiseKind.GAUSSIAN_AMBIENT else "score"
        return f"{prefix}:{self.level!r}"

    @property
    def score_bound(self):
        """A priori bound on the score noise, or None if only measurable."""
        if self.kind is NoiseKind.NONE:
            return 0.0
        if self.kind is NoiseKind.SCORE_BOUNDED:
            return self.level
        return None


NO_NOISE = NoiseSpec()


def _cols(code):
    return code.columns if isinstance(code, Code) else np.asarray(code, dtype=np.float64)


def encode(code, state, noise=NO_NOISE, seed=None):
    """Ambient vector ``x = sum_{j in S} phi_j (+ eta)``.

    Score-bounded noise does not touch ``x``; draw it with
    :func:`draw_score_noise` and hand it to the decoder.
    """
    phi = _cols(code)
    if state.F != phi.shape[1]:
        raise ContractError(f"state has F={state.F}, code has F={phi.shape[1]}")
    x = phi[:, state.support].sum(axis=1)
    noise = NoiseSpec.parse(noise)
    if noise.kind is NoiseKind.GAUSSIAN_AMBIENT and noise.level > 0:
        rng = np.random.default_rng(seed)
        x = x + noise.level * rng.standard_normal(phi.shape[0])
    return x


def draw_score_noise(noise, F, seed=None):
    """Uniform ``[-nu, nu]`` score perturbation, or None for other kinds."""
    noise = NoiseSpec.parse(noise)
    if noise.kind is not NoiseKind.SCORE_BOUNDED:
        return None
    rng = np.random.default_rng(seed)
    return rng.uniform(-noise.level, noise.level, size=F)


class DecodeResult(NamedTuple):
    decoded: np.ndarray
    scores: np.ndarray
    margin: float
    exact: bool | None
    score_noise_observed: float


def threshold_decode(code, x, level=0.5, score_noise=None, truth=None):
    """Threshold the scores ``z = Phi^T x (+ score_noise)`` at ``level``.

    Ties go to active. ``margin`` is ``min_i |z_i - level|``. When ``truth``
    (a SparseState or Boolean vector) is given, ``exact`` compares the full
    vector and ``score_noise_observed`` is ``||z - Phi^T Phi b||_inf``.
    """
    phi = _cols(code)
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (phi.shape[0],):
        raise ContractError(f"x must have shape ({phi.shape[0]},), got {x.shape}")
    z = phi.T @ x
    if score_noise is not None:
        z = z + score_noise
    decoded = z >= level
    margin = float(np.min(np.abs(z - level)))
    exact = None
    nu_hat = math.nan
    if truth is not None:
        if isinstance(truth, SparseState):
            supp, b = truth.support, truth.indicator()
        else:
            b = np.asarray(truth).astype(bool)
            supp = np.flatnonzero(b)
        exact = bool(np.array_equal(decoded, b))
        clean = phi.T @ phi[:, supp].sum(axis=1)
        nu_hat = float(np.max(np.abs(z - clean)))
    return DecodeResult(decoded, z, margin, exact, nu_hat)


def threshold_decode_batch(code, X, level=0.5):
    """Decode each row of ``X`` (n x d); returns an n x F Boolean array."""
    phi = _cols(code)
    return (np.asarray(X, dtype=np.float64) @ phi) >= level


class RecoveryCertificate(NamedTuple):
    satisfied: bool
    tau: float


def recovery_certificate(code_cert, s, nu=0.0):
    """Check ``s * mu + nu < 1/2``; ``tau = 1/2 - (s mu + nu)``.

    ``code_cert`` is a :class:`CodeCertificate` or the coherence itself.
    When satisfied, thresholding at 1/2 recovers every s-sparse state whose
    score noise is at most ``nu``.
    """
    if s < 0 or nu < 0:
        raise ContractError(f"need s >= 0 and nu >= 0, got s={s}, nu={nu}")
    mu = code_cert.coherence if isinstance(code_cert, CodeCertificate) else float(code_cert)
    load = s * mu + nu
    return RecoveryCertificate(load < 0.5, 0.5 - load)


def states_matrix(states, F=None):
    """Stack SparseStates (or pass through a Boolean array) as n x F bool."""
    if isinstance(states, np.ndarray):
        B = states.astype(bool, copy=False)
        if B.ndim == 1:
            B = B[None, :]
        return B
    states = list(states)
    F = F if F is not None else states[0].F
    B = np.zeros((len(states), F), dtype=bool)
    for row, st in enumerate(states):
        B[row, st.support] = True
    return B


class LinearEnergy(NamedTuple):
    mean: float
    values: np.ndarray


def linear_energy(readout, code, states, chunk=1024):
    """Per-state ``||(G Psi - I) b||^2 / F`` and its batch mean.

    ``(G Psi) b`` is evaluated as ``G (Psi b)``.
    """
    if not readout.unit_diagonal:
        raise ContractError("linear energy needs a unit-diagonal readout")
    psi = _cols(code)
    G = readout.G
    F = psi.shape[1]
    B = states_matrix(states, F)
    if B.shape[1] != F:
        raise ContractError(f"states have F={B.shape[1]}, code has F={F}")
    values = np.empty(B.shape[0])
    for start in range(0, B.shape[0], chunk):
        Bc = B[start:start + chunk].astype(np.float64)
        R = (Bc @ psi.T) @ G.T - Bc
        values[start:start + chunk] = np.einsum("ij,ij->i", R, R) / F
    mean = float(np.mean(values)) if values.size else 0.0
    return LinearEnergy(mean, values)


def exact_linear_energy(readout, code, p, plan=None):
    """Closed form ``E||A b||^2 = p(1-p)||A||_F^2 + p^2 ||A 1||^2`` for Bernoulli(p).

    ``A = G Psi - I``; returns the expectation (not divided by F).
    """
    psi = _cols(code)
    G = readout.G
    F = psi.shape[1]
    diag = gram_diagonal(G, psi)
    off = offdiag_stats(psi, plan or DEFAULT_PLAN, left=G).sum_sq_offdiag if F > 1 else 0.0
    fro = off + math.fsum((diag - 1.0) ** 2)
    a_ones = G @ psi.sum(axis=1) - 1.0
    return p * (1 - p) * fro + p * p * math.fsum(a_ones**2)
