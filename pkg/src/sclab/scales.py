"""Closed-form capacity reference scales.

Every ``log`` is natural. Unnamed constants default to 1 and stay explicit
parameters. Each scale carries a provenance tag so conditional or
reference-only quantities cannot be mistaken for certified ones.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field

from scipy.optimize import brentq

from .exceptions import DomainError

__all__ = [
    "Provenance",
    "g_of_alpha",
    "template_compatibility_F",
    "as_bracket",
    "ASBracket",
    "crossover_widths",
    "interpolation_F",
    "ScaleReport",
    "hierarchy_report",
]


class Provenance(str, enum.Enum):
    PROVED_IMPORTED = "PROVED-IMPORTED"
    PROVED_HERE = "PROVED-HERE"
    CONDITIONAL = "CONDITIONAL"
    REFERENCE_ONLY = "REFERENCE-ONLY"


AS_GAP_NOTE = (
    "log-factor gap between the AS bracket sides is unresolved; "
    "the construction is only known to be within a sqrt(log m') factor of optimal"
)


def _check_alpha(alpha):
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")


def g_of_alpha(alpha):
    """Storage factor ``1 / ((1 - alpha) ln(1 / (1 - alpha)))``."""
    _check_alpha(alpha)
    q = 1.0 - alpha
    return 1.0 / (q * math.log(1.0 / q))


def template_compatibility_F(d, s=1, C1=1.0, C2=1.0):
    """Largest F with ``C1 s / sqrt(d) <= C2 d^{1/4} / (F^{1/2} s^{1/4})``."""
    if d < 1 or s < 1:
        raise DomainError(f"need d >= 1 and s >= 1, got d={d}, s={s}")
    if C1 <= 0 or C2 <= 0:
        raise DomainError("constants C1, C2 must be positive")
    return (C2 / C1) ** 2 * d**1.5 * s**-2.5


@dataclass(frozen=True)
class ASBracket:
    lower: float
    upper: float
    note: str = AS_GAP_NOTE

    def __iter__(self):
        return iter((self.lower, self.upper))


def as_bracket(n):
    """``(n^2 / ln^2 n, n^2 / ln n)`` with unit constants."""
    if n < 3:
        raise DomainError(f"AS bracket needs n >= 3, got {n!r}")
    ln = math.log(n)
    return ASBracket(n * n / (ln * ln), n * n / ln)


def _as_crossover(g, lo=3.0, hi=1e12):
    # d / ln^2 d is decreasing below e^2 and increasing above, so the largest
    # root sits on [max(lo, e^2), hi]
    f = lambda d: d / math.log(d) ** 2 - g  # noqa: E731
    a = max(lo, math.e**2)
    if f(a) > 0 or f(hi) < 0:
        raise DomainError(f"d / ln^2 d = {g} has no root in [{lo}, {hi}]")
    return brentq(f, a, hi, rtol=1e-12, xtol=1e-12, maxiter=500)


def crossover_widths(alpha):
    """``(g(alpha)^2, largest root of d / ln^2 d = g(alpha))``."""
    g = g_of_alpha(alpha)
    return g * g, _as_crossover(g)


def interpolation_F(d, s=1, gamma=0.0, K_gamma=1.0, c_gamma=1.0):
    """``c_gamma K_gamma^2 d^{3/2 + gamma} / sqrt(s)``; conditional on the reset hypothesis."""
    if not 0 <= gamma <= 0.5:
        raise DomainError(f"gamma must lie in [0, 1/2], got {gamma!r}")
    if d < 1 or s < 1 or K_gamma <= 0 or c_gamma <= 0:
        raise DomainError("d, s, K_gamma and c_gamma must be positive")
    return c_gamma * K_gamma**2 * d ** (1.5 + gamma) / math.sqrt(s)


SCALE_ORDER = ("F_CS", "F_H_template", "F_AS_lower", "F_AS_upper", "N_JL")

PROVENANCE = {
    "g_alpha": Provenance.REFERENCE_ONLY,
    "F_CS": Provenance.REFERENCE_ONLY,
    "F_H_template": Provenance.PROVED_HERE,
    "F_AS_lower": Provenance.PROVED_IMPORTED,
    "F_AS_upper": Provenance.PROVED_IMPORTED,
    "N_JL": Provenance.REFERENCE_ONLY,
    "d_cross_H": Provenance.PROVED_HERE,
    "d_cross_AS": Provenance.PROVED_HERE,
    "F_interp": Provenance.CONDITIONAL,
}


@dataclass
class ScaleReport:
    d: float
    alpha: float
    s: float
    gamma: float
    eps: float
    g_alpha: float
    F_CS: float
    F_H_template: float
    C1: float
    C2: float
    F_AS_lower: float
    F_AS_upper: float
    N_JL_exponent: float
    d_cross_H: float
    d_cross_AS: float
    d_cross_AS_equation_residual: float
    F_interp: float
    c_gamma: float
    K_gamma: float
    unseparated: list = field(default_factory=list)
    F_obs: float | None = None
    provenance: dict = field(default_factory=lambda: {k: v.value for k, v in PROVENANCE.items()})
    notes: list = field(default_factory=list)

    @property
    def ordering_holds(self):
        return not self.unseparated

    def to_dict(self):
        return asdict(self)

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    def to_table(self):
        """Aligned text table in the layout of the capacity comparison table."""
        header = ["d", "F_obs", "F/d", "d^{3/2}", "d^2/ln d", "F/d^{3/2}"]
        if self.F_obs is not None:
            obs = [f"{self.F_obs:,.0f}", f"{self.F_obs / self.d:.1f}"]
            ratio = f"{self.F_obs / self.d**1.5:.2f}"
        else:
            obs, ratio = ["-", "-"], "-"
        row = [f"{self.d:,.0f}", *obs, f"{self.d**1.5:,.0f}", f"{self.F_AS_upper:,.0f}", ratio]
        lines = [_align([header, row]), ""]
        scale_rows = [["scale", "value", "provenance"]]
        for name in ("g_alpha", "F_CS", "F_H_template", "F_AS_lower", "F_AS_upper",
                     "d_cross_H", "d_cross_AS", "F_interp"):
            scale_rows.append([name, f"{getattr(self, name):,.4f}", PROVENANCE[name].value])
        scale_rows.append(["N_JL (exponent d eps^2)", f"{self.N_JL_exponent:,.4f}",
                           PROVENANCE["N_JL"].value])
        lines.append(_align(scale_rows))
        lines.append("")
        if self.unseparated:
            lines.append("not yet separated at this d: " + ", ".join(" < ".join(p) for p in self.unseparated))
        else:
            lines.append("reference ordering holds at this d")
        lines.extend(self.notes)
        return "\n".join(lines) + "\n"


def _align(rows):
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    out = []
    for r in rows:
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        out.append("  ".join(cells).rstrip())
    return "\n".join(out)


def hierarchy_report(d, alpha, s=1, eps=0.1, gamma=0.0, C1=1.0, C2=1.0,
                     K_gamma=1.0, c_gamma=1.0, F_obs=None):
    """Evaluate every reference scale at one width ``d``.

    The asymptotic chain F_CS < F_H < L_AS <= U_AS < N_JL is checked pairwise
    at this finite ``d``; pairs that are not yet in order are listed in
    ``unseparated`` rather than raised.
    """
    if d < 3:
        raise DomainError(f"hierarchy needs d >= 3, got {d!r}")
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps!r}")
    g = g_of_alpha(alpha)
    lower, upper = as_bracket(d)
    d_h, d_as = crossover_widths(alpha)
    values = {
        "F_CS": d * g,
        "F_H_template": template_compatibility_F(d, s, C1, C2),
        "F_AS_lower": lower,
        "F_AS_upper": upper,
    }
    n_jl_exp = d * eps * eps
    unseparated = []
    for a, b in zip(SCALE_ORDER[:3], SCALE_ORDER[1:4]):
        ordered = values[a] <= values[b] if a == "F_AS_lower" else values[a] < values[b]
        if not ordered:
            unseparated.append((a, b))
    # compare in log space; N_JL itself is never formed
    if not math.log(upper) < n_jl_exp:
        unseparated.append(("F_AS_upper", "N_JL"))
    return ScaleReport(
        d=d,
        alpha=alpha,
        s=s,
        gamma=gamma,
        eps=eps,
        g_alpha=g,
        F_CS=values["F_CS"],
        F_H_template=values["F_H_template"],
        C1=C1,
        C2=C2,
        F_AS_lower=lower,
        F_AS_upper=upper,
        N_JL_exponent=n_jl_exp,
        d_cross_H=d_h,
        d_cross_AS=d_as,
        d_cross_AS_equation_residual=d / math.log(d) ** 2 - g,
        F_interp=interpolation_F(d, s, gamma, K_gamma, c_gamma),
        c_gamma=c_gamma,
        K_gamma=K_gamma,
        unseparated=unseparated,
        F_obs=F_obs,
        notes=[
            "AS bracket: " + AS_GAP_NOTE,
            "F_interp is CONDITIONAL on the nonlinear-reset hypothesis (not instantiated)",
            "log = natural logarithm",
        ],
    )
