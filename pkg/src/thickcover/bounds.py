"""Log-scale evaluation of the headline counting bounds.

Every bound in play has the shape (constant * g) ** (2g), d ** g, or a
ratio of those, with constants supplied by the caller: none of them has a
derived numeric value here except the two explicit ones, the lower
Lipschitz constant 12 of the ball-restricted Banach-space embedding and
the universal image-radius 6.  Values are reported in log10 with an
exact big-integer companion whenever the inputs are integral.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

__all__ = [
    "BoundReport",
    "DEFAULT_CONSTANTS",
    "growth_envelope_bounds",
    "lower_bound_composition",
    "diameter_chain",
    "ball_cover_bounds",
    "packing_budget",
]

# the only two constants with pinned values; everything else is caller input
DEFAULT_CONSTANTS = {
    "embedding_lower_lipschitz": 12.0,
    "embedding_image_radius": 6.0,
}

_EXACT_EXP_CAP = 10_000


@dataclass(frozen=True)
class BoundReport:
    """One evaluated bound: log10 value, optional exact integer, formula tag."""

    name: str
    inputs: dict
    value_log10: float
    exact: int | None
    provenance: str

    def __post_init__(self):
        if not math.isfinite(self.value_log10):
            raise ValueError("log10 value must be finite")
        if self.exact is not None and self.exact > 0:
            rel = abs(math.log10(self.exact) - self.value_log10) / max(
                1.0, abs(self.value_log10))
            if rel > 1e-9:
                raise ValueError("exact value inconsistent with log10 value")

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "inputs": dict(self.inputs),
            "value": {"log10": self.value_log10},
            "exact": None if self.exact is None else str(self.exact),
            "provenance": self.provenance,
        }


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float) and x == int(x):
        return Fraction(int(x))
    return None


def _exact_power(base, exponent: int):
    """base ** exponent as an exact integer when that is representable."""
    frac = _as_fraction(base)
    if frac is None or exponent < 0 or exponent > _EXACT_EXP_CAP:
        return None
    value = frac ** exponent
    return int(value) if value.denominator == 1 else None


def _report(name, inputs, value_log10, exact, provenance):
    return BoundReport(name=name, inputs=inputs, value_log10=value_log10,
                       exact=exact, provenance=provenance)


def growth_envelope_bounds(g: int, c1: float, c2: float) -> tuple[BoundReport, BoundReport]:
    """(c1*g)^(2g) and (c2*g)^(2g) as log-scale reports."""
    if g < 2 or min(c1, c2) <= 0:
        raise ValueError("need g >= 2 and positive constants")

    def one(name, c):
        log10 = 2 * g * (math.log10(c) + math.log10(g))
        frac = _as_fraction(c)
        exact = _exact_power(frac * g, 2 * g) if frac is not None else None
        return _report(name, {"g": g, "c": c}, log10, exact,
                       "(c*g)^(2g)")

    return one("main-lower", c1), one("main-upper", c2)


def lower_bound_composition(P: float, D: float, g: int) -> BoundReport:
    """(P*g)^(2g) / D^g, which equals ((P/sqrt(D))*g)^(2g); both forms are
    evaluated and must agree in log space."""
    if min(P, D) <= 0 or g < 1:
        raise ValueError("need positive P, D and g >= 1")
    direct = 2 * g * (math.log10(P) + math.log10(g)) - g * math.log10(D)
    folded = 2 * g * (math.log10(P / math.sqrt(D)) + math.log10(g))
    if abs(direct - folded) > 1e-9 * max(1.0, abs(direct)):
        raise ValueError("log-space algebra check failed")
    exact = None
    fp, fd = _as_fraction(P), _as_fraction(D)
    if fp is not None and fd is not None and g <= _EXACT_EXP_CAP // 2:
        val = (fp * g) ** (2 * g) / fd ** g
        exact = int(val) if val.denominator == 1 else None
    return _report("lower-composition",
                   {"P": P, "D": D, "g": g, "c_l": P / math.sqrt(D)},
                   direct, exact, "(P*g)^(2g)/D^g")


def diameter_chain(g: int, c1: float, d2: float) -> BoundReport:
    """2 (log g + log c1) / log d2 - 1, a diameter lower bound."""
    if g < 2 or c1 <= 0 or d2 <= 1:
        raise ValueError("need g >= 2, c1 > 0, d2 > 1")
    value = 2 * (math.log(g) + math.log(c1)) / math.log(d2) - 1
    # a plain number: log10 field carries the value itself
    return BoundReport(name="diameter-chain",
                       inputs={"g": g, "c1": c1, "d2": d2},
                       value_log10=value, exact=None,
                       provenance="2(log g + log c1)/log d2 - 1")


def ball_cover_bounds(g: int, d1: float, d2: float) -> tuple[BoundReport, BoundReport]:
    """d1^g and d2^g, the two ends of the ball-covering sandwich."""
    if g < 1 or d1 <= 0 or d2 <= 1:
        raise ValueError("need g >= 1, d1 > 0 (log scale), d2 > 1")
    if d1 > d2:
        raise ValueError("lower base exceeds upper base")
    lo = _report("ball-lower", {"g": g, "d1": d1}, g * math.log10(d1),
                 _exact_power(d1, g), "d1^g")
    hi = _report("ball-upper", {"g": g, "d2": d2}, g * math.log10(d2),
                 _exact_power(d2, g), "d2^g")
    return lo, hi


def packing_budget(D: float, Q: float, g: int, r_of_D: float) -> BoundReport:
    """Surplus D^g - Q^g > 0 of packed balls over covers, log-safe.

    r_of_D is the packing radius retained alongside the report.
    """
    if Q <= 0:
        raise ValueError("Q must be positive")
    if D <= Q:
        raise ValueError("need D > Q")
    if g < 1:
        raise ValueError("g must be >= 1")
    log10 = g * math.log10(D) + math.log10(-math.expm1(g * math.log(Q / D))) \
        if Q / D < 1 else -math.inf
    fd, fq = _as_fraction(D), _as_fraction(Q)
    exact = None
    if fd is not None and fq is not None and g <= _EXACT_EXP_CAP:
        val = fd ** g - fq ** g
        exact = int(val) if val.denominator == 1 else None
    return _report("packing-budget",
                   {"D": D, "Q": Q, "g": g, "delta0": r_of_D},
                   log10, exact, "D^g - Q^g")
