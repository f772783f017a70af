"""Ball capacity c(a) = inf{mu : int E(1, a) embeds in B(mu)} as certified intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .decide import embeds
from .errors import ParameterError
from .sequences import _positive, as_rational

__all__ = [
    "CapacityResult",
    "capacity_interval",
    "capacity_exact_probe",
    "capacity_table",
    "sqrt_floor",
    "simplest_between",
]

SQRT_DENOMINATOR = 10**6


@dataclass(frozen=True)
class CapacityResult:
    """lower: every mu < lower is obstructed.  upper: mu = upper embeds."""

    input: Fraction
    lower: Fraction
    upper: Fraction
    exact: Fraction | None = None

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def as_row(self) -> dict:
        return {"a": self.input, "lower": self.lower, "upper": self.upper, "exact": self.exact}


def sqrt_floor(x: Fraction, denominator: int = SQRT_DENOMINATOR) -> Fraction:
    """Largest k/denominator not exceeding sqrt(x)."""
    return Fraction(math.isqrt(x.numerator * denominator**2 // x.denominator), denominator)


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in [lo, hi] (Stern-Brocot descent)."""
    if lo > hi:
        raise ParameterError("empty interval")
    fl = math.floor(lo)
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # both in (fl, fl + 1): recurse on reciprocals of the fractional parts
    inner = simplest_between(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / inner


def _ball(a: Fraction, mu: Fraction) -> bool:
    if mu * mu < a:
        # volume alone obstructs; no need to build a (possibly huge) decision
        return False
    return embeds(1, a, mu, mu).embeds


def capacity_exact_probe(a, candidate, probe_step) -> bool:
    """Embeds at ``candidate`` and is obstructed at ``candidate - probe_step``."""
    a = _positive(a, "a")
    candidate = _positive(candidate, "candidate")
    probe_step = _positive(probe_step, "probe_step")
    if not _ball(a, candidate):
        return False
    below = candidate - probe_step
    return below <= 0 or not _ball(a, below)


def capacity_interval(a, tolerance) -> CapacityResult:
    """Bisect on mu with exact embedding decisions until upper - lower <= tolerance.

    Starts from sqrt(a) rounded down (volume) and a (inclusion).  Trial points are
    the simplest rationals in the middle half of the current interval, which keeps
    the integer frames of the decisions small.

    ``exact`` is filled when the simplest rational of the final interval either has
    square a (so the volume bound is attained) or embeds while candidate - tolerance
    is obstructed with volume to spare, i.e. by a capacity rather than by volume.
    """
    a = as_rational(a)
    tolerance = as_rational(tolerance)
    if a < 1:
        raise ParameterError(f"capacity function is defined for a >= 1, got {a}")
    if tolerance <= 0:
        raise ParameterError("tolerance must be positive")
    lo = sqrt_floor(a)
    hi = a
    if lo * lo == a and _ball(a, lo):
        return CapacityResult(a, lo, lo, lo)
    while hi - lo > tolerance:
        w = hi - lo
        mid = simplest_between(lo + w / 4, hi - w / 4)
        if _ball(a, mid):
            hi = mid
        else:
            lo = mid
    exact = None
    cand = simplest_between(lo, hi)
    if cand * cand == a:
        exact = cand
    else:
        below = cand - tolerance
        if below * below > a and capacity_exact_probe(a, cand, tolerance):
            exact = cand
    return CapacityResult(a, lo, hi, exact)


def capacity_table(a_values, tolerance) -> list[CapacityResult]:
    values = [as_rational(v) for v in a_values]
    if not values:
        raise ParameterError("a_values must be nonempty")
    return [capacity_interval(v, tolerance) for v in values]
