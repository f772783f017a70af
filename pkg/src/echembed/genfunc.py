"""Generating functions for lattice counts.

g_{a,b}(z) = 1 / ((1 - z)(1 - z^a)(1 - z^b)) has L_n(a,b) as its n-th
coefficient.  This module expands such rational series exactly, runs the
seven-term recurrence and the periodic increment table, builds the difference
series G_{a,b,c,d} = g_{a,b} - g_{c,d}, and recovers coefficients numerically
from the Cauchy integral as an independent check.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import gmpy2
import numpy as np

from .errors import InternalConsistencyError, InvalidSeriesError, ParameterError
from .sequences import _positive_int, lattice_counts

__all__ = [
    "IntPolynomial",
    "RationalSeries",
    "EpsilonTable",
    "generating_function",
    "series_coefficients",
    "seven_term_recurrence",
    "build_epsilon_table",
    "counts_via_epsilon",
    "difference_series",
    "coefficient_by_quadrature",
]


class IntPolynomial:
    """Sparse integer polynomial, exponent -> nonzero coefficient."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs=None):
        self._coeffs = {int(k): int(v) for k, v in (coeffs or {}).items() if v != 0}
        if any(k < 0 for k in self._coeffs):
            raise ValueError("negative exponent")

    @classmethod
    def one_minus_power(cls, k: int) -> "IntPolynomial":
        """1 - z^k."""
        if k == 0:
            return cls()
        return cls({0: 1}) - cls({k: 1})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._coeffs)

    @property
    def degree(self) -> int:
        return max(self._coeffs, default=-1)

    def __getitem__(self, k: int) -> int:
        return self._coeffs.get(k, 0)

    def __iter__(self):
        return iter(sorted(self._coeffs.items()))

    def __bool__(self):
        return bool(self._coeffs)

    def __eq__(self, other):
        return isinstance(other, IntPolynomial) and self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out.get(k, 0) + v
        return IntPolynomial(out)

    def __neg__(self):
        return IntPolynomial({k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        out: dict[int, int] = {}
        for i, u in self._coeffs.items():
            for j, v in other._coeffs.items():
                out[i + j] = out.get(i + j, 0) + u * v
        return IntPolynomial(out)

    def __repr__(self):
        if not self._coeffs:
            return "IntPolynomial(0)"
        terms = " + ".join(f"{v}*z^{k}" for k, v in self)
        return f"IntPolynomial({terms})"


def _product(polys) -> IntPolynomial:
    out = IntPolynomial({0: 1})
    for p in polys:
        out = out * p
    return out


@dataclass
class RationalSeries:
    """numerator / denominator as a power series with integer coefficients.

    ``factors`` optionally keeps the denominator as a list of factors; the
    product is expanded once, when the recurrence is first needed.
    """

    numerator: IntPolynomial
    factors: tuple[IntPolynomial, ...]
    _denominator: IntPolynomial | None = field(default=None, repr=False)
    _prefix: list = field(default_factory=list, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @classmethod
    def from_polynomials(cls, numerator: IntPolynomial, denominator: IntPolynomial):
        return cls(numerator, (denominator,))

    @property
    def denominator(self) -> IntPolynomial:
        if self._denominator is None:
            self._denominator = _product(self.factors)
        return self._denominator

    def coefficients(self, count: int) -> list[int]:
        den = self.denominator
        lead = den[0]
        if lead not in (1, -1):
            raise InvalidSeriesError(f"denominator constant term is {lead}, need +-1")
        with self._lock:
            c = self._prefix
            tail = [(k, v) for k, v in den if k > 0]
            num = self.numerator
            for n in range(len(c), count):
                acc = num[n]
                for k, v in tail:
                    if k > n:
                        break
                    acc -= v * c[n - k]
                c.append(acc * lead)
            return c[:count]


def generating_function(a: int, b: int) -> RationalSeries:
    """g_{a,b} = 1 / ((1 - z)(1 - z^a)(1 - z^b))."""
    _positive_int(a, "a")
    _positive_int(b, "b")
    one_minus = IntPolynomial.one_minus_power
    return RationalSeries(IntPolynomial({0: 1}), (one_minus(1), one_minus(a), one_minus(b)))


def series_coefficients(s: RationalSeries, count: int) -> list[int]:
    """First ``count`` coefficients of ``s``, exact."""
    _positive_int(count, "count")
    return s.coefficients(count)


def seven_term_recurrence(a: int, b: int, count: int) -> list[int]:
    """L_0..L_{count-1} from the recurrence obtained by clearing the denominator of g_{a,b}."""
    _positive_int(a, "a")
    _positive_int(b, "b")
    _positive_int(count, "count")
    out: list[int] = []

    def at(k: int) -> int:
        return out[k] if k >= 0 else 0

    for n in range(count):
        if n == 0:
            out.append(1)
            continue
        out.append(
            at(n - 1) + at(n - a) + at(n - b) + at(n - a - b - 1)
            - at(n - a - 1) - at(n - b - 1) - at(n - a - b)
        )
    return out


@dataclass(frozen=True)
class EpsilonTable:
    """Periodic increment table for L(a, b).

    With g = gcd(a, b), a' = a/g, b' = b/g and P = a'b':

        L_n - L_{n-1} = floor(n / (g P)) + eps[(n/g) mod P]   if g divides n
        L_n - L_{n-1} = 0                                      otherwise

    For coprime a, b this is L_n = L_{n-1} + floor(n/ab) + eps[n mod ab].
    """

    a: int
    b: int
    gcd: int
    period: int
    eps: tuple[int, ...]

    def increment(self, n: int) -> int:
        if n < 1:
            raise ParameterError("increments start at n = 1")
        g = self.gcd
        if n % g:
            return 0
        m = n // g
        return m // self.period + self.eps[m % self.period]


def _raw_epsilon(counts, period: int, lo: int, hi: int) -> list[int]:
    return [int(counts[n] - counts[n - 1]) - n // period for n in range(lo, hi + 1)]


@lru_cache(maxsize=256)
def build_epsilon_table(a: int, b: int) -> EpsilonTable:
    """Extract eps from a lattice-count prefix and validate it on a second window."""
    _positive_int(a, "a")
    _positive_int(b, "b")
    g = gcd(a, b)
    ra, rb = a // g, b // g
    period = ra * rb
    reduced = lattice_counts(ra, rb, 4 * period)
    raw = _raw_epsilon(reduced, period, 1, period)
    eps = [0] * period
    for n, e in zip(range(1, period + 1), raw):
        eps[n % period] = e
    if any(e not in (0, 1) for e in eps):
        raise InternalConsistencyError(f"increment table for ({ra},{rb}) leaves {{0,1}}: {eps}")
    for n, e in zip(range(period + 1, 4 * period + 1), _raw_epsilon(reduced, period, period + 1, 4 * period)):
        if e != eps[n % period]:
            raise InternalConsistencyError(f"increment table for ({ra},{rb}) not periodic at n={n}")
    table = EpsilonTable(a, b, g, period, tuple(eps))
    if g > 1:
        full = lattice_counts(a, b, 4 * a * b)
        for n in range(1, 4 * a * b + 1):
            if full[n] - full[n - 1] != table.increment(n):
                raise InternalConsistencyError(f"increment rule for ({a},{b}) fails at n={n}")
    return table


def counts_via_epsilon(table: EpsilonTable, up_to: int) -> list[int]:
    """L_0..L_up_to rebuilt from the increment table."""
    if up_to < 0:
        raise ParameterError("up_to must be nonnegative")
    out = [1]
    for n in range(1, up_to + 1):
        out.append(out[-1] + table.increment(n))
    return out


def difference_series(a: int, b: int, c: int, d: int) -> RationalSeries:
    """G_{a,b,c,d} = ((1-z^c)(1-z^d) - (1-z^a)(1-z^b)) / ((1-z)(1-z^a)(1-z^b)(1-z^c)(1-z^d))."""
    for name, v in zip("abcd", (a, b, c, d)):
        _positive_int(v, name)
    om = IntPolynomial.one_minus_power
    numerator = om(c) * om(d) - om(a) * om(b)
    return RationalSeries(numerator, (om(1), om(a), om(b), om(c), om(d)))


_QUAD_PRECISION = 128


@lru_cache(maxsize=64)
def _unit_roots(points: int) -> np.ndarray:
    with gmpy2.context(gmpy2.get_context(), precision=_QUAD_PRECISION):
        two_pi = 2 * gmpy2.const_pi()
        return np.array(
            [gmpy2.mpc(gmpy2.cos(two_pi * k / points), gmpy2.sin(two_pi * k / points)) for k in range(points)],
            dtype=object,
        )


def default_quadrature_points(n: int) -> int:
    return max(64, 8 * n)


def coefficient_by_quadrature(a: int, b: int, n: int, radius: float = 0.5, points: int | None = None) -> float:
    """Trapezoid-rule value of (1/2 pi i) ∮ g_{a,b}(xi) xi^{-n-1} dxi on |xi| = radius.

    The sum cancels down from O(1) terms to a result of size L_n * radius^n, so it
    is accumulated in 128-bit floating point; powers of the nodes are read off a
    table of roots of unity rather than computed by repeated multiplication.
    """
    _positive_int(a, "a")
    _positive_int(b, "b")
    if n < 0:
        raise ParameterError("n must be nonnegative")
    if not 0 < radius < 1:
        raise ParameterError(f"radius must lie in (0, 1), got {radius}")
    if points is None:
        points = default_quadrature_points(n)
    _positive_int(points, "points")
    roots = _unit_roots(points)
    j = np.arange(points)
    with gmpy2.context(gmpy2.get_context(), precision=_QUAD_PRECISION):
        r = gmpy2.mpfr(radius)
        den = (1 - r * roots) * (1 - r**a * roots[(a * j) % points]) * (1 - r**b * roots[(b * j) % points])
        total = np.sum(roots[(-n * j) % points] / den) / points
        return float((total * r ** (-n)).real)
