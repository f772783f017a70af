"""Capacity sequences N(a,b) and lattice counts L_n(a,b).

N(a,b) lists the numbers ka + lb (k, l >= 0) in nondecreasing order with
repetition.  L_n(a,b) is the number of those entries that are <= n, which is
also the number of lattice points (l, m) >= 0 with al + bm <= n.
"""

from __future__ import annotations

import heapq
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import ParameterError

__all__ = [
    "Ellipsoid",
    "CapacitySequence",
    "CountSequence",
    "as_rational",
    "gen_capacities",
    "count_lattice_oracle",
    "count_equal_axes",
    "counts_from_capacities",
    "lattice_counts",
    "triangle_number",
]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction. Floats are refused."""
    if isinstance(x, bool):
        raise ParameterError(f"not a rational: {x!r}")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"malformed rational {x!r}") from exc
    raise ParameterError(f"expected an exact rational, got {type(x).__name__} {x!r}")


def _positive(x, name: str) -> Fraction:
    q = as_rational(x)
    if q <= 0:
        raise ParameterError(f"{name} must be positive, got {q}")
    return q


def _positive_int(x, name: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < 1:
        raise ParameterError(f"{name} must be a positive integer, got {x!r}")
    return x


def triangle_number(k: int) -> int:
    """d(k) = (k+1)(k+2)/2, with d(-1) = d(-2) = 0."""
    return (k + 1) * (k + 2) // 2 if k >= -1 else 0


@dataclass(frozen=True)
class Ellipsoid:
    """Parameters (a, b) of E(a, b), stored with a <= b."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        a = _positive(self.a, "a")
        b = _positive(self.b, "b")
        if b < a:
            a, b = b, a
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    @property
    def volume(self) -> Fraction:
        return self.a * self.b

    def scaled(self, lam) -> "Ellipsoid":
        lam = _positive(lam, "scale")
        return Ellipsoid(self.a * lam, self.b * lam)


@dataclass
class CapacitySequence:
    """Lazily extended N(a, b).

    One stream {ka + lb : k >= 0} per l, merged through a heap.  Stream l+1 is
    opened when stream l emits its first element, so every pair (k, l) is
    emitted exactly once and repeated values keep their multiplicity.
    """

    source: Ellipsoid
    _values: list = field(default_factory=list, repr=False)
    _heap: list = field(default_factory=list, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        self._heap = [(Fraction(0), 0, 0)]

    def __len__(self) -> int:
        return len(self._values)

    def _extend_to(self, count: int) -> None:
        with self._lock:
            a, b = self.source.a, self.source.b
            heap = self._heap
            while len(self._values) < count:
                value, k, l = heapq.heappop(heap)
                self._values.append(value)
                heapq.heappush(heap, (value + a, k + 1, l))
                if k == 0:
                    heapq.heappush(heap, (value + b, 0, l + 1))

    def prefix(self, count: int) -> list[Fraction]:
        if count < 0:
            raise ParameterError("count must be nonnegative")
        if len(self._values) < count:
            self._extend_to(count)
        return self._values[:count]

    def __getitem__(self, j: int) -> Fraction:
        if j < 0:
            raise IndexError(j)
        return self.prefix(j + 1)[j]

    def count_at_most(self, n) -> int:
        """Number of entries <= n, i.e. L_n for this ellipsoid."""
        n = as_rational(n)
        if n < 0:
            return 0
        step = max(len(self._values), 16)
        while not self._values or self._values[-1] <= n:
            self._extend_to(len(self._values) + step)
            step *= 2
        lo, hi = 0, len(self._values)
        while lo < hi:
            mid = (lo + hi) // 2
            if self._values[mid] <= n:
                lo = mid + 1
            else:
                hi = mid
        return lo


@dataclass(frozen=True)
class CountSequence:
    source: Ellipsoid
    values: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)


def gen_capacities(e: Ellipsoid, count: int) -> list[Fraction]:
    """First ``count`` entries of N(a, b) as exact rationals."""
    _positive_int(count, "count")
    return CapacitySequence(e).prefix(count)


def count_lattice_oracle(a: int, b: int, n: int) -> int:
    """#{(l, m) >= 0 : al + bm <= n}, enumerated row by row."""
    _positive_int(a, "a")
    _positive_int(b, "b")
    if n < 0:
        return 0
    total = 0
    for m in range(n // b + 1):
        total += (n - b * m) // a + 1
    return total


def count_equal_axes(a: int, n: int) -> int:
    """L_n(a, a) = d(floor(n/a))."""
    _positive_int(a, "a")
    if n < 0:
        return 0
    return triangle_number(n // a)


def counts_from_capacities(e: Ellipsoid, up_to: int) -> CountSequence:
    """L_0..L_up_to obtained by counting capacity entries <= n."""
    if up_to < 0:
        raise ParameterError("up_to must be nonnegative")
    seq = CapacitySequence(e)
    # every entry below up_to+1 is reached before the first entry exceeding it
    step = 64
    while len(seq) == 0 or seq.prefix(len(seq))[-1] <= up_to:
        seq.prefix(len(seq) + step)
        step *= 2
    values = seq.prefix(len(seq))
    out = []
    j = 0
    for n in range(up_to + 1):
        while values[j] <= n:
            j += 1
        out.append(j)
    return CountSequence(e, tuple(out))


def lattice_counts(a: int, b: int, up_to: int) -> np.ndarray:
    """Vectorised enumeration of L_0..L_up_to for integer a, b (int64 array).

    Counts representations n = al + bm exactly and accumulates them; this is the
    bulk form of :func:`count_lattice_oracle`.
    """
    _positive_int(a, "a")
    _positive_int(b, "b")
    if a > b:
        a, b = b, a
    reps = np.zeros(up_to + 1, dtype=np.int64)
    for m in range(up_to // b + 1):
        reps[b * m :: a] += 1
    return np.cumsum(reps)
