"""Exact all-n comparison of lattice counts, hence of ellipsoid embeddings.

int E(a,b) embeds symplectically in E(c,d) iff N(a,b) <= N(c,d) entrywise,
iff L_n(a,b) >= L_n(c,d) for every n >= 0.  Two exact routes decide the
infinite comparison:

* residue route: L(a,b) is quadratic in q on each class n = qP + r with P = ab,
  so after passing to the common period M = lcm(ab, cd) the difference is one
  integer quadratic per residue, and each sign question is finite;
* cutoff route: explicit lattice-count bounds give a level beyond which the sign
  of L(a,b) - L(c,d) is settled (whenever ab != cd), so only a finite prefix of
  the two capacity sequences has to be compared.

Both report the smallest violating n when the comparison fails.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce

import numpy as np

from .errors import DecisionTooLargeError, InternalConsistencyError, ParameterError
from .sequences import _positive, _positive_int, count_lattice_oracle, lattice_counts, triangle_number

__all__ = [
    "Verdict",
    "QuasiQuadratic",
    "DecisionOutcome",
    "ConvolutionReport",
    "build_quasi_quadratic",
    "decide_domination",
    "decide_by_cutoff",
    "embeds",
    "verify_ball_filling",
    "convolution_identity_check",
    "RESIDUE_LIMIT",
    "ENTRY_LIMIT",
]

# largest common period handled by the residue route
RESIDUE_LIMIT = 200_000
# largest number of capacity entries materialised by the cutoff route
ENTRY_LIMIT = 20_000_000


class Verdict(str, enum.Enum):
    EMBEDS = "Embeds"
    OBSTRUCTED = "Obstructed"


@dataclass(frozen=True)
class QuasiQuadratic:
    """L_{qP+r} = alpha[r] q^2 + beta[r] q + gamma[r] for all q >= 0.

    Coefficients are kept doubled (``twice``) because an integer-valued quadratic
    has half-integral coefficients at worst.
    """

    a: int
    b: int
    period: int
    twice: tuple[tuple[int, int, int], ...]

    @property
    def alpha(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(t[0], 2) for t in self.twice)

    @property
    def beta(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(t[1], 2) for t in self.twice)

    @property
    def gamma(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(t[2], 2) for t in self.twice)

    def __call__(self, n: int) -> int:
        if n < 0:
            return 0
        q, r = divmod(n, self.period)
        A, B, C = self.twice[r]
        return (A * q * q + B * q + C) // 2


@lru_cache(maxsize=512)
def build_quasi_quadratic(a: int, b: int) -> QuasiQuadratic:
    """Fit the per-residue quadratics at q = 0, 1, 2 and check them at q = 3, 4."""
    _positive_int(a, "a")
    _positive_int(b, "b")
    if a > b:
        a, b = b, a
    P = a * b
    L = lattice_counts(a, b, 5 * P - 1).tolist()
    twice = []
    for r in range(P):
        v0, v1, v2, v3, v4 = L[r], L[P + r], L[2 * P + r], L[3 * P + r], L[4 * P + r]
        A = v2 - 2 * v1 + v0          # 2 alpha
        B = 2 * (v1 - v0) - A         # 2 beta
        C = 2 * v0                    # 2 gamma
        for q, v in ((3, v3), (4, v4)):
            if A * q * q + B * q + C != 2 * v:
                raise InternalConsistencyError(f"L({a},{b}) not quadratic on residue {r} at q={q}")
        if A != P:
            raise InternalConsistencyError(f"leading coefficient on residue {r} of L({a},{b}) is {A}/2, expected {P}/2")
        twice.append((A, B, C))
    return QuasiQuadratic(a, b, P, tuple(twice))


@dataclass(frozen=True)
class DecisionOutcome:
    verdict: Verdict
    witness: int | None = None
    witness_counts: tuple[int, int] | None = None
    scale: int = 1
    frame: tuple[int, int, int, int] | None = None
    method: str = "residue"

    @property
    def embeds(self) -> bool:
        return self.verdict is Verdict.EMBEDS


def _first_negative(a2: int, a1: int, a0: int) -> int | None:
    """Smallest integer t >= 0 with a2 t^2 + a1 t + a0 < 0, or None."""

    def D(t):
        return (a2 * t + a1) * t + a0

    if a0 < 0:
        return 0
    if a2 == 0:
        if a1 >= 0:
            return None
        return a0 // (-a1) + 1
    if a2 < 0:
        # increasing up to the vertex, decreasing afterwards; D(0) >= 0
        lo = max(0, math.ceil(Fraction(-a1, 2 * a2)))
        hi = lo + 1
        while D(hi) >= 0:
            hi = 2 * hi + 1
        if D(lo) < 0:
            return lo
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if D(mid) < 0:
                hi = mid
            else:
                lo = mid
        return hi
    # convex: integer minimum is next to the vertex
    v = Fraction(-a1, 2 * a2)
    t_min = max(0, math.floor(v))
    if D(t_min + 1) < D(t_min):
        t_min += 1
    if D(t_min) >= 0:
        return None
    lo, hi = 0, t_min  # D(lo) >= 0, D(hi) < 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if D(mid) < 0:
            hi = mid
        else:
            lo = mid
    return hi


def _section(qq: QuasiQuadratic, M: int, R: int) -> tuple[int, int, int]:
    """Doubled coefficients of t -> L_{tM + R}."""
    m = M // qq.period
    s, r = divmod(R, qq.period)
    A, B, C = qq.twice[r]
    return (A * m * m, 2 * A * m * s + B * m, A * s * s + B * s + C)


def decide_domination(p: QuasiQuadratic, q: QuasiQuadratic) -> DecisionOutcome:
    """Decide L_n(p) >= L_n(q) for every n >= 0 by residue classes of lcm(P_p, P_q)."""
    M = math.lcm(p.period, q.period)
    if M > RESIDUE_LIMIT:
        raise DecisionTooLargeError(f"common period {M} exceeds RESIDUE_LIMIT={RESIDUE_LIMIT}")
    best: int | None = None
    for R in range(M):
        if best is not None and R >= best:
            break
        x2, x1, x0 = _section(p, M, R)
        y2, y1, y0 = _section(q, M, R)
        t = _first_negative(x2 - y2, x1 - y1, x0 - y0)
        if t is not None:
            n = t * M + R
            if best is None or n < best:
                best = n
    frame = (p.a, p.b, q.a, q.b)
    if best is None:
        return DecisionOutcome(Verdict.EMBEDS, frame=frame, method="residue")
    counts = (p(best), q(best))
    if counts[0] >= counts[1]:
        raise InternalConsistencyError(f"witness n={best} does not violate: {counts}")
    return DecisionOutcome(Verdict.OBSTRUCTED, best, counts, frame=frame, method="residue")


def _settle_level(c2: Fraction, c1: Fraction, c0: Fraction) -> int:
    """Integer X >= 0 with c2 x^2 + c1 x + c0 >= 0 for every real x >= X (c2 > 0)."""
    Q = lambda x: (c2 * x + c1) * x + c0  # noqa: E731
    disc = float(c1) ** 2 - 4 * float(c2) * float(c0)
    root = (-float(c1) + math.sqrt(max(disc, 0.0))) / (2 * float(c2))
    X = max(0, math.ceil(root), math.ceil(-c1 / (2 * c2)))
    while Q(X) < 0:
        X = 2 * X + 1
    return X


def _cutoff(a: int, b: int, c: int, d: int) -> int:
    """Level X such that the sign of L_n(a,b) - L_n(c,d) is settled for n >= X.

    Uses, for u <= v and every real n >= 0,
        n^2/(2uv) + n/(2u) < L_n(u,v) <= n^2/(2uv) + n/(2u) + n/v + v/(8u) + 1.
    If ab < cd the difference is > -1 (hence >= 0) beyond X; if ab > cd it is < 0 at X.
    """
    quad = Fraction(1, 2 * a * b) - Fraction(1, 2 * c * d)
    if quad > 0:
        lin = Fraction(1, 2 * a) - Fraction(1, 2 * c) - Fraction(1, d)
        const = -Fraction(d, 8 * c)
        return _settle_level(quad, lin, const)
    lin = Fraction(1, 2 * a) + Fraction(1, b) - Fraction(1, 2 * c)
    const = Fraction(b, 8 * a) + 1
    return _settle_level(-quad, -lin, -const)


def _values_up_to(a: int, b: int, X: int) -> np.ndarray:
    """Sorted multiset {ka + lb <= X}."""
    chunks = [np.arange(l * b, X + 1, a, dtype=np.int64) for l in range(X // b + 1)]
    out = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    out.sort(kind="stable")
    return out


def decide_by_cutoff(a: int, b: int, c: int, d: int) -> DecisionOutcome:
    """Decide by comparing capacity prefixes up to a certified level (needs ab != cd)."""
    a, b = sorted((a, b))
    c, d = sorted((c, d))
    if a * b == c * d:
        raise ParameterError("cutoff route needs unequal volumes")
    X = _cutoff(a, b, c, d)
    expected = (X + a + b) ** 2 / (2 * a * b) + (X + c + d) ** 2 / (2 * c * d)
    if expected > ENTRY_LIMIT:
        raise DecisionTooLargeError(f"cutoff level {X} needs ~{expected:.3g} entries")
    src = _values_up_to(a, b, X)
    dst = _values_up_to(c, d, X)
    k = min(len(src), len(dst))
    bad = np.nonzero(src[:k] > dst[:k])[0]
    if len(bad):
        j = int(bad[0])
    elif len(src) < len(dst):
        j = len(src)
    else:
        j = None
    frame = (a, b, c, d)
    if j is None:
        if a * b > c * d:
            raise InternalConsistencyError(f"no violation below {X} for {frame}")
        return DecisionOutcome(Verdict.EMBEDS, frame=frame, method="cutoff")
    n = int(dst[j])
    counts = (count_lattice_oracle(a, b, n), count_lattice_oracle(c, d, n))
    if counts[0] >= counts[1]:
        raise InternalConsistencyError(f"witness n={n} does not violate: {counts}")
    return DecisionOutcome(Verdict.OBSTRUCTED, n, counts, frame=frame, method="cutoff")


def embeds(a, b, c, d) -> DecisionOutcome:
    """Decide int E(a,b) -> E(c,d) for positive rationals.

    Denominators are cleared by their lcm (the reported ``scale``); the witness is
    an index in that integer frame.
    """
    params = [_positive(x, name) for x, name in zip((a, b, c, d), "abcd")]
    lam = reduce(math.lcm, (x.denominator for x in params), 1)
    A, B, C, D = (int(x * lam) for x in params)
    # common factors are removed for the computation and put back on the witness
    g = reduce(math.gcd, (A, B, C, D))
    a0, b0, c0, d0 = A // g, B // g, C // g, D // g
    if math.lcm(a0 * b0, c0 * d0) <= RESIDUE_LIMIT:
        out = decide_domination(build_quasi_quadratic(a0, b0), build_quasi_quadratic(c0, d0))
    elif a0 * b0 != c0 * d0:
        out = decide_by_cutoff(a0, b0, c0, d0)
    else:
        raise DecisionTooLargeError(
            f"equal volumes with common period {math.lcm(a0 * b0, c0 * d0)}; no bounded route applies"
        )
    frame = (min(A, B), max(A, B), min(C, D), max(C, D))
    witness = None if out.witness is None else out.witness * g
    return DecisionOutcome(out.verdict, witness, out.witness_counts, lam, frame, out.method)


def verify_ball_filling(n: int) -> DecisionOutcome:
    """int E(1, n^2) -> B(n)."""
    _positive_int(n, "n")
    return embeds(1, n * n, n, n)


@dataclass(frozen=True)
class ConvolutionRow:
    N: int
    lhs: int
    closed_form: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs


@dataclass(frozen=True)
class ConvolutionReport:
    n: int
    rows: tuple[ConvolutionRow, ...]

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.rows)


def _ball_ratio_coefficient(k: int, n: int) -> int:
    r = k % n
    return 1 if r == 0 else -1 if r == 1 else 0


def convolution_identity_check(n: int, N_max: int) -> ConvolutionReport:
    """sum_k c(floor(k/n)) d(floor((N-k)/n)) against its closed form and against d(floor(N/n)).

    c is 1 on multiples of n, -1 on numbers congruent to 1 mod n and 0 otherwise;
    d is the triangle number.  Only n >= 2 is accepted, since the two nonzero cases
    of c coincide modulo 1.
    """
    _positive_int(n, "n")
    if n < 2:
        raise ParameterError("the filling convolution is defined for n >= 2")
    if N_max < 0:
        raise ParameterError("N_max must be nonnegative")
    c = [_ball_ratio_coefficient(k // n, n) for k in range(N_max + 1)]
    d = [triangle_number(k // n) for k in range(N_max + 1)]
    rows = []
    for N in range(N_max + 1):
        lhs = sum(c[k] * d[N - k] for k in range(N + 1))
        p = N // (n * n)
        closed = (p + 1) * (N + 1) - p * (p + 1) // 2 * n * n
        if lhs != closed:
            raise InternalConsistencyError(f"convolution at n={n}, N={N}: direct {lhs} != closed form {closed}")
        rows.append(ConvolutionRow(N, lhs, closed, d[N]))
    return ConvolutionReport(n, tuple(rows))
