"""Sampled checks of generating-function inequalities on [0, 1).

Nothing here is a proof: a pass is reported as ``holds-on-grid``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import ParameterError
from .sequences import _positive, _positive_int, as_rational, lattice_counts

__all__ = [
    "GridPoint",
    "SampledFunctionReport",
    "eval_g",
    "default_grid",
    "check_factor_inequality",
    "check_scale_invariance",
    "check_derivative_domination",
    "reproduce_witness",
    "HOLDS",
    "VIOLATED",
]

HOLDS = "holds-on-grid"
VIOLATED = "violated"

WORK_PRECISION = 128
REFINEMENT_DEPTH = 40
TAIL_RELATIVE = 1e-9


@dataclass(frozen=True)
class GridPoint:
    z: Fraction
    left: object
    right: object
    margin: object
    error: float = 0.0
    order: int = 0

    def as_row(self) -> dict:
        return {
            "order": self.order,
            "z": self.z,
            "left": self.left,
            "right": self.right,
            "margin": self.margin,
            "error": self.error,
        }


@dataclass
class SampledFunctionReport:
    test: str
    parameters: dict
    points: list[GridPoint] = field(default_factory=list)
    witness: GridPoint | None = None

    @property
    def verdict(self) -> str:
        return HOLDS if self.witness is None else VIOLATED

    @property
    def grid(self) -> list[Fraction]:
        return [p.z for p in self.points]

    def _record(self, point: GridPoint, violated: bool) -> None:
        self.points.append(point)
        if violated and self.witness is None:
            self.witness = point


def default_grid(grid_size: int, depth: int = REFINEMENT_DEPTH) -> list[Fraction]:
    """grid_size uniform points on [0, 1/2] followed by 1 - 2^-k for k = 1..depth."""
    _positive_int(grid_size, "grid_size")
    if grid_size == 1:
        uniform = [Fraction(0)]
    else:
        uniform = [Fraction(i, 2 * (grid_size - 1)) for i in range(grid_size)]
    tail = [1 - Fraction(1, 2**k) for k in range(1, depth + 1)]
    return sorted(set(uniform) | set(tail))


def eval_g(a: int, b: int, z) -> Fraction:
    """g_{a,b}(z) = 1 / ((1 - z)(1 - z^a)(1 - z^b)) for rational 0 <= z < 1."""
    _positive_int(a, "a")
    _positive_int(b, "b")
    z = as_rational(z)
    if z < 0 or z >= 1:
        raise ParameterError(f"z must lie in [0, 1), got {z}")
    return 1 / ((1 - z) * (1 - z**a) * (1 - z**b))


def _one_minus_power(z, e):
    # 1 - z^e without cancellation near z = 1
    if z == 0:
        return mpmath.mpf(1)
    return -mpmath.expm1(e * mpmath.log1p(z - 1))


def _factor_sides(z: Fraction, a, b, c, d, prec: int):
    with mpmath.workprec(prec):
        zz = mpmath.mpf(z.numerator) / z.denominator
        ex = [mpmath.mpf(x.numerator) / x.denominator for x in (a, b, c, d)]
        left = _one_minus_power(zz, ex[2]) * _one_minus_power(zz, ex[3])
        right = _one_minus_power(zz, ex[0]) * _one_minus_power(zz, ex[1])
        return left, right, left - right


def check_factor_inequality(a, b, c, d, grid_size: int = 16) -> SampledFunctionReport:
    """Sample g_{a,b}(z) >= g_{c,d}(z), in the form (1 - z^c)(1 - z^d) >= (1 - z^a)(1 - z^b).

    Real exponents are evaluated at 128 bits and again at 256; a point counts as a
    violation only when the margin is below minus the disagreement of the two
    evaluations (plus a rounding allowance).
    """
    a, b, c, d = (_positive(x, n) for x, n in zip((a, b, c, d), "abcd"))
    if b > min(c, d):
        raise ParameterError(f"requires b <= min(c, d), got b={b}, c={c}, d={d}")
    report = SampledFunctionReport("factor-inequality", {"a": a, "b": b, "c": c, "d": d, "grid_size": grid_size})
    for z in default_grid(grid_size):
        left, right, margin = _factor_sides(z, a, b, c, d, WORK_PRECISION)
        _, _, fine = _factor_sides(z, a, b, c, d, 2 * WORK_PRECISION)
        with mpmath.workprec(2 * WORK_PRECISION):
            err = abs(margin - fine) + (abs(left) + abs(right)) * mpmath.mpf(2) ** (8 - WORK_PRECISION)
        point = GridPoint(z, float(left), float(right), float(margin), float(err))
        report._record(point, fine < -err)
    return report


def reproduce_witness(report: SampledFunctionReport, prec: int) -> float | None:
    """Margin of a factor-inequality report's witness re-evaluated at ``prec`` bits."""
    if report.witness is None:
        return None
    p = report.parameters
    return float(_factor_sides(report.witness.z, p["a"], p["b"], p["c"], p["d"], prec)[2])


def check_scale_invariance(a: int, b: int, c: int, d: int, lam: int, grid_size: int = 16) -> SampledFunctionReport:
    """g_{a,b}(w^lam) >= g_{c,d}(w^lam) iff g_{lam a, lam b}(w) >= g_{lam c, lam d}(w), exactly.

    ``left`` and ``right`` are the two differences; ``margin`` is 1 when their signs
    agree and 0 otherwise.
    """
    for x, n in zip((a, b, c, d), "abcd"):
        _positive_int(x, n)
    _positive_int(lam, "lam")
    report = SampledFunctionReport(
        "scale-invariance", {"a": a, "b": b, "c": c, "d": d, "lam": lam, "grid_size": grid_size}
    )
    for w in default_grid(grid_size):
        z = w**lam
        before = eval_g(a, b, z) - eval_g(c, d, z)
        after = eval_g(lam * a, lam * b, w) - eval_g(lam * c, lam * d, w)
        agree = (before >= 0) == (after >= 0)
        report._record(GridPoint(w, before, after, int(agree)), not agree)
    return report


def _tail_bound(k: int, N: int, z: Fraction, S: int, m: int) -> float:
    """Bound on sum_{n > N} k! C(n,k) |L_n - L'_n| z^(n-k), using |L_n - L'_n| <= (n+S)^2/(2m)."""
    if z == 0:
        return 0.0
    zf = float(z)
    n = N + 1
    rho = zf * (n + 1) / (n + 1 - k) * ((n + 1 + S) / (n + S)) ** 2
    if rho >= 1:
        return math.inf
    log_term = (
        math.lgamma(n + 1) - math.lgamma(n - k + 1) + 2 * math.log(n + S) - math.log(2 * m) + (n - k) * math.log(zf)
    )
    return math.exp(log_term) / (1 - rho)


def _horner(weights: list[int], z: Fraction) -> Fraction:
    """sum_i weights[i] z^i, exact."""
    p, q = z.numerator, z.denominator
    acc = 0
    qpow = 1
    for w in reversed(weights):
        acc = acc * p + w * qpow
        qpow *= q
    return Fraction(acc, qpow // q) if weights else Fraction(0)


def check_derivative_domination(
    a: int, b: int, c: int, d: int, max_order: int = 5, grid_size: int = 20
) -> SampledFunctionReport:
    """Sample g_{a,b}^(k)(z) >= g_{c,d}^(k)(z) for k <= max_order, z = i/grid_size.

    Each derivative is a truncated series sum_{n>=k} k! C(n,k) L_n z^(n-k); the
    truncation point grows until the tail bound is below 1e-9 of the partial sum of
    g_{a,b}^(k).  ``error`` holds that tail bound.
    """
    for x, n in zip((a, b, c, d), "abcd"):
        _positive_int(x, n)
    if max_order < 0:
        raise ParameterError("max_order must be nonnegative")
    _positive_int(grid_size, "grid_size")
    report = SampledFunctionReport(
        "derivative-domination", {"a": a, "b": b, "c": c, "d": d, "max_order": max_order, "grid_size": grid_size}
    )
    S = max(a + b, c + d)
    m = min(a * b, c * d)
    N = 256
    Lab = lattice_counts(a, b, N).tolist()
    Lcd = lattice_counts(c, d, N).tolist()
    for k in range(max_order + 1):
        for i in range(grid_size):
            z = Fraction(i, grid_size)
            while True:
                if len(Lab) <= N:
                    Lab = lattice_counts(a, b, N).tolist()
                    Lcd = lattice_counts(c, d, N).tolist()
                fact = math.factorial(k)
                binoms = [fact * math.comb(n, k) for n in range(k, N + 1)]
                left = _horner([w * Lab[n] for w, n in zip(binoms, range(k, N + 1))], z)
                tail = _tail_bound(k, N, z, S, m)
                if tail <= TAIL_RELATIVE * float(left):
                    break
                N *= 2
            right = _horner([w * Lcd[n] for w, n in zip(binoms, range(k, N + 1))], z)
            margin = left - right
            report._record(GridPoint(z, left, right, margin, tail, k), margin < -tail)
    return report
