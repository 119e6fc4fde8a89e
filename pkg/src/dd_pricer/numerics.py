"""Numerically stable kernels shared by all pricing modules.

The hyperbolic ratios that appear throughout the closed forms overflow for
exponent arguments above ~700, so every ratio here is evaluated in
exponent-scaled form: ``sinh(b)/sinh(c)`` becomes
``exp(|b|-|c|) * (1-exp(-2|b|))/(1-exp(-2|c|))`` with signs tracked
separately. Raw ``math.sinh``/``math.cosh`` never see large arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import NoBracket, NotConverged, ValidationError

_EXP_MAX = 709.0  # log of the largest finite double, minus slack


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    converged: bool


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int


def xi_exponent(r: float, mu: float, sigma: float) -> float:
    """sqrt(2r/sigma^2 + mu^2/sigma^4), the exponent scale of the drawdown
    transform. Always >= |mu|/sigma^2."""
    if sigma <= 0.0:
        raise ValidationError("sigma", "must be > 0", sigma)
    if r < 0.0:
        raise ValidationError("r", "must be >= 0", r)
    return math.hypot(math.sqrt(2.0 * r) / sigma, mu / (sigma * sigma))


def exp_sinh_ratio(a: float, b: float, c: float) -> float:
    """e^a * sinh(b) / sinh(c), safe for |b|, |c| far beyond 700.

    Computed as exp(a + |b| - |c|) * sign(b)*(1 - e^{-2|b|}) / (1 - e^{-2|c|})
    * sign(c). Raises OverflowError only if the scaled exponent itself
    overflows.
    """
    if c == 0.0:
        raise ValidationError("c", "sinh(c) denominator must be nonzero", c)
    if b == 0.0:
        return 0.0
    exponent = a + abs(b) - abs(c)
    if exponent > _EXP_MAX:
        raise OverflowError(f"exp_sinh_ratio exponent {exponent:.3g} overflows")
    sign = math.copysign(1.0, b) * math.copysign(1.0, c)
    num = -math.expm1(-2.0 * abs(b))
    den = -math.expm1(-2.0 * abs(c))
    return sign * math.exp(exponent) * num / den


def exp_cosh_ratio(a: float, b: float, c: float) -> float:
    """e^a * cosh(b) / sinh(c), in the same exponent-scaled form."""
    if c == 0.0:
        raise ValidationError("c", "sinh(c) denominator must be nonzero", c)
    exponent = a + abs(b) - abs(c)
    if exponent > _EXP_MAX:
        raise OverflowError(f"exp_cosh_ratio exponent {exponent:.3g} overflows")
    num = 1.0 + math.exp(-2.0 * abs(b))
    den = -math.expm1(-2.0 * abs(c))
    return math.copysign(1.0, c) * math.exp(exponent) * num / den


def exp_over_sinh2(a: float, c: float) -> float:
    """e^a / sinh(c)^2 without ever forming sinh(c)."""
    if c == 0.0:
        raise ValidationError("c", "sinh(c) denominator must be nonzero", c)
    exponent = a - 2.0 * abs(c)
    if exponent > _EXP_MAX:
        raise OverflowError(f"exp_over_sinh2 exponent {exponent:.3g} overflows")
    den = -math.expm1(-2.0 * abs(c))
    return 4.0 * math.exp(exponent) / (den * den)


DEFAULT_SERIES_TOL = 1e-12
DEFAULT_SERIES_NMAX = 4096
# Oscillating sin/cos factors can make an individual term accidentally tiny,
# so the stopping rule demands several consecutive small terms.
_CONSECUTIVE_SMALL = 3


def sum_series(term: Callable[[int], float], tol: float = DEFAULT_SERIES_TOL,
               n_max: int = DEFAULT_SERIES_NMAX) -> SeriesResult:
    """Sum term(1) + term(2) + ... with compensated summation.

    Stops once |term| < tol*(1+|partial sum|) for three consecutive indices;
    reports converged=False if n_max is reached first.
    """
    if tol <= 0.0:
        raise ValidationError("tol", "must be > 0", tol)
    if n_max < 1:
        raise ValidationError("n_max", "must be >= 1", n_max)
    total = 0.0
    comp = 0.0
    small_run = 0
    for n in range(1, n_max + 1):
        t = term(n)
        # Kahan step
        yk = t - comp
        s = total + yk
        comp = (s - total) - yk
        total = s
        if abs(t) < tol * (1.0 + abs(total)):
            small_run += 1
            if small_run >= _CONSECUTIVE_SMALL:
                return SeriesResult(total, n, True)
        else:
            small_run = 0
    return SeriesResult(total, n_max, False)


def _linexp_tail(A: float, B: float, s: float, T: float) -> float:
    """integral_T^inf e^{-s t} (A + B t) dt for s > 0."""
    if T == math.inf:
        return 0.0
    sT = s * T
    if -sT > _EXP_MAX:
        raise OverflowError("tail integral exponent overflows")
    return math.exp(-sT) * (A / s + B * (T / s + 1.0 / (s * s)))


def discounted_linear_exp_integral(A: float, B: float, lam: float, r: float,
                                   T: float = math.inf) -> float:
    """integral_0^T e^{-r t} (A + B t) e^{-lam t} dt in closed form.

    With s = r + lam the value is [A/s + B/s^2] - e^{-sT}[A/s + B(T/s + 1/s^2)]
    and simply A/s + B/s^2 for T = inf. Small |s T| is handled by series
    expansion to avoid the expm1-style cancellation.
    """
    s = r + lam
    if T == math.inf:
        if s <= 0.0:
            raise ValidationError("r+lam", "must be > 0 for an infinite horizon", s)
        return A / s + B / (s * s)
    if T < 0.0:
        raise ValidationError("T", "must be >= 0", T)
    x = s * T
    if s == 0.0:
        return A * T + 0.5 * B * T * T
    if abs(x) < 1e-3:
        # A-part: (1-e^{-x})/s ; B-part: (1-e^{-x}-x e^{-x})/s^2, expanded in x.
        a_part = A * T * (1.0 - x / 2.0 + x * x / 6.0 - x ** 3 / 24.0 + x ** 4 / 120.0)
        b_part = B * T * T * (0.5 - x / 3.0 + x * x / 8.0 - x ** 3 / 30.0 + x ** 4 / 144.0)
        return a_part + b_part
    return (A / s + B / (s * s)) - _linexp_tail(A, B, s, T)


def bracketed_root(f: Callable[[float], float], lo: float, hi: float,
                   x_tol: float = 1e-13, f_tol: float = 1e-12,
                   max_iter: int = 200) -> RootResult:
    """Hybrid bisection/secant root finder that never leaves [lo, hi].

    Requires f(lo)*f(hi) <= 0; raises NoBracket otherwise. Returns once
    |f(root)| <= f_tol or the bracket width falls below x_tol.
    """
    if not lo < hi:
        raise ValidationError("bracket", "need lo < hi", (lo, hi))
    fa = f(lo)
    fb = f(hi)
    if fa == 0.0:
        return RootResult(lo, 0.0, 0)
    if fb == 0.0:
        return RootResult(hi, 0.0, 0)
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise NoBracket(f"no sign change on [{lo!r}, {hi!r}]: f(lo)={fa!r}, f(hi)={fb!r}")
    a, b = lo, hi
    best_x, best_f = (a, fa) if abs(fa) < abs(fb) else (b, fb)
    for it in range(1, max_iter + 1):
        mid = 0.5 * (a + b)
        # Secant candidate on odd iterations, forced bisection on even ones:
        # the bracket provably halves at least every other step while the
        # secant steps keep the endgame superlinear.
        x = mid
        if it % 2 == 1:
            denom = fb - fa
            if denom != 0.0:
                sec = b - fb * (b - a) / denom
                if a < sec < b:
                    x = sec
        fx = f(x)
        if abs(fx) < abs(best_f):
            best_x, best_f = x, fx
        if abs(fx) <= f_tol:
            return RootResult(x, fx, it)
        if math.copysign(1.0, fx) == math.copysign(1.0, fa):
            a, fa = x, fx
        else:
            b, fb = x, fx
        if b - a <= x_tol * (1.0 + abs(a) + abs(b)):
            return RootResult(best_x, best_f, it)
    return RootResult(best_x, best_f, max_iter)
