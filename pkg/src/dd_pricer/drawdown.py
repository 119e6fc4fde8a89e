"""Closed forms tied to the drawdown process alone.

Everything here is a function of the initial drawdown ``y``, the barrier
width ``k`` and the market. The central object is the conditional Laplace
transform ``xi(y) = E[e^{-r tau_D(k)} | D_0 = y]``: the discounted value of
one currency unit paid at the drawdown time. The two-sided factor ``beta``
discounts a recovery of the drawdown to a lower level before the barrier is
hit, and the expected event times live under the physical measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .numerics import exp_cosh_ratio, exp_sinh_ratio, xi_exponent
from .types import MarketParams

RISK_NEUTRAL = "risk_neutral"
PHYSICAL = "physical"

# Below this drift magnitude the sinh ratios lose all precision and the
# analytic driftless limits are used instead.
DRIFTLESS_EPS = 1e-8


@dataclass(frozen=True)
class LaplaceContext:
    """Market, barrier width and measure bundle for drawdown-law calls."""

    market: MarketParams
    k: float
    measure: str = RISK_NEUTRAL

    def __post_init__(self):
        if self.k <= 0.0 or not math.isfinite(self.k):
            raise ValidationError("k", "must be finite and > 0", self.k)
        if self.measure not in (RISK_NEUTRAL, PHYSICAL):
            raise ValidationError("measure", "must be risk_neutral or physical", self.measure)
        if self.measure == PHYSICAL and self.market.nu is None:
            raise ValidationError("nu", "physical measure requires nu", None)

    @property
    def drift(self) -> float:
        return self.market.mu if self.measure == RISK_NEUTRAL else self.market.mu_tilde

    def physical(self) -> "LaplaceContext":
        return LaplaceContext(self.market, self.k, PHYSICAL)


def _check_y(y: float, k: float, upper_open: bool):
    if not 0.0 <= y <= k or (upper_open and y == k):
        bound = "[0, k)" if upper_open else "[0, k]"
        raise ValidationError("y", f"must lie in {bound}", y)


def xi_zero(ctx: LaplaceContext) -> float:
    """xi at a fresh start (drawdown zero), in overflow-free form."""
    m = ctx.market
    a = ctx.drift / (m.sigma * m.sigma)
    big_xi = xi_exponent(m.r, ctx.drift, m.sigma)
    if big_xi == 0.0:  # r = 0 and zero drift: the drawdown time is a.s. finite
        return 1.0
    k = ctx.k
    den = (big_xi - a) + (big_xi + a) * math.exp(-2.0 * big_xi * k)
    return 2.0 * big_xi * math.exp(-(a + big_xi) * k) / den


def xi(y: float, ctx: LaplaceContext) -> float:
    """Conditional Laplace transform of the drawdown time, E[e^{-r tau_D(k)} | D_0=y].

    Two exponent-scaled sinh ratios plus the fresh-start value; xi(k) = 1.
    """
    _check_y(y, ctx.k, upper_open=False)
    m = ctx.market
    sig2 = m.sigma * m.sigma
    a = ctx.drift / sig2
    big_xi = xi_exponent(m.r, ctx.drift, m.sigma)
    if big_xi == 0.0:
        return 1.0
    k = ctx.k
    if y == k:
        return 1.0
    first = exp_sinh_ratio(a * (y - k), big_xi * y, big_xi * k) if y > 0.0 else 0.0
    second = exp_sinh_ratio(a * y, big_xi * (k - y), big_xi * k) * xi_zero(ctx)
    return first + second


def xi_prime(y: float, ctx: LaplaceContext) -> float:
    """Analytic derivative of xi (no finite differences)."""
    _check_y(y, ctx.k, upper_open=False)
    m = ctx.market
    sig2 = m.sigma * m.sigma
    a = ctx.drift / sig2
    big_xi = xi_exponent(m.r, ctx.drift, m.sigma)
    if big_xi == 0.0:
        return 0.0
    k = ctx.k
    cosh_first = exp_cosh_ratio(a * (y - k), big_xi * y, big_xi * k)
    cosh_second = exp_cosh_ratio(a * y, big_xi * (k - y), big_xi * k)
    return a * xi(y, ctx) + big_xi * (cosh_first - xi_zero(ctx) * cosh_second)


def beta_factor(y: float, theta: float, ctx: LaplaceContext) -> float:
    """Discount factor for recovery to drawdown level theta before a k-drawdown,
    E[e^{-r tau^-(theta)} 1{tau^-(theta) < tau_D(k)} | D_0 = y]."""
    k = ctx.k
    if not 0.0 < theta <= y < k:
        raise ValidationError("theta", "need 0 < theta <= y < k", (theta, y))
    m = ctx.market
    a = ctx.drift / (m.sigma * m.sigma)
    big_xi = xi_exponent(m.r, ctx.drift, m.sigma)
    if big_xi == 0.0:
        return 1.0
    return exp_sinh_ratio(a * (y - theta), big_xi * (k - y), big_xi * (k - theta))


def lambda_diag(y: float, ctx: LaplaceContext) -> float:
    """Diagnostic ratio e^{-mu y/sigma^2} xi(y) / sinh(Xi (k - y)).

    Only exists to power the monotonicity property tests; strictly
    increasing on [0, k).
    """
    _check_y(y, ctx.k, upper_open=True)
    m = ctx.market
    a = ctx.drift / (m.sigma * m.sigma)
    big_xi = xi_exponent(m.r, ctx.drift, m.sigma)
    if big_xi == 0.0:
        raise ValidationError("r", "diagnostic needs r > 0 or nonzero drift", m.r)
    c = big_xi * (ctx.k - y)
    scale = 2.0 * math.exp(-a * y - c) / (-math.expm1(-2.0 * c))
    return xi(y, ctx) * scale


def rho_tau(y: float, k: float, ctx: LaplaceContext) -> float:
    """Probability that the log price rises by y before it falls by k - y,
    under the physical measure. Equals (k - y)/k in the driftless limit."""
    if ctx.measure != PHYSICAL:
        raise ValidationError("measure", "rho_tau is a physical-measure quantity", ctx.measure)
    if not 0.0 <= y <= k:
        raise ValidationError("y", "must lie in [0, k]", y)
    return _rho_tau_raw(y, k, ctx.drift, ctx.market.sigma)


def _rho_tau_raw(y: float, k: float, drift: float, sigma: float) -> float:
    if abs(drift) < DRIFTLESS_EPS:
        return (k - y) / k
    u = 2.0 * drift / (sigma * sigma)
    if u > 0.0:
        return math.expm1(-u * (k - y)) / math.expm1(-u * k)
    v = -u
    return math.exp(-v * y) * math.expm1(-v * (k - y)) / math.expm1(-v * k)


def _exp_minus_x_minus_one(x: float) -> float:
    """e^x - x - 1 with the small-|x| cancellation handled by series."""
    if abs(x) < 1e-3:
        return 0.5 * x * x * (1.0 + x / 3.0 + x * x / 12.0 + x ** 3 / 60.0 + x ** 4 / 360.0)
    return math.expm1(x) - x


def expected_drawdown_time(y: float, ctx: LaplaceContext, as_printed: bool = False) -> float:
    """Expected years until a drawdown of size k, under the physical measure.

    The fresh-start constant uses the dimensionally consistent denominator
    2 mu~^2 / sigma^2 by default (driftless limit k^2/sigma^2, confirmed by
    the Monte Carlo oracle). ``as_printed=True`` switches to the
    (2 mu~/sigma^2)^2 variant for comparison; its driftless limit k^2/2
    carries no time unit.
    """
    if ctx.measure != PHYSICAL:
        raise ValidationError("measure", "expected_drawdown_time is a physical-measure quantity", ctx.measure)
    k = ctx.k
    _check_y(y, k, upper_open=False)
    drift = ctx.drift
    sigma = ctx.market.sigma
    sig2 = sigma * sigma
    if abs(drift) < DRIFTLESS_EPS:
        if as_printed:
            return y * (k - y) / sig2 + ((k - y) / k) * (0.5 * k * k)
        return (k * k - y * y) / sig2
    u = 2.0 * drift / sig2
    rho_up = _rho_tau_raw(y, k, drift, sigma)
    # The down-exit probability e^{u(y-k)} rho(k-y; k) equals 1 - rho_up
    # identically; the complement form cannot overflow for strong drift.
    two_sided = (y * rho_up + (y - k) * (1.0 - rho_up)) / drift
    numer = _exp_minus_x_minus_one(u * k)
    denom = u * u if as_printed else 2.0 * drift * drift / sig2
    return two_sided + rho_up * numer / denom


def expected_termination_time(y: float, theta_star: float, ctx: LaplaceContext) -> float:
    """Expected years until the drawdown recovers to theta_star or reaches k,
    whichever happens first, under the physical measure."""
    if ctx.measure != PHYSICAL:
        raise ValidationError("measure", "expected_termination_time is a physical-measure quantity", ctx.measure)
    k = ctx.k
    if not 0.0 < theta_star < y < k:
        raise ValidationError("theta_star", "need 0 < theta_star < y < k", (theta_star, y))
    drift = ctx.drift
    sigma = ctx.market.sigma
    sig2 = sigma * sigma
    if abs(drift) < DRIFTLESS_EPS:
        return (y - theta_star) * (k - y) / sig2
    width = k - theta_star
    rho_up = _rho_tau_raw(y - theta_star, width, drift, sigma)
    return ((y - theta_star) * rho_up + (y - k) * (1.0 - rho_up)) / drift
