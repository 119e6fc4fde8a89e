"""Domain records and input validation.

All internal math lives in log-price space. Price-level inputs are converted
once at the boundary (``initial_state_from_log_levels``); everything
downstream works with the drawdown/drawup pair ``(y, z)`` and the barrier
width ``k``, all in log units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError

PERPETUAL = math.inf


def _require_finite(field: str, value: float) -> float:
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        raise ValidationError(field, "must be finite", value)
    return value


@dataclass(frozen=True)
class MarketParams:
    """Risk-neutral market description.

    r: risk-free rate per year (>= 0)
    sigma: volatility per sqrt-year (> 0)
    nu: physical growth rate per year, only needed for physical-measure
        quantities (expected event times, hit probabilities).

    The log-drifts are derived, never stored: ``mu = r - sigma^2/2`` under
    the pricing measure and ``mu_tilde = nu - sigma^2/2`` under the
    physical measure.
    """

    r: float
    sigma: float
    nu: float | None = None

    def __post_init__(self):
        _require_finite("r", self.r)
        _require_finite("sigma", self.sigma)
        if self.sigma <= 0.0:
            raise ValidationError("sigma", "must be > 0", self.sigma)
        if self.r < 0.0:
            raise ValidationError("r", "must be >= 0", self.r)
        if self.nu is not None:
            _require_finite("nu", self.nu)

    @property
    def mu(self) -> float:
        return self.r - 0.5 * self.sigma * self.sigma

    @property
    def mu_tilde(self) -> float:
        if self.nu is None:
            raise ValidationError("nu", "physical growth rate required for physical-measure quantities", None)
        return self.nu - 0.5 * self.sigma * self.sigma


@dataclass(frozen=True)
class DrawdownState:
    """Current drawdown ``y`` and drawup ``z`` relative to barrier width ``k``.

    ``k = log K`` where ``K`` is the relative drawdown factor. Joint-law
    operations additionally require ``y + z < k``; that is checked at the
    call sites that need it, not here.
    """

    y: float
    k: float
    z: float = 0.0

    def __post_init__(self):
        _require_finite("y", self.y)
        _require_finite("z", self.z)
        _require_finite("k", self.k)
        if self.k <= 0.0:
            raise ValidationError("k", "must be > 0", self.k)
        if not 0.0 <= self.y < self.k:
            raise ValidationError("y", "y must be >= 0 and < k", self.y)
        if not 0.0 <= self.z < self.k:
            raise ValidationError("z", "z must be >= 0 and < k", self.z)

    def require_joint(self) -> "DrawdownState":
        """Check the extra constraint needed by joint drawdown/drawup laws."""
        if self.y + self.z >= self.k:
            raise ValidationError("y+z", "joint-law computations require y + z < k", self.y + self.z)
        return self


@dataclass(frozen=True)
class ContractSpec:
    """Contract economics: notional, cancellation fee, maturity, default risk.

    maturity: years, or ``math.inf`` (PERPETUAL).
    lam: default intensity per year; 0 means no default risk.
    premium_mode: one of "continuous", "periodic", "upfront", "fixed_term".
      "periodic" needs ``periods >= 1`` and a finite maturity;
      "fixed_term" needs ``fixed_term > 0``.
    """

    alpha: float
    fee: float = 0.0
    maturity: float = PERPETUAL
    lam: float = 0.0
    premium_mode: str = "continuous"
    periods: int | None = None
    fixed_term: float | None = None

    def __post_init__(self):
        _require_finite("alpha", self.alpha)
        _require_finite("fee", self.fee)
        if self.alpha <= 0.0:
            raise ValidationError("alpha", "must be > 0", self.alpha)
        if self.fee < 0.0:
            raise ValidationError("fee", "must be >= 0", self.fee)
        if self.lam < 0.0 or math.isnan(self.lam):
            raise ValidationError("lambda", "must be >= 0", self.lam)
        if not self.maturity > 0.0:
            raise ValidationError("maturity", "must be > 0 (use math.inf for perpetual)", self.maturity)
        if self.premium_mode not in ("continuous", "periodic", "upfront", "fixed_term"):
            raise ValidationError("premium_mode", "unknown premium mode", self.premium_mode)
        if self.premium_mode == "periodic":
            if self.periods is None or self.periods < 1:
                raise ValidationError("periods", "periodic premiums need periods >= 1", self.periods)
            if math.isinf(self.maturity):
                raise ValidationError("maturity", "periodic premiums need a finite maturity", self.maturity)
        if self.premium_mode == "fixed_term":
            if self.fixed_term is None or not self.fixed_term > 0.0:
                raise ValidationError("fixed_term", "fixed-term premiums need fixed_term > 0", self.fixed_term)


def validate(market: MarketParams, state: DrawdownState, contract: ContractSpec):
    """Return the triple unchanged iff every type invariant holds.

    Construction already enforces the invariants, so this re-checks types
    (guarding against callers that bypass the dataclasses) and is pure and
    idempotent.
    """
    if not isinstance(market, MarketParams):
        raise ValidationError("market", "expected MarketParams", market)
    if not isinstance(state, DrawdownState):
        raise ValidationError("state", "expected DrawdownState", state)
    if not isinstance(contract, ContractSpec):
        raise ValidationError("contract", "expected ContractSpec", contract)
    # Re-run the dataclass checks in case someone used object.__setattr__.
    MarketParams(market.r, market.sigma, market.nu)
    DrawdownState(state.y, state.k, state.z)
    ContractSpec(contract.alpha, contract.fee, contract.maturity, contract.lam,
                 contract.premium_mode, contract.periods, contract.fixed_term)
    return market, state, contract


def initial_state_from_log_levels(x_max: float, x_min: float, x: float, k: float) -> DrawdownState:
    """Build a DrawdownState from recorded log-price levels.

    ``x_max``/``x_min`` are the running maximum/minimum of the log price over
    the reference period and ``x`` the current log price; the initial
    drawdown is ``y = x_max - x`` and the initial drawup ``z = x - x_min``.
    """
    for name, v in (("x_max", x_max), ("x_min", x_min), ("x", x)):
        _require_finite(name, v)
    if x > x_max:
        raise ValidationError("x", "current log-price above recorded maximum", x)
    if x < x_min:
        raise ValidationError("x", "current log-price below recorded minimum", x)
    return DrawdownState(y=x_max - x, k=k, z=x - x_min)
