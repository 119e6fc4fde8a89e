"""Drawdown insurance with an early-cancellation right.

The buyer may pay a fee c to walk away before the drawdown hits. The optimal
policy is a threshold rule: cancel the first time the drawdown recovers to a
level theta_star, found from a smooth-pasting equation. The contract value
decomposes into the plain-insurance value plus the value of stopping at the
threshold, and the fair premium is the outer root of that total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .drawdown import LaplaceContext, beta_factor, xi, xi_prime, xi_zero
from .errors import AlreadyTriggered, NoBracket, ValidationError
from .numerics import bracketed_root, xi_exponent
from .types import ContractSpec
from .vanilla import contract_value as vanilla_value
from .vanilla import fair_premium as vanilla_fair_premium

THRESHOLD = "threshold"
NEVER_CANCEL = "never_cancel"

# Offset from the analytic danger points at 0 (coth blowup direction) and
# theta0 (exact-zero reward) when bracketing the pasting root.
_BRACKET_PAD = 1e-9


@dataclass(frozen=True)
class CancellationPolicy:
    kind: str
    theta_star: float | None = None
    theta0: float | None = None
    pasting_residual: float | None = None

    @property
    def cancels(self) -> bool:
        return self.kind == THRESHOLD


def cancellation_reward(y: float, premium_rate: float, ctx: LaplaceContext,
                        contract: ContractSpec) -> float:
    """Payoff of cancelling at drawdown state y: the negative of the buyer
    value minus the fee. Strictly decreasing in y; equals -alpha - fee at k."""
    if not 0.0 <= y <= ctx.k:
        raise ValidationError("y", "must lie in [0, k]", y)
    r = ctx.market.r
    if r <= 0.0:
        raise ValidationError("r", "needs r > 0", r)
    annuity = premium_rate / r
    return annuity - (contract.alpha + annuity) * xi(y, ctx) - contract.fee


def cancellation_reward_prime(y: float, premium_rate: float, ctx: LaplaceContext,
                              contract: ContractSpec) -> float:
    """Analytic slope of the cancellation reward (via the closed-form xi')."""
    return -(contract.alpha + premium_rate / ctx.market.r) * xi_prime(y, ctx)


def pasting_residual(theta: float, premium_rate: float, ctx: LaplaceContext,
                     contract: ContractSpec) -> float:
    """Smooth-pasting defect at a candidate threshold; the optimal threshold
    is its unique root below the reward's zero."""
    if not 0.0 < theta < ctx.k:
        raise ValidationError("theta", "must lie in (0, k)", theta)
    m = ctx.market
    sig2 = m.sigma * m.sigma
    a = ctx.drift / sig2
    big_xi = xi_exponent(m.r, ctx.drift, m.sigma)
    coth = 1.0 / math.tanh(big_xi * (ctx.k - theta))
    reward = cancellation_reward(theta, premium_rate, ctx, contract)
    slope = cancellation_reward_prime(theta, premium_rate, ctx, contract)
    return (a - big_xi * coth) * reward - slope


def never_cancel_bound(ctx: LaplaceContext, contract: ContractSpec) -> float:
    """Premium rate below which cancellation is never worthwhile:
    r (c + alpha xi(0)) / (1 - xi(0))."""
    x0 = xi_zero(ctx)
    return ctx.market.r * (contract.fee + contract.alpha * x0) / (1.0 - x0)


def reward_zero(premium_rate: float, ctx: LaplaceContext, contract: ContractSpec) -> float:
    """Level theta0 where the cancellation reward crosses zero."""
    f = lambda t: cancellation_reward(t, premium_rate, ctx, contract)
    res = bracketed_root(f, 0.0, ctx.k, x_tol=1e-15, f_tol=1e-13)
    return res.root


def optimal_threshold(premium_rate: float, ctx: LaplaceContext,
                      contract: ContractSpec) -> CancellationPolicy:
    """Solve for the optimal cancellation threshold, or report never-cancel.

    Cancellation pays only when the reward at a fresh start is positive,
    i.e. when the premium exceeds r (c + alpha xi(0)) / (1 - xi(0)).
    """
    if ctx.market.r <= 0.0:
        raise ValidationError("r", "needs r > 0", ctx.market.r)
    if cancellation_reward(0.0, premium_rate, ctx, contract) <= 0.0:
        return CancellationPolicy(NEVER_CANCEL)
    theta0 = reward_zero(premium_rate, ctx, contract)
    pad = _BRACKET_PAD * ctx.k
    f = lambda t: pasting_residual(t, premium_rate, ctx, contract)
    try:
        res = bracketed_root(f, pad, theta0 - pad, x_tol=1e-15, f_tol=1e-12)
    except NoBracket as exc:  # pragma: no cover - excluded by the reward test
        raise AssertionError(
            "smooth-pasting root must exist once the fresh-start reward is positive"
        ) from exc
    return CancellationPolicy(THRESHOLD, theta_star=res.root, theta0=theta0,
                              pasting_residual=res.residual)


def stopping_value(y: float, theta: float, premium_rate: float, ctx: LaplaceContext,
                   contract: ContractSpec) -> float:
    """Value of cancelling the first time the drawdown recovers to theta.

    Below the threshold the reward is taken immediately; above it the reward
    at theta is discounted by the recovery-before-drawdown factor (a drawdown
    first leaves nothing, since the reward carries the y < k indicator).
    """
    if not 0.0 < theta < ctx.k:
        raise ValidationError("theta", "must lie in (0, k)", theta)
    if not 0.0 <= y < ctx.k:
        raise ValidationError("y", "must lie in [0, k)", y)
    if y <= theta:
        return cancellation_reward(y, premium_rate, ctx, contract)
    return beta_factor(y, theta, ctx) * cancellation_reward(theta, premium_rate, ctx, contract)


def contract_value_cancellable(y: float, premium_rate: float, ctx: LaplaceContext,
                               contract: ContractSpec) -> float:
    """Buyer value of the cancellable contract: plain-insurance value plus the
    optimally stopped cancellation claim (which is zero under never-cancel)."""
    policy = optimal_threshold(premium_rate, ctx, contract)
    base = vanilla_value(y, premium_rate, ctx, contract)
    if not policy.cancels:
        return base
    return base + stopping_value(y, policy.theta_star, premium_rate, ctx, contract)


def fair_premium_cancellable(y: float, ctx: LaplaceContext, contract: ContractSpec,
                             f_tol: float = 1e-12) -> float:
    """Premium rate zeroing the cancellable contract value at inception.

    The value is continuous and strictly decreasing in the premium, positive
    at the plain-insurance fair premium, so the root is bracketed by doubling
    the upper end until the value goes negative.
    """
    if y >= ctx.k:
        raise AlreadyTriggered("y", "drawdown already at or beyond the insured level", y)
    if not 0.0 < y:
        raise ValidationError("y", "must be > 0", y)
    lo = vanilla_fair_premium(y, ctx, contract)
    value = lambda p: contract_value_cancellable(y, p, ctx, contract)
    hi = max(2.0 * lo, ctx.market.r)
    for _ in range(200):
        if value(hi) < 0.0:
            break
        hi *= 2.0
    else:  # pragma: no cover
        raise NoBracket("cancellable value never went negative while doubling the premium")
    res = bracketed_root(value, lo, hi, x_tol=1e-14, f_tol=f_tol)
    return res.root
