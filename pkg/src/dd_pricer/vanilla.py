"""Plain drawdown insurance: buyer pays a continuous premium until the
drawdown time, then receives the insured amount.

Sign convention: ``contract_value`` is the buyer's value,
``(alpha + p/r) xi(y) - p/r``, which is positive when the buyer gains and
equals alpha at y = k. The fair premium solves contract_value = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .drawdown import LaplaceContext, xi
from .errors import AlreadyTriggered, ValidationError
from .types import ContractSpec

BUYER_VALUE = "buyer_value"
PREMIUM_RATE = "premium_rate"
UPFRONT_PRICE = "upfront_price"


@dataclass(frozen=True)
class Quote:
    value: float
    convention: str
    inputs: dict = field(default_factory=dict)


def _require_positive_rate(ctx: LaplaceContext):
    if ctx.market.r <= 0.0:
        raise ValidationError("r", "premium annuity needs r > 0", ctx.market.r)


def contract_value(y: float, premium_rate: float, ctx: LaplaceContext,
                   contract: ContractSpec) -> float:
    """Buyer value of the running contract at drawdown state y, premium p."""
    _require_positive_rate(ctx)
    if not 0.0 <= y < ctx.k:
        raise ValidationError("y", "must lie in [0, k)", y)
    r = ctx.market.r
    annuity = premium_rate / r
    return (contract.alpha + annuity) * xi(y, ctx) - annuity


def fair_premium(y: float, ctx: LaplaceContext, contract: ContractSpec) -> float:
    """Premium rate that zeroes the buyer value: r alpha xi / (1 - xi)."""
    _require_positive_rate(ctx)
    if y >= ctx.k:
        raise AlreadyTriggered("y", "drawdown already at or beyond the insured level", y)
    if y < 0.0:
        raise ValidationError("y", "must be >= 0", y)
    x = xi(y, ctx)
    return ctx.market.r * contract.alpha * x / (1.0 - x)


def upfront_price(y: float, ctx: LaplaceContext, contract: ContractSpec) -> float:
    """Single upfront payment: alpha xi(y), i.e. the buyer value at p = 0."""
    if not 0.0 <= y <= ctx.k:
        raise ValidationError("y", "must lie in [0, k]", y)
    return contract.alpha * xi(y, ctx)


def fair_premium_fixed_term(y: float, term: float, ctx: LaplaceContext,
                            contract: ContractSpec) -> float:
    """Premium rate when payments run over a fixed horizon instead of until
    the drawdown: upfront price spread over the term annuity."""
    _require_positive_rate(ctx)
    if not term > 0.0:
        raise ValidationError("term", "must be > 0", term)
    r = ctx.market.r
    return upfront_price(y, ctx, contract) * r / (-math.expm1(-r * term))


def quote(kind: str, y: float, ctx: LaplaceContext, contract: ContractSpec,
          premium_rate: float | None = None, term: float | None = None) -> Quote:
    """Assemble a Quote (value plus input echo) for the CLI layer."""
    inputs = {"y": y, "k": ctx.k, "r": ctx.market.r, "sigma": ctx.market.sigma,
              "alpha": contract.alpha}
    if kind == BUYER_VALUE:
        if premium_rate is None:
            raise ValidationError("premium_rate", "buyer value needs a premium rate", None)
        inputs["premium_rate"] = premium_rate
        return Quote(contract_value(y, premium_rate, ctx, contract), BUYER_VALUE, inputs)
    if kind == PREMIUM_RATE:
        if term is not None:
            inputs["term"] = term
            return Quote(fair_premium_fixed_term(y, term, ctx, contract), PREMIUM_RATE, inputs)
        return Quote(fair_premium(y, ctx, contract), PREMIUM_RATE, inputs)
    if kind == UPFRONT_PRICE:
        return Quote(upfront_price(y, ctx, contract), UPFRONT_PRICE, inputs)
    raise ValidationError("kind", "unknown quote kind", kind)
