"""Compute-optimal split of a training budget and the induced compute-only law.

Minimising ``A N^-alpha + B D^-beta`` subject to ``C = k N D`` has the
stationary point

    N* = G * C**(beta / (alpha + beta)),   G = (alpha A / (beta B k**beta))**(1 / (alpha + beta))
    D* = C / (k N*)

and at that point the data term equals ``alpha / beta`` times the parameter
term, so the excess loss collapses to ``K * C**-kappa`` with

    K = A * (alpha + beta) / beta * G**-alpha.

Everything is evaluated in natural-log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .lawcore import (
    ComputeLawParams,
    CostModel,
    SeparableLawParams,
    _require_positive,
    kappa_from_exponents,
)

__all__ = ["OptimalSplit", "optimal_allocation", "derive_compute_law"]


@dataclass(frozen=True)
class OptimalSplit:
    n_star: float
    d_star: float
    loss_at_optimum: float


def _log_g(params: SeparableLawParams, cost: CostModel) -> float:
    a, b = params.alpha, params.beta_data
    return (
        math.log(a) + math.log(params.A) - math.log(b) - math.log(params.B)
        - b * math.log(cost.cost_const)
    ) / (a + b)


def optimal_allocation(
    params: SeparableLawParams, cost: CostModel, c: float
) -> OptimalSplit:
    """Split budget ``c`` into the loss-minimising ``(N*, D*)``.

    Raises:
        DomainError: ``c`` is not finite and positive.
    """
    c = _require_positive("c", c)
    a, b = params.alpha, params.beta_data
    log_c = math.log(c)
    log_n = _log_g(params, cost) + b / (a + b) * log_c
    log_d = log_c - math.log(cost.cost_const) - log_n
    excess = params.A * math.exp(-a * log_n) + params.B * math.exp(-b * log_d)
    return OptimalSplit(
        n_star=math.exp(log_n),
        d_star=math.exp(log_d),
        loss_at_optimum=params.E + excess,
    )


def derive_compute_law(params: SeparableLawParams, cost: CostModel = CostModel()) -> ComputeLawParams:
    """Compute-only law traced out by the optimal split of every budget."""
    a, b = params.alpha, params.beta_data
    log_k = math.log(params.A) + math.log((a + b) / b) - a * _log_g(params, cost)
    return ComputeLawParams(E=params.E, K=math.exp(log_k), kappa=kappa_from_exponents(a, b))
