"""Core law types and pure evaluation of the two loss-law forms.

Two forms are supported:

* the separable law ``L(N, D) = E + A * N**-alpha + B * D**-beta_data``
* the compute-only law ``L(C) = E + K * C**-kappa``

Power terms are evaluated as ``exp(-exponent * log(x))`` so that compute
magnitudes near the top of the float range do not overflow an intermediate
product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, RangeError

__all__ = [
    "SeparableLawParams",
    "ComputeLawParams",
    "RunRecord",
    "CostModel",
    "eval_separable",
    "eval_compute_law",
    "kappa_from_exponents",
    "compute_from_nd",
]

# log10 of the largest finite double
_LOG10_FLOAT_MAX = math.log10(1.7976931348623157e308)


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return value


def _require_nonnegative(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0.0:
        raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
    return value


@dataclass(frozen=True)
class SeparableLawParams:
    """Constants of ``L(N, D) = E + A N^-alpha + B D^-beta_data``."""

    E: float
    A: float
    alpha: float
    B: float
    beta_data: float

    def __post_init__(self):
        object.__setattr__(self, "E", _require_nonnegative("E", self.E))
        for name in ("A", "alpha", "B", "beta_data"):
            object.__setattr__(self, name, _require_positive(name, getattr(self, name)))


@dataclass(frozen=True)
class ComputeLawParams:
    """Constants of ``L(C) = E + K C^-kappa``."""

    E: float
    K: float
    kappa: float

    def __post_init__(self):
        object.__setattr__(self, "E", _require_nonnegative("E", self.E))
        object.__setattr__(self, "K", _require_positive("K", self.K))
        object.__setattr__(self, "kappa", _require_positive("kappa", self.kappa))


@dataclass(frozen=True)
class RunRecord:
    """One observed training run.

    ``c_logical`` is optional; when absent, compute can be derived from
    ``n_params`` and ``d_tokens`` through a :class:`CostModel`.
    """

    n_params: float
    d_tokens: float
    loss: float
    c_logical: float | None = None

    def __post_init__(self):
        for name in ("n_params", "d_tokens", "loss"):
            object.__setattr__(self, name, _require_positive(name, getattr(self, name)))
        if self.c_logical is not None:
            object.__setattr__(self, "c_logical", _require_positive("c_logical", self.c_logical))


@dataclass(frozen=True)
class CostModel:
    """Training cost ``C = cost_const * N * D`` (6 for dense pre-training)."""

    cost_const: float = 6.0

    def __post_init__(self):
        object.__setattr__(self, "cost_const", _require_positive("cost_const", self.cost_const))


def _power_term(coef: float, x: float, exponent: float) -> float:
    # coef * x**-exponent without forming x**exponent
    return coef * math.exp(-exponent * math.log(x))


def eval_separable(params: SeparableLawParams, n: float, d: float) -> float:
    """Loss predicted by the separable law at ``n`` parameters and ``d`` tokens."""
    n = _require_positive("n", n)
    d = _require_positive("d", d)
    return (
        params.E
        + _power_term(params.A, n, params.alpha)
        + _power_term(params.B, d, params.beta_data)
    )


def eval_compute_law(params: ComputeLawParams, c: float) -> float:
    """Loss predicted by the compute-only law at logical compute ``c``."""
    c = _require_positive("c", c)
    return params.E + _power_term(params.K, c, params.kappa)


def kappa_from_exponents(alpha: float, beta_data: float) -> float:
    """Compute exponent ``alpha * beta / (alpha + beta)`` of the compute-only law.

    The result is half the harmonic mean of the two exponents, so it is
    always below ``min(alpha, beta_data)``.
    """
    alpha = _require_positive("alpha", alpha)
    beta_data = _require_positive("beta_data", beta_data)
    return alpha * beta_data / (alpha + beta_data)


def compute_from_nd(cost: CostModel, n: float, d: float, *, log10: bool = False) -> float:
    """Logical compute ``cost_const * n * d``.

    Args:
        cost: training cost model.
        n: parameter count.
        d: token count.
        log10: return ``log10(C)`` instead of ``C``. Use this when ``C``
            may exceed the float range (``n = d = 1e200`` gives ~400.778).

    Raises:
        RangeError: ``log10`` is false and ``C`` does not fit in a double.
    """
    n = _require_positive("n", n)
    d = _require_positive("d", d)
    log10_c = math.log10(cost.cost_const) + math.log10(n) + math.log10(d)
    if not math.isfinite(log10_c):
        raise RangeError(f"log10(C) is not finite for n={n!r}, d={d!r}")
    if log10:
        return log10_c
    if log10_c >= _LOG10_FLOAT_MAX:
        raise RangeError(
            f"C = {cost.cost_const!r}*{n!r}*{d!r} overflows a double "
            f"(log10 C = {log10_c:.6g}); request log10=True"
        )
    product = cost.cost_const * n * d
    if math.isfinite(product) and product > 0.0:
        return product
    # direct product underflowed or overflowed at an intermediate step
    return 10.0**log10_c
