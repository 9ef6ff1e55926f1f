"""Time-indexed efficiency doubling.

Efficiency grows as ``e0 * 2**(beta_dbl * t)`` with ``t`` in years. With a
constant annual energy budget ``p0`` (joules per year) the logical compute
accumulated by year ``t`` is

    delta_c(t) = e0 * p0 * (2**(beta_dbl * t) - 1) / (beta_dbl * ln 2)

which tends to ``e0 * p0 * t`` as ``beta_dbl -> 0``. The trajectory is
``c(t) = c0 + delta_c(t)`` and the relative excess loss is
``x(t) = (c(t) / c0) ** -kappa``.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass, field

from .errors import DomainError, InfeasibleTargetError, RangeError
from .lawcore import ComputeLawParams, _require_nonnegative, _require_positive

__all__ = [
    "SECONDS_PER_YEAR",
    "DynamicsParams",
    "ProjectionPoint",
    "efficiency_at",
    "cumulative_compute",
    "compute_trajectory",
    "excess_loss",
    "loss_trajectory",
    "time_to_excess",
    "sample_trajectory",
    "years_from_seconds",
    "annual_budget_from_power",
]

# Julian year
SECONDS_PER_YEAR = 3.15576e7
_LN2 = math.log(2.0)
# below this growth exponent the closed form is replaced by its series
_SERIES_THRESHOLD = 1e-8


def years_from_seconds(seconds: float) -> float:
    return float(seconds) / SECONDS_PER_YEAR


def annual_budget_from_power(watts: float) -> float:
    """Joules per year delivered by a constant ``watts`` draw."""
    return _require_positive("watts", watts) * SECONDS_PER_YEAR


@dataclass(frozen=True)
class DynamicsParams:
    """Constants of the efficiency-doubling model.

    ``c0`` defaults to ``e0 * p0``. Passing it explicitly overrides that
    normalisation; ``c0_overridden`` records that this happened.
    """

    e0: float
    p0: float
    beta_dbl: float
    kappa: float
    c0: float | None = None
    c0_overridden: bool = field(init=False, default=False)

    def __post_init__(self):
        object.__setattr__(self, "e0", _require_positive("e0", self.e0))
        object.__setattr__(self, "p0", _require_positive("p0", self.p0))
        object.__setattr__(self, "beta_dbl", _require_nonnegative("beta_dbl", self.beta_dbl))
        object.__setattr__(self, "kappa", _require_positive("kappa", self.kappa))
        if self.c0 is None:
            c0 = self.e0 * self.p0
            if not math.isfinite(c0) or c0 <= 0.0:
                raise RangeError(f"e0*p0 = {c0!r} is not a usable compute normalisation")
            object.__setattr__(self, "c0", c0)
        else:
            object.__setattr__(self, "c0", _require_positive("c0", self.c0))
            object.__setattr__(self, "c0_overridden", True)


@dataclass(frozen=True)
class ProjectionPoint:
    t: float
    c_t: float
    x_t: float
    l_t: float | None = None


def _check_time(t: float) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"t must be finite and >= 0 years, got {t!r}")
    return t


def _growth_integral(beta_dbl: float, t: float) -> float:
    """``(2**(beta_dbl t) - 1) / (beta_dbl ln 2)``, continuous down to beta_dbl = 0."""
    if beta_dbl == 0.0:
        return t
    x = beta_dbl * t * _LN2
    if x < _SERIES_THRESHOLD:
        return t * (1.0 + x / 2.0 + x * x / 6.0)
    try:
        return math.expm1(x) / (beta_dbl * _LN2)
    except OverflowError:
        raise RangeError(
            f"2**({beta_dbl!r} * {t!r}) overflows; shorten the horizon"
        ) from None


def efficiency_at(dyn: DynamicsParams, t: float) -> float:
    t = _check_time(t)
    try:
        return dyn.e0 * math.exp(dyn.beta_dbl * t * _LN2)
    except OverflowError:
        raise RangeError(f"efficiency overflows at t={t!r}") from None


def cumulative_compute(dyn: DynamicsParams, t: float) -> float:
    """Logical compute added between year 0 and year ``t``."""
    t = _check_time(t)
    return dyn.e0 * dyn.p0 * _growth_integral(dyn.beta_dbl, t)


def compute_trajectory(dyn: DynamicsParams, t: float) -> float:
    """Total logical compute ``c0 + delta_c(t)`` available at year ``t``."""
    return dyn.c0 + cumulative_compute(dyn, t)


def excess_loss(dyn: DynamicsParams, t: float) -> float:
    """Relative excess loss ``(L(t) - E) / (L(0) - E)`` at year ``t``.

    Equals 1 at ``t = 0`` and ``(1 + t) ** -kappa`` when ``beta_dbl = 0``
    under the default normalisation.
    """
    growth = cumulative_compute(dyn, t) / dyn.c0
    return math.exp(-dyn.kappa * math.log1p(growth))


def loss_trajectory(dyn: DynamicsParams, law: ComputeLawParams, l0: float, t: float) -> float:
    """Absolute loss at year ``t`` given the loss ``l0`` at year 0.

    Raises:
        InfeasibleTargetError: ``l0`` is not above the floor ``law.E``.
    """
    l0 = float(l0)
    if not math.isfinite(l0) or l0 <= law.E:
        raise InfeasibleTargetError(l0, law.E)
    return law.E + (l0 - law.E) * excess_loss(dyn, t)


def time_to_excess(dyn: DynamicsParams, x_target: float) -> float:
    """Years until the relative excess loss falls to ``x_target``.

    Closed-form inverse of :func:`excess_loss`.

    Raises:
        DomainError: ``x_target`` outside ``(0, 1]``.
    """
    x_target = float(x_target)
    if not (0.0 < x_target <= 1.0):
        raise DomainError(f"x_target must lie in (0, 1], got {x_target!r}")
    try:
        # compute growth factor minus one, in units of c0
        growth = math.expm1(-math.log(x_target) / dyn.kappa)
    except OverflowError:
        raise RangeError(f"x_target={x_target!r} needs more compute than a double holds") from None
    # same quantity in units of e0*p0 (one year of baseline compute)
    base_years = growth * dyn.c0 / (dyn.e0 * dyn.p0)
    if dyn.beta_dbl == 0.0:
        return base_years
    y = dyn.beta_dbl * _LN2 * base_years
    if abs(y) < _SERIES_THRESHOLD:
        # log1p(y)/rate, without dividing by a tiny or subnormal rate
        return base_years * (1.0 - y / 2.0 + y * y / 3.0)
    return math.log1p(y) / (dyn.beta_dbl * _LN2)


def sample_trajectory(
    dyn: DynamicsParams,
    times: Iterable[float],
    law: ComputeLawParams | None = None,
    l0: float | None = None,
) -> list[ProjectionPoint]:
    """Evaluate the trajectory at each of ``times``.

    ``l_t`` is filled in only when both ``law`` and ``l0`` are given.
    """
    with_loss = law is not None and l0 is not None
    points = []
    for t in times:
        points.append(
            ProjectionPoint(
                t=float(t),
                c_t=compute_trajectory(dyn, t),
                x_t=excess_loss(dyn, t),
                l_t=loss_trajectory(dyn, law, l0, t) if with_loss else None,
            )
        )
    return points
