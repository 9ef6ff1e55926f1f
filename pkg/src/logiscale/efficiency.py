"""Logical compute versus physical burden.

Logical efficiency is logical FLOPs delivered per joule, so the energy
needed for a compute target is ``C / e_logical``. Energy (joules) is the
single burden unit here; power and time are multiplied as soon as they
cross the API.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InfeasibleTargetError, RangeError, StateError
from .lawcore import ComputeLawParams, _require_positive

__all__ = [
    "EfficiencyState",
    "BurdenReport",
    "Utilization",
    "logical_efficiency",
    "burden",
    "mfu",
    "required_compute",
    "required_burden",
]


@dataclass(frozen=True)
class EfficiencyState:
    """Logical FLOPs per joule, plus an optional vendor peak in FLOP/s."""

    e_logical: float
    f_peak: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "e_logical", _require_positive("e_logical", self.e_logical))
        if self.f_peak is not None:
            object.__setattr__(self, "f_peak", _require_positive("f_peak", self.f_peak))


@dataclass(frozen=True)
class BurdenReport:
    c_required: float
    energy: float
    l_target: float


@dataclass(frozen=True)
class Utilization:
    """MFU value; ``over_unity`` flags a result above the vendor peak.

    Over-unity is reported rather than raised: vendor peaks depend on
    precision and reporting conventions and are not a hard ceiling.
    """

    value: float
    over_unity: bool

    def __float__(self) -> float:
        return self.value


def logical_efficiency(c_logical: float, power: float, time: float) -> float:
    """Logical FLOPs per joule for ``c_logical`` delivered at ``power`` W over ``time`` s."""
    c_logical = _require_positive("c_logical", c_logical)
    energy = _require_positive("power", power) * _require_positive("time", time)
    return c_logical / energy


def burden(c_logical: float, eff: EfficiencyState) -> float:
    """Energy in joules needed to realise ``c_logical``."""
    return _require_positive("c_logical", c_logical) / eff.e_logical


def mfu(eff: EfficiencyState, power: float) -> Utilization:
    """Model FLOPs utilisation ``e_logical * power / f_peak``.

    Raises:
        StateError: the state carries no vendor peak.
    """
    if eff.f_peak is None:
        raise StateError("mfu needs an EfficiencyState with f_peak set")
    value = eff.e_logical * _require_positive("power", power) / eff.f_peak
    return Utilization(value=value, over_unity=value > 1.0)


def required_compute(law: ComputeLawParams, l_target: float) -> float:
    """Logical compute at which the compute-only law reaches ``l_target``.

    Exact inverse of :func:`~logiscale.lawcore.eval_compute_law`:
    ``(K / (l_target - E)) ** (1 / kappa)``.

    Raises:
        InfeasibleTargetError: ``l_target <= E``.
        RangeError: the required compute overflows a double.
    """
    l_target = float(l_target)
    if not math.isfinite(l_target):
        raise DomainError(f"l_target must be finite, got {l_target!r}")
    if l_target <= law.E:
        raise InfeasibleTargetError(l_target, law.E)
    log_c = (math.log(law.K) - math.log(l_target - law.E)) / law.kappa
    try:
        return math.exp(log_c)
    except OverflowError:
        raise RangeError(
            f"required compute exceeds the float range (log10 C = {log_c / math.log(10):.6g})"
        ) from None


def required_burden(law: ComputeLawParams, l_target: float, eff: EfficiencyState) -> BurdenReport:
    c_required = required_compute(law, l_target)
    return BurdenReport(
        c_required=c_required,
        energy=c_required / eff.e_logical,
        l_target=float(l_target),
    )
