import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from logiscale import (
    ComputeLawParams,
    DomainError,
    EfficiencyState,
    InfeasibleTargetError,
    StateError,
    burden,
    eval_compute_law,
    logical_efficiency,
    mfu,
    required_burden,
    required_compute,
)

from .oracles import bisect_increasing

positive = st.floats(min_value=1e-6, max_value=1e12)


def test_logical_efficiency_examples():
    assert logical_efficiency(1e18, 1e6, 1e3) == pytest.approx(1e9, rel=1e-15)
    # mpmath: 6e20 / (2.5e7 * 8.64e4)
    assert logical_efficiency(6e20, 2.5e7, 8.64e4) == pytest.approx(277777777.7777778, rel=1e-14)
    assert logical_efficiency(6e20, 2.5e7, 8.64e4) == pytest.approx(2.7778e8, rel=1e-4)
    for bad in [(0, 1, 1), (1, -1, 1), (1, 1, math.nan)]:
        with pytest.raises(DomainError):
            logical_efficiency(*bad)


@given(positive, positive, positive)
def test_burden_round_trip(c, p, t):
    eff = EfficiencyState(logical_efficiency(c, p, t))
    assert burden(c, eff) == pytest.approx(p * t, rel=1e-14)


def test_burden_examples():
    assert burden(1e18, EfficiencyState(1e9)) == pytest.approx(1e9, rel=1e-15)
    c = required_compute(ComputeLawParams(E=0, K=1, kappa=0.5), 0.1)
    assert burden(c, EfficiencyState(1e9)) == pytest.approx(c / 1e9, rel=1e-15)


def test_efficiency_state_validation():
    with pytest.raises(DomainError):
        EfficiencyState(0.0)
    with pytest.raises(DomainError):
        EfficiencyState(1.0, f_peak=-1)


def test_mfu_examples():
    u = mfu(EfficiencyState(1e9, f_peak=2e15), 1e6)
    assert u.value == pytest.approx(0.5, rel=1e-15) and not u.over_unity
    u = mfu(EfficiencyState(2e9, f_peak=2e15), 1e6)
    assert u.value == 1.0 and not u.over_unity
    u = mfu(EfficiencyState(2e9, f_peak=2e15), 2e6)
    assert u.value == 2.0 and u.over_unity
    assert float(u) == 2.0
    with pytest.raises(StateError):
        mfu(EfficiencyState(1e9), 1e6)


@given(positive, positive, positive, positive)
def test_mfu_forms_agree(c, p, t, peak):
    u = mfu(EfficiencyState(logical_efficiency(c, p, t), f_peak=peak), p)
    assert u.value == pytest.approx((c / t) / peak, rel=1e-12)
    assert u.over_unity == (u.value > 1.0)


def test_required_compute_examples(compute_law):
    assert required_compute(ComputeLawParams(E=0, K=1, kappa=0.5), 0.1) == pytest.approx(100, rel=1e-14)
    # mpmath root of E + K C^-kappa = 2
    assert required_compute(compute_law, 2.0) == pytest.approx(1.1000229701874914e35, rel=1e-10)
    oracle = math.exp(
        bisect_increasing(lambda lc: -eval_compute_law(compute_law, math.exp(lc)), -2.0, 0.0, 200.0, tol=1e-15)
    )
    assert required_compute(compute_law, 2.0) == pytest.approx(oracle, rel=1e-9)


def test_required_compute_infeasible():
    law = ComputeLawParams(E=1.5, K=1, kappa=0.5)
    with pytest.raises(InfeasibleTargetError) as info:
        required_compute(law, 1.5)
    assert info.value.floor == 1.5
    assert "E=1.5" in str(info.value)
    with pytest.raises(InfeasibleTargetError):
        required_compute(law, 1.0)
    with pytest.raises(DomainError):
        required_compute(law, math.inf)


def test_required_burden_examples():
    law = ComputeLawParams(E=0, K=1, kappa=0.5)
    rep = required_burden(law, 0.1, EfficiencyState(1e9))
    assert rep.energy == pytest.approx(1e-7, rel=1e-14)
    assert rep.c_required == pytest.approx(rep.energy * 1e9, rel=1e-12)
    half = required_burden(law, 0.05, EfficiencyState(1e9))
    assert half.energy / rep.energy == pytest.approx(2 ** (1 / law.kappa), rel=1e-12)
    faster = required_burden(law, 0.1, EfficiencyState(2e9))
    assert faster.c_required == rep.c_required
    assert faster.energy == pytest.approx(rep.energy / 2, rel=1e-15)


@given(st.floats(min_value=1e-100, max_value=1e100), st.floats(min_value=1e-3, max_value=1e6))
def test_burden_separation(e1, scale):
    law = ComputeLawParams(E=1.69, K=50, kappa=0.063)
    a = required_burden(law, 2.2, EfficiencyState(e1))
    b = required_burden(law, 2.2, EfficiencyState(e1 * scale))
    assert a.c_required == b.c_required
    assert a.energy / b.energy == pytest.approx(scale, rel=1e-12)


def test_round_trips_over_eight_decades():
    law = ComputeLawParams(E=1.69, K=50, kappa=0.063)
    for c in np.geomspace(1e18, 1e26, 33):
        assert required_compute(law, eval_compute_law(law, c)) == pytest.approx(c, rel=1e-9)
    for excess in np.geomspace(0.5, 0.5e-8, 20):
        c = required_compute(law, law.E + excess)
        assert eval_compute_law(law, c) - law.E == pytest.approx(excess, rel=1e-9)


def test_energy_escalates_towards_floor():
    law = ComputeLawParams(E=1.0, K=2.0, kappa=0.3)
    eff = EfficiencyState(1e10)
    targets = law.E + np.geomspace(1.0, 1e-6, 40)
    energies = [required_burden(law, t, eff).energy for t in targets]
    assert all(x < y for x, y in zip(energies, energies[1:]))
    assert energies[-1] > 1e15 * energies[0]
