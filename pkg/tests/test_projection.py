import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from logiscale import (
    ComputeLawParams,
    DomainError,
    DynamicsParams,
    InfeasibleTargetError,
    compute_trajectory,
    cumulative_compute,
    efficiency_at,
    excess_loss,
    loss_trajectory,
    sample_trajectory,
    time_to_excess,
)
from logiscale.projection import SECONDS_PER_YEAR, annual_budget_from_power, years_from_seconds

from .oracles import quad_cumulative

FIG_RATES = (0.0, 0.25, 0.5, 1.0)


def dyn(beta, kappa=0.063, e0=1.0, p0=1.0, c0=None):
    return DynamicsParams(e0=e0, p0=p0, beta_dbl=beta, kappa=kappa, c0=c0)


def test_params_normalisation():
    d = dyn(0.5, e0=1e9, p0=3e16)
    assert d.c0 == 3e25 and not d.c0_overridden
    d = dyn(0.5, e0=1e9, p0=3e16, c0=7.0)
    assert d.c0 == 7.0 and d.c0_overridden
    with pytest.raises(DomainError):
        dyn(-0.1)
    with pytest.raises(DomainError):
        dyn(0.5, kappa=0)


def test_efficiency_at_examples():
    assert efficiency_at(dyn(0.5, e0=1e9), 2) == pytest.approx(2e9, rel=1e-15)
    assert efficiency_at(dyn(0.0, e0=1e9), 13.7) == 1e9
    assert efficiency_at(dyn(1.0, e0=1e9), 10) == pytest.approx(1.024e12, rel=1e-15)
    with pytest.raises(DomainError):
        efficiency_at(dyn(1.0), -1)


def test_cumulative_compute_examples():
    assert cumulative_compute(dyn(0.0), 7) == 7.0
    # mpmath quadrature of 2**(0.5 s) over [0, 2]
    assert cumulative_compute(dyn(0.5), 2) == pytest.approx(2.8853900817779268, rel=1e-14)
    assert cumulative_compute(dyn(0.5), 2) == pytest.approx(quad_cumulative(1, 1, 0.5, 2), rel=1e-10)
    for b in FIG_RATES:
        assert cumulative_compute(dyn(b), 0) == 0.0


def test_compute_trajectory_examples():
    assert compute_trajectory(dyn(0.5, e0=3, p0=5), 0) == 15.0
    assert compute_trajectory(dyn(0.0), 9.5) == pytest.approx(10.5, rel=1e-15)
    # mpmath: 1 + quad(2**(0.5 s), 0, 20)
    assert compute_trajectory(dyn(0.5), 20) == pytest.approx(2952.754053658819, rel=1e-13)
    assert compute_trajectory(dyn(0.5), 20) == pytest.approx(1 + 1023 / (0.5 * math.log(2)), rel=1e-14)


def test_excess_loss_examples():
    assert excess_loss(dyn(0.5), 0) == 1.0
    # mpmath: 21**-0.063 and (C(20))**-0.063
    assert excess_loss(dyn(0.0), 20) == pytest.approx(0.8254678903629638, rel=1e-13)
    assert excess_loss(dyn(0.5), 20) == pytest.approx(0.6044712945925978, rel=1e-13)
    assert 0.55 <= excess_loss(dyn(0.5), 20) <= 1.02
    with pytest.raises(DomainError):
        excess_loss(dyn(0.5), -0.1)


def test_loss_trajectory_examples():
    law = ComputeLawParams(E=1.69, K=50, kappa=0.063)
    d = dyn(0.5)
    assert loss_trajectory(d, law, 2.5, 0) == 2.5
    # mpmath: 1.69 + 0.81 * X(20)
    assert loss_trajectory(d, law, 2.5, 20) == pytest.approx(2.1796217486200042, rel=1e-13)
    assert loss_trajectory(dyn(1.0), law, 2.5, 500) == pytest.approx(1.69, abs=1e-6)
    with pytest.raises(InfeasibleTargetError):
        loss_trajectory(d, law, 1.69, 1.0)


def test_time_to_excess_examples():
    assert time_to_excess(dyn(0.5), 1.0) == 0.0
    # mpmath closed-form inverse at 0.6045
    assert time_to_excess(dyn(0.5), 0.6045) == pytest.approx(19.997826476273765, rel=1e-12)
    assert time_to_excess(dyn(0.5), 0.6045) == pytest.approx(20, abs=0.01)
    assert time_to_excess(dyn(0.0), 21 ** -0.063) == pytest.approx(20, rel=1e-12)
    for bad in (0.0, -0.5, 1.0001, math.nan):
        with pytest.raises(DomainError):
            time_to_excess(dyn(0.5), bad)


@pytest.mark.parametrize("beta", [0.0, 1e-6, 0.25, 0.5, 1.0, 3.0])
def test_quadrature_agreement(beta):
    d = dyn(beta, e0=2.5e9, p0=4e16)
    for t in [0.1, 1.0, 7.3, 20.0, 50.0]:
        assert cumulative_compute(d, t) == pytest.approx(quad_cumulative(2.5e9, 4e16, beta, t), rel=1e-8)


def test_beta_continuity():
    for t in [0.5, 10.0, 50.0]:
        v0 = cumulative_compute(dyn(0.0), t)
        assert abs(cumulative_compute(dyn(1e-12), t) - v0) <= 1e-9 * v0
        # just either side of the series switch-over
        below = cumulative_compute(dyn(0.99e-8 / (t * math.log(2))), t)
        above = cumulative_compute(dyn(1.01e-8 / (t * math.log(2))), t)
        assert below == pytest.approx(above, rel=1e-9)


@pytest.mark.parametrize("t", [0.5, 1.0, 5.0, 20.0])
def test_figure_ordering(t):
    xs = [excess_loss(dyn(b), t) for b in FIG_RATES]
    assert all(a > b for a, b in zip(xs, xs[1:]))


@given(
    st.floats(min_value=0.0, max_value=3.0),
    st.floats(min_value=0.01, max_value=1.0),
)
def test_monotone_in_time(beta, kappa):
    d = dyn(beta, kappa=kappa)
    ts = np.linspace(0, 50, 41)
    cs = [compute_trajectory(d, t) for t in ts]
    xs = [excess_loss(d, t) for t in ts]
    assert all(a < b for a, b in zip(cs, cs[1:]))
    assert all(a > b for a, b in zip(xs, xs[1:]))
    assert xs[0] == 1.0


@given(
    st.floats(min_value=0.0, max_value=3.0),
    st.floats(min_value=0.01, max_value=1.0),
    st.floats(min_value=0.0, max_value=50.0),
)
def test_inverse_round_trip(beta, kappa, t):
    d = dyn(beta, kappa=kappa)
    assert time_to_excess(d, excess_loss(d, t)) == pytest.approx(t, rel=1e-9, abs=1e-9)


def test_round_trip_with_override():
    d = dyn(0.7, e0=3.0, p0=2.0, c0=11.0)
    for t in [0.0, 0.3, 4.0, 30.0]:
        assert time_to_excess(d, excess_loss(d, t)) == pytest.approx(t, rel=1e-9, abs=1e-12)


def test_sample_trajectory():
    law = ComputeLawParams(E=1.69, K=50, kappa=0.063)
    pts = sample_trajectory(dyn(0.5), [0, 10, 20], law=law, l0=2.5)
    assert [p.t for p in pts] == [0.0, 10.0, 20.0]
    assert pts[0].x_t == 1.0 and pts[0].l_t == 2.5 and pts[0].c_t == 1.0
    assert sample_trajectory(dyn(0.5), [1.0])[0].l_t is None


def test_unit_helpers():
    assert SECONDS_PER_YEAR == 3.15576e7
    assert years_from_seconds(2 * SECONDS_PER_YEAR) == 2.0
    assert annual_budget_from_power(1e6) == pytest.approx(3.15576e13)
