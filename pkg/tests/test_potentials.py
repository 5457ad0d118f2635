import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from dilute_bose.errors import DomainError
from dilute_bose.potentials import (RadialPotential, cumulative_tail, lj_like_table,
                                    truncate)


def quad_tail(p, s):
    """Oracle: adaptive quadrature of r^2 v(r) on [s, R0], split at the potential's kinks."""
    pts = [x for x in p.breakpoints() if s < x < p.R0]
    edges = [s] + sorted(pts) + [p.R0]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi > lo:
            total += integrate.quad(lambda r: r * r * float(p(r)), lo, hi,
                                    epsabs=0, epsrel=1e-12, limit=400)[0]
    return total


# ---------------------------------------------------------------- eval

def test_hard_core_inside_is_infinite():
    assert math.isinf(RadialPotential.hard_core(1.0)(0.5))


def test_hard_core_beyond_range_is_zero():
    assert RadialPotential.hard_core(1.0)(2.0) == 0.0


def test_step_value_inside():
    a, phi = 1.0, 10.0
    assert RadialPotential.step(6 * phi / a**3, a)(0.5) == pytest.approx(60.0)


def test_negative_radius_rejected():
    with pytest.raises(DomainError):
        RadialPotential.hard_core(1.0)(-0.1)


def test_vectorized_eval_matches_scalar():
    p = RadialPotential.step(3.0, 2.0, 0.5)
    r = np.linspace(0, 3, 31)
    assert np.array_equal(p(r), np.array([p(x) for x in r]))


def test_tabulated_validation():
    with pytest.raises(DomainError):
        RadialPotential.tabulated([0.1, 0.1, 0.3], [1, 1, 0])
    with pytest.raises(DomainError):
        RadialPotential.tabulated([0.1, 0.2, 0.3], [1, -1, 0])
    with pytest.raises(DomainError):
        RadialPotential.tabulated([0.1, 0.2, 0.3], [1, np.nan, 0])


def test_zero_beyond_range_for_all_kinds():
    pots = [RadialPotential.hard_core(1.0), RadialPotential.step(2.0, 1.5),
            lj_like_table(), RadialPotential.attractive_well(0.5, 1.0)]
    for p in pots:
        assert p(p.R0 * 1.0001 + 1e-9) == 0.0


def test_json_round_trip_and_location_in_errors():
    p = lj_like_table(n=50)
    assert RadialPotential.from_dict(p.to_dict()).to_dict() == p.to_dict()
    with pytest.raises(DomainError, match="params"):
        RadialPotential.from_dict({"kind": "step", "R0": 1.0, "params": {"height": 1.0}})
    with pytest.raises(DomainError, match="kind"):
        RadialPotential.from_dict({"kind": "blob", "R0": 1.0, "params": {}})


# ---------------------------------------------------------------- cumulative tail

@pytest.mark.parametrize("s, expected", [(0.0, 20.0), (1.0, 0.0), (0.5, 17.5)])
def test_cumulative_tail_step_examples(s, expected):
    assert cumulative_tail(RadialPotential.step(60.0, 1.0), s) == pytest.approx(expected, abs=1e-12)


def test_cumulative_tail_hard_core_is_infinite():
    assert math.isinf(cumulative_tail(RadialPotential.hard_core(1.0), 0.3))
    assert cumulative_tail(RadialPotential.hard_core(1.0), 1.5) == 0.0


def test_cumulative_tail_negative_s():
    with pytest.raises(DomainError):
        cumulative_tail(RadialPotential.step(1.0, 1.0), -1.0)


@pytest.mark.parametrize("s", [0.6, 0.7, 0.85, 1.0, 1.1])
def test_cumulative_tail_table_matches_quadrature(s):
    p = lj_like_table()
    assert cumulative_tail(p, s) == pytest.approx(quad_tail(p, s), rel=1e-10, abs=1e-12)


# ---------------------------------------------------------------- truncation

def test_truncate_hard_core_gives_explicit_step():
    t = truncate(RadialPotential.hard_core(1.0), 10.0)
    assert t.construction == "step"
    assert t.potential.kind == "step"
    assert t.potential.params["height"] == pytest.approx(60.0)
    assert t.potential.params["width"] == 1.0
    assert t.budget == pytest.approx(20.0)


def test_truncate_small_budget_unchanged():
    p = RadialPotential.step(1.0, 1.0)  # budget 1/3
    t = truncate(p, 5.0)
    assert t.potential == p and t.construction == "unchanged"


def test_truncate_table_cut_radius():
    p = lj_like_table()
    t = truncate(p, 5.0)
    # oracle: quadrature tail at the returned cut radius
    assert quad_tail(p, t.cut_radius_s) == pytest.approx(10.0, abs=1e-8)
    assert t.budget == pytest.approx(10.0, abs=1e-8)


def test_truncate_rejects_bad_phi():
    with pytest.raises(DomainError):
        truncate(RadialPotential.step(1.0, 1.0), 0.0)
    with pytest.raises(DomainError):
        truncate(RadialPotential.step(1.0, 1.0), -2.0)


def test_shell_construction_budget_and_epsilon():
    a, phi = 1.0, 10.0
    t = truncate(RadialPotential.hard_core(a), phi, construction="shell")
    assert t.epsilon == pytest.approx(math.sqrt(a / phi))
    assert t.budget == pytest.approx(2 * phi, rel=1e-12)
    assert t.potential(0.5 * (1 - t.epsilon) * a) == 0.0


def test_cut_radius_monotone_in_phi():
    p = lj_like_table()
    phis = np.linspace(0.5, 80.0, 25)
    cuts = [truncate(p, float(f)).cut_radius_s for f in phis]
    assert all(c2 <= c1 + 1e-12 for c1, c2 in zip(cuts, cuts[1:]))


@settings(max_examples=60, deadline=None)
@given(height=st.floats(0.1, 500.0), width=st.floats(0.1, 3.0), phi=st.floats(0.01, 50.0))
def test_truncation_never_increases_and_saturates(height, width, phi):
    p = RadialPotential.step(height, width)
    t = truncate(p, phi)
    r = np.linspace(0, width * 1.2, 301)
    assert np.all(t.potential(r) <= p(r) + 1e-12)
    assert np.all(t.potential(r) >= 0)
    assert t.budget <= 2 * phi
    if t.construction == "tail":
        assert abs(t.budget - 2 * phi) <= 1e-8 * phi


@settings(max_examples=30, deadline=None)
@given(phi=st.floats(0.05, 80.0))
def test_table_truncation_budget(phi):
    p = lj_like_table(n=120)
    t = truncate(p, phi)
    r = np.linspace(0.5, 1.2, 500)
    assert np.all(t.potential(r) <= p(r))
    if t.construction == "tail":
        assert abs(t.budget - 2 * phi) <= 1e-8 * phi


def test_hard_core_truncation_below_infinity():
    p = RadialPotential.hard_core(2.0)
    t = truncate(p, 3.0)
    r = np.linspace(0, 3, 61)
    assert np.all(t.potential(r) <= p(r))
