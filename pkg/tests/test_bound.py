import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dilute_bose import ideal_gas
from dilute_bose.bound import (A_RANGE, B_RANGE, BoundReport, ParameterSet, alpha_exact,
                               alpha_exponent, choose_parameters, correction_term, error_budget,
                               gas_parameter, kappa_prime, lower_bound, ordering_ratios)
from dilute_bose.errors import DomainError


def a_for_x(x, beta=10.0, rho=1.0):
    return x / (rho**2 * beta**2.5)


def test_alpha_exact_value():
    assert alpha_exact() == Fraction(2, 2295)
    assert Fraction(2, 2295) < Fraction(3, 17)
    assert alpha_exponent(1e-12) == pytest.approx(2 / 2295, abs=1e-11)
    assert 0.00087 < float(alpha_exact()) < 0.00088


def test_alpha_exponent_domain():
    for bad in (0.0, -1e-3, 2 / 2295):
        with pytest.raises(DomainError):
            alpha_exponent(bad)


def test_exponent_ranges_are_exact_fractions():
    assert A_RANGE == (Fraction(4, 403), Fraction(79, 403))
    assert B_RANGE == (Fraction(2, 403), Fraction(161, 403))


def test_correction_below_critical_density():
    beta = 1.0
    rho = 0.5 * ideal_gas.critical_density(beta)
    assert correction_term(0.01, beta, rho) == 8 * math.pi * 0.01 * rho**2


def test_correction_far_above_critical_density():
    beta = 1.0
    rho = 100 * ideal_gas.critical_density(beta)
    ratio = correction_term(0.01, beta, rho) / (4 * math.pi * 0.01 * rho**2)
    assert abs(ratio - 1) < 0.03  # 1 + 2 rho_c/rho - (rho_c/rho)^2 ~ 1.02


def test_high_T_parameters_follow_power_laws():
    a, beta, rho = a_for_x(1e-4), 10.0, 1.0
    p = choose_parameters(a, beta, rho)
    x = gas_parameter(a, beta, rho)
    assert x == pytest.approx(1e-4)
    assert p.R == pytest.approx(x ** (3 / 403))
    assert p.b == pytest.approx(beta**0.5 * x ** (-121 / 403))
    assert p.kappa * beta / p.s**2 == pytest.approx(x ** (-p.delta))
    assert p.phi == pytest.approx(a * x ** (-4 / 403))
    assert p.epsilon == pytest.approx(p.R / p.s)


def test_low_T_parameters():
    a, beta, rho = 1e-3, 5.0, 0.5
    p = choose_parameters(a, beta, rho, branch="low_T")
    y = a**3 * rho
    assert p.small_x == y and p.kappa == pytest.approx(y ** (1 / 17))
    assert p.b is None and p.phi is None


def test_parameter_domain_errors():
    with pytest.raises(DomainError):
        choose_parameters(-1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        choose_parameters(1e-3, 1.0, 1.0, A=0.5)
    with pytest.raises(DomainError):
        choose_parameters(1e-3, 1.0, 1.0, branch="mid")
    with pytest.raises(DomainError):
        ParameterSet.from_dict({"branch": "mid"})


def test_ordering_strict_at_operating_points():
    for x in (1e-2, 1e-4, 1e-6, 1e-8):
        a = a_for_x(x)
        p = choose_parameters(a, 10.0, 1.0)
        r = ordering_ratios(p, 10.0, a)
        assert all(v > 1 for v in r.values())
        assert kappa_prime(p, a, a) > 0


def test_error_budget_monotone_along_x():
    efs, ratios = [], []
    for x in (1e-2, 1e-4, 1e-6, 1e-8):
        a = a_for_x(x)
        bud = error_budget(choose_parameters(a, 10.0, 1.0), a, 10.0, 1.0)
        efs.append(bud.error_factor)
        ratios.append(bud.ratios(a, 1.0))
    assert all(e2 < e1 for e1, e2 in zip(efs, efs[1:]))
    for k in ("Z1", "Z2", "Z3", "Z4"):
        seq = [r[k] for r in ratios]
        assert all(r2 < r1 for r1, r2 in zip(seq, seq[1:])), k


def test_report_round_trip():
    rep = lower_bound(1e-4, 10.0, 1.0)
    back = BoundReport.from_dict(json.loads(rep.to_json()))
    assert back.to_json() == rep.to_json()


def test_report_consistency():
    rep = lower_bound(1e-4, 10.0, 1.0)
    assert rep.lower_bound == max(rep.branch_values.values())
    assert rep.lower_bound == pytest.approx(rep.f0_term + rep.correction * (1 - rep.error_factor))
    assert rep.crossover_branch in ("high_T", "low_T")


def test_lower_bound_domain():
    with pytest.raises(DomainError):
        lower_bound(1e-3, 1.0, 0.0)
    with pytest.raises(DomainError):
        lower_bound(1e-3, 1.0, 1.0, delta=0.1)


@settings(max_examples=40, deadline=None)
@given(a=st.floats(1e-6, 1e-1), beta=st.floats(0.1, 20.0), rho=st.floats(1e-3, 5.0))
def test_correction_between_ground_state_and_twice(a, beta, rho):
    c = correction_term(a, beta, rho)
    g = 4 * math.pi * a * rho**2
    assert g * (1 - 1e-12) <= c <= 2 * g * (1 + 1e-12)


@settings(max_examples=40, deadline=None)
@given(a=st.floats(1e-6, 1e-1), beta=st.floats(0.1, 20.0), rho=st.floats(1e-3, 5.0))
def test_bound_never_below_either_branch(a, beta, rho):
    rep = lower_bound(a, beta, rho)
    for v in rep.branch_values.values():
        assert rep.lower_bound >= v or not math.isfinite(v)


@settings(max_examples=30, deadline=None)
@given(x1=st.floats(-9.0, -1.0), x2=st.floats(-9.0, -1.0))
def test_headline_decreases_with_x(x1, x2):
    lo, hi = sorted((x1, x2))
    if hi - lo < 1e-6:
        return
    pa = choose_parameters(a_for_x(10**lo), 10.0, 1.0)
    pb = choose_parameters(a_for_x(10**hi), 10.0, 1.0)
    ha = error_budget(pa, a_for_x(10**lo), 10.0, 1.0).headline
    hb = error_budget(pb, a_for_x(10**hi), 10.0, 1.0).headline
    assert ha < hb


def test_correction_second_derivative_jump():
    a, beta = 0.01, 1.0
    rc = ideal_gas.critical_density(beta)
    h = 1e-4 * rc
    d2 = lambda r0, sgn: (correction_term(a, beta, r0) - 2 * correction_term(a, beta, r0 + sgn * h)
                          + correction_term(a, beta, r0 + 2 * sgn * h)) / h**2
    assert d2(rc, +1) - d2(rc, -1) == pytest.approx(-8 * math.pi * a, rel=1e-6)
    assert correction_term(a, beta, rc + 1e-12) == pytest.approx(correction_term(a, beta, rc))


@settings(max_examples=40, deadline=None)
@given(a=st.floats(1e-6, 1e-1), beta=st.floats(0.1, 20.0), rho=st.floats(1e-3, 5.0))
def test_branch_values_below_idealized_bound(a, beta, rho):
    rep = lower_bound(a, beta, rho)
    for v in rep.branch_values.values():
        assert v <= rep.f0_term + rep.correction + 1e-12 * abs(rep.f0_term)
