import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dilute_bose.errors import DomainError, NumericalError
from dilute_bose.ideal_gas import (ZETA_3_2, ZETA_5_2, bose_fn, bose_fn_of_c, condensate_density,
                                   critical_density, critical_density_quad, density_at, f0,
                                   f0_quad, free_energy_functional, ideal_gas_point, mu0,
                                   rho_derivative_jumps, specific_heat,
                                   third_derivative_jump_exact, zeta_bracket)

mp.mp.dps = 30


def g_oracle(s, z):
    return float(mp.polylog(s, z))


def f0_oracle(beta, rho):
    """Independent mpmath chain: findroot for mu, polylog for the pressure."""
    beta, rho = mp.mpf(beta), mp.mpf(rho)
    lam = (4 * mp.pi * beta) ** mp.mpf(-1.5)
    if rho >= lam * mp.zeta(1.5):
        mu = mp.mpf(0)
    else:
        lo, hi = mp.mpf(0), mp.mpf(80)  # g_{3/2}(e^-c) decreases in c
        for _ in range(200):
            mid = (lo + hi) / 2
            lo, hi = (mid, hi) if mp.polylog(1.5, mp.exp(-mid)) > rho / lam else (lo, mid)
        c = (lo + hi) / 2
        mu = -c / beta
    return float(mu * rho - lam * mp.polylog(2.5, mp.exp(beta * mu)) / beta), float(mu)


# ---------------------------------------------------------------- Bose functions

@pytest.mark.parametrize("s", [0.5, 1.5, 2.5])
@pytest.mark.parametrize("z", [0.0, 1e-6, 0.2, 0.5, 0.50001, 0.9, 0.999999])
def test_bose_fn_against_polylog(s, z):
    assert bose_fn(s, z) == pytest.approx(g_oracle(s, z), rel=1e-13, abs=1e-300)


@pytest.mark.parametrize("s, zeta", [(1.5, ZETA_3_2), (2.5, ZETA_5_2)])
def test_bose_fn_at_one_is_zeta(s, zeta):
    assert bose_fn(s, 1.0) == pytest.approx(float(mp.zeta(s)), rel=1e-14)
    assert zeta == pytest.approx(float(mp.zeta(s)), rel=1e-15)


def test_bose_fn_vectorized():
    z = np.array([0.1, 0.6, 1.0])
    assert np.allclose(bose_fn(2.5, z), [g_oracle(2.5, x) for x in z], rtol=1e-13)


def test_bose_fn_domain():
    with pytest.raises(DomainError):
        bose_fn(1.5, 1.1)
    with pytest.raises(DomainError):
        bose_fn(1.5, -0.1)
    with pytest.raises(DomainError):
        bose_fn(0.5, 1.0)
    with pytest.raises(DomainError):
        bose_fn(2.0, 0.5)


def test_bose_fn_of_c_continuity_at_switch():
    c = math.log(2.0)
    for x in (c * (1 - 1e-12), c, c * (1 + 1e-12)):
        assert bose_fn_of_c(1.5, x) == pytest.approx(g_oracle(1.5, mp.exp(-mp.mpf(x))), rel=1e-14)


def test_zeta_bracket_contains_zeta():
    lo, hi = zeta_bracket(1.5, 10**5)
    z = float(mp.zeta(1.5))
    assert lo <= z <= hi


# ---------------------------------------------------------------- rho_c, mu0, f0

@pytest.mark.parametrize("beta", [0.1, 1.0, 7.0])
def test_critical_density_quadrature(beta):
    assert critical_density(beta) == pytest.approx(critical_density_quad(beta), rel=1e-8)


def test_critical_density_value():
    assert critical_density(1.0) == pytest.approx(0.05864362, rel=1e-6)


@pytest.mark.parametrize("beta, rho", [(1.0, 0.01), (1.0, 0.0586), (2.0, 1e-4), (0.5, 0.3),
                                       (3.0, 1e-9)])
def test_mu0_and_f0_against_mpmath(beta, rho):
    f_ref, mu_ref = f0_oracle(beta, rho)
    assert mu0(beta, rho) == pytest.approx(mu_ref, rel=1e-10, abs=1e-14)
    assert f0(beta, rho) == pytest.approx(f_ref, rel=1e-10)


def test_mu0_zero_when_condensed():
    assert mu0(1.0, 1.0) == 0.0
    assert mu0(1.0, critical_density(1.0)) == 0.0


def test_f0_at_critical_density():
    assert f0(1.0, critical_density(1.0)) == pytest.approx(-0.03011423, rel=1e-6)


@pytest.mark.parametrize("beta, rho", [(1.0, 0.02), (1.0, 0.2)])
def test_f0_matches_functional_quadrature(beta, rho):
    assert f0(beta, rho) == pytest.approx(f0_quad(beta, rho), rel=1e-8)


def test_domain_errors():
    with pytest.raises(DomainError):
        mu0(-1.0, 0.1)
    with pytest.raises(DomainError):
        mu0(1.0, 0.0)
    with pytest.raises(DomainError):
        density_at(1.0, 0.1)
    with pytest.raises(DomainError):
        condensate_density(1.0, -1.0)


def test_specific_heat_condensed_closed_form():
    # f = -T^{5/2} (4 pi)^{-3/2} zeta(5/2) in the condensed phase
    T = 1.0
    expected = 15.0 / 4.0 * T**1.5 * (4 * math.pi) ** -1.5 * ZETA_5_2
    assert specific_heat(1.0 / T, 1.0) == pytest.approx(expected, rel=1e-6)


def test_specific_heat_classical_limit():
    # very dilute: cV -> 3/2 rho
    rho = 1e-8
    assert specific_heat(1.0, rho) == pytest.approx(1.5 * rho, rel=1e-3)


def test_specific_heat_step_validation():
    with pytest.raises(NumericalError):
        specific_heat(1.0, 0.1, h=1e-9)
    with pytest.raises(NumericalError):
        specific_heat(1.0, 0.1, h=2.0)


def test_ideal_gas_point_phase():
    p = ideal_gas_point(1.0, 0.2)
    assert p.phase == "condensed" and p.condensate == pytest.approx(0.2 - critical_density(1.0))
    q = ideal_gas_point(1.0, 0.01)
    assert q.phase == "normal" and q.condensate == 0.0 and q.T == 1.0


def test_third_derivative_jump_matches_exact():
    j = rho_derivative_jumps(1.0)
    assert j["d3_jump"] == pytest.approx(third_derivative_jump_exact(1.0), rel=1e-3)
    assert abs(j["d2_jump"]) < 10 * j["d2_noise"] + 1e-6


# ---------------------------------------------------------------- invariants

betas = st.floats(0.05, 20.0)
fracs = st.floats(1e-6, 0.999)


@settings(max_examples=60, deadline=None)
@given(beta=betas, frac=fracs)
def test_mu0_inverts_density(beta, frac):
    rho = frac * critical_density(beta)
    mu = mu0(beta, rho)
    assert mu < 0
    assert density_at(beta, mu) == pytest.approx(rho, rel=1e-10)


@settings(max_examples=50, deadline=None)
@given(beta=betas, r1=st.floats(1e-6, 5.0), r2=st.floats(1e-6, 5.0))
def test_mu0_monotone_in_rho(beta, r1, r2):
    lo, hi = sorted((r1, r2))
    rc = critical_density(beta)
    assert mu0(beta, lo * rc) <= mu0(beta, hi * rc)


@settings(max_examples=50, deadline=None)
@given(beta=betas, r=st.floats(1e-4, 5.0), lam=st.floats(0.5, 2.0))
def test_scaling_relation(beta, r, lam):
    rho = r * critical_density(beta)
    assert f0(beta, rho) == pytest.approx(rho ** (5 / 3) * f0(beta * rho ** (2 / 3), 1.0),
                                          rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(frac=st.floats(0.05, 3.0), shift=st.floats(-3.0, 0.0))
def test_f0_is_maximum_of_functional(frac, shift):
    beta = 1.0
    rho = frac * critical_density(beta)
    mu_star = mu0(beta, rho)
    other = min(mu_star + shift, 0.0)
    assert free_energy_functional(beta, rho, other) <= f0(beta, rho) + 1e-12


@settings(max_examples=40, deadline=None)
@given(beta=betas, r1=st.floats(1e-4, 5.0), r2=st.floats(1e-4, 5.0), t=st.floats(0, 1))
def test_f0_convex_in_rho(beta, r1, r2, t):
    rc = critical_density(beta)
    a, b = r1 * rc, r2 * rc
    mid = t * a + (1 - t) * b
    assert f0(beta, mid) <= t * f0(beta, a) + (1 - t) * f0(beta, b) + 1e-12 * abs(f0(beta, b))


@settings(max_examples=40, deadline=None)
@given(beta=betas, r=st.floats(1e-4, 5.0))
def test_condensate_non_negative(beta, r):
    rho = r * critical_density(beta)
    n0 = condensate_density(beta, rho)
    assert 0 <= n0 <= rho
