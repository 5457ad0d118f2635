"""Thermodynamics of the non-interacting Bose gas in the thermodynamic limit (hbar = 2m = 1)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize
from scipy.special import gamma, zeta

from .errors import DomainError, NumericalError

ZETA_3_2 = float(zeta(1.5))
ZETA_5_2 = float(zeta(2.5))

_LN2 = math.log(2.0)


def _bose_series(s: float, z: float) -> float:
    """Direct sum of z^l / l^s, truncated where the geometric tail bound drops below 1e-17."""
    # sum_{l > N} z^l / l^s <= z^(N+1) / ((1 - z) (N+1)^s)
    n = max(1, math.ceil(math.log(1e-17 * (1.0 - z)) / math.log(z))) if z > 0 else 0
    if n == 0:
        return 0.0
    ell = np.arange(1, n + 1, dtype=float)
    return float(np.sum(np.exp(ell * math.log(z) - s * np.log(ell))[::-1]))


def _bose_log_expansion(s: float, c: float) -> float:
    """g_s(e^-c) = Gamma(1-s) c^(s-1) + sum_k zeta(s-k) (-c)^k / k!, valid for 0 <= c < 2 pi."""
    total = 0.0 if c == 0 else float(gamma(1.0 - s)) * c ** (s - 1.0)
    term_scale = 1.0
    for k in range(200):
        term = float(zeta(s - k)) * term_scale
        total += term
        if k > 2 and abs(term) < 1e-18 * max(1.0, abs(total)):
            break
        term_scale *= -c / (k + 1)
    return total


def bose_fn(s: float, z):
    """Bose function g_s(z) = sum_{l>=1} z^l / l^s for 0 <= z <= 1.

    Half-integer orders are supported everywhere on [0, 1]; at z = 1 the result is
    zeta(s) and requires s > 1.
    """
    z_arr = np.asarray(z, dtype=float)
    if np.any((z_arr < 0) | (z_arr > 1)) or np.any(np.isnan(z_arr)):
        raise DomainError("z: fugacity must lie in [0, 1]")
    if float(s) == round(s):
        raise DomainError("s: only non-integer orders are supported")
    if s <= 1 and np.any(z_arr == 1):
        raise DomainError("g_s(1) diverges for s <= 1")

    def one(zz: float) -> float:
        if zz == 0:
            return 0.0
        if zz <= 0.5:
            return _bose_series(s, zz)
        return _bose_log_expansion(s, -math.log(zz))

    out = np.vectorize(one, otypes=[float])(z_arr)
    return out if out.ndim else float(out)


def bose_fn_of_c(s: float, c: float) -> float:
    """g_s(e^-c) for c >= 0; avoids the rounding of forming z = e^-c close to 1."""
    if c < 0:
        raise DomainError("c: must be non-negative")
    if c >= _LN2:
        return _bose_series(s, math.exp(-c))
    return _bose_log_expansion(s, c)


def zeta_bracket(s: float, n_terms: int) -> tuple[float, float]:
    """Rigorous bracket of zeta(s) = g_s(1) from a partial sum and integral tail bounds.

    S_N + int_{N+1}^inf t^-s dt  <=  zeta(s)  <=  S_N + int_N^inf t^-s dt.
    """
    if s <= 1:
        raise DomainError("s: need s > 1")
    ell = np.arange(1, n_terms + 1, dtype=float)
    partial = math.fsum((ell ** -s)[::-1])
    lo = partial + (n_terms + 1) ** (1 - s) / (s - 1)
    hi = partial + n_terms ** (1 - s) / (s - 1)
    return lo, hi


def _thermal_density_scale(beta: float) -> float:
    return (4.0 * math.pi * beta) ** -1.5


def _check_beta(beta):
    if not beta > 0:
        raise DomainError("beta: must be positive")


def critical_density(beta: float) -> float:
    """rho_c(beta) = (4 pi beta)^(-3/2) zeta(3/2)."""
    _check_beta(beta)
    return _thermal_density_scale(beta) * ZETA_3_2


def critical_density_quad(beta: float) -> float:
    """rho_c(beta) from the momentum integral (2 pi)^-3 int dp 1/(e^{beta p^2} - 1)."""
    _check_beta(beta)

    def integrand(p):
        x = beta * p * p
        return p * p * math.exp(-x) / -math.expm1(-x) if p > 0 else 1.0 / beta

    cut = math.sqrt(60.0 / beta)
    a, _ = integrate.quad(integrand, 0, cut, epsabs=0, epsrel=1e-12, limit=400)
    b, _ = integrate.quad(integrand, cut, np.inf, epsabs=0, epsrel=1e-12, limit=400)
    return (a + b) / (2.0 * math.pi**2)


def density_at(beta: float, mu: float) -> float:
    """Thermal density (4 pi beta)^(-3/2) g_{3/2}(e^{beta mu}) for mu <= 0."""
    _check_beta(beta)
    if mu > 0:
        raise DomainError("mu: must be non-positive")
    return _thermal_density_scale(beta) * bose_fn_of_c(1.5, -beta * mu)


def mu0(beta: float, rho: float) -> float:
    """Chemical potential maximizing the free-energy functional; exactly 0 for rho >= rho_c."""
    _check_beta(beta)
    if not rho > 0:
        raise DomainError("rho: must be positive")
    target = rho / _thermal_density_scale(beta)  # g_{3/2}(e^-c) = target
    if target >= ZETA_3_2:
        return 0.0

    def resid(c):
        return bose_fn_of_c(1.5, c) - target

    # g_{3/2}(z) <= z zeta(3/2) gives an upper end for c; g_{3/2}(z) >= z gives the lower one
    c_hi = max(1.0, -math.log(target) + math.log(ZETA_3_2) + 1.0)
    if resid(c_hi) > 0 or resid(0.0) < 0:
        raise NumericalError("could not bracket the chemical potential")
    try:
        c = optimize.brentq(resid, 0.0, c_hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    except (ValueError, RuntimeError) as exc:
        raise NumericalError(str(exc)) from exc
    # Newton polish, d g_{3/2}(e^-c) / dc = -g_{1/2}(e^-c)
    for _ in range(3):
        if c <= 0:
            break
        step = resid(c) / -bose_fn_of_c(0.5, c)
        c_new = c - step
        if c_new <= 0 or abs(resid(c_new)) > abs(resid(c)):
            break
        c = c_new
    return -c / beta


def f0(beta: float, rho: float) -> float:
    """Free energy density of the ideal Bose gas, evaluated at mu0(beta, rho)."""
    mu = mu0(beta, rho)
    return mu * rho - _thermal_density_scale(beta) * bose_fn_of_c(2.5, -beta * mu) / beta


def free_energy_functional(beta: float, rho: float, mu: float) -> float:
    """mu rho + (2 pi)^-3 beta^-1 int dp ln(1 - e^{-beta (p^2 - mu)}), by radial quadrature.

    The ideal-gas free energy is the supremum of this over mu <= 0.
    """
    _check_beta(beta)
    if mu > 0:
        raise DomainError("mu: must be non-positive")

    def integrand(p):
        x = beta * (p * p - mu)
        return p * p * math.log(-math.expm1(-x)) if x > 0 else 0.0

    cut = math.sqrt(max(-mu, 0.0) + 60.0 / beta)
    a, _ = integrate.quad(integrand, 0, cut, epsabs=0, epsrel=1e-12, limit=400)
    b, _ = integrate.quad(integrand, cut, np.inf, epsabs=0, epsrel=1e-12, limit=400)
    return mu * rho + (a + b) / (2.0 * math.pi**2 * beta)


def f0_quad(beta: float, rho: float) -> float:
    """f0 by quadrature of the log integrand at the chemical potential mu0."""
    return free_energy_functional(beta, rho, mu0(beta, rho))


def condensate_density(beta: float, rho: float) -> float:
    """[rho - rho_c(beta)]_+."""
    if rho < 0:
        raise DomainError("rho: must be non-negative")
    return max(rho - critical_density(beta), 0.0)


def specific_heat(beta: float, rho: float, h: float | None = None) -> float:
    """c_V = -T d^2 f0 / dT^2 at fixed rho, by a central difference of step h in T."""
    _check_beta(beta)
    T = 1.0 / beta
    if h is None:
        h = 1e-3 * T
    if not 0 < h < T or h < 1e-7 * T:
        raise NumericalError("step h must satisfy 1e-7 T <= h < T")

    def f_of_T(t):
        return f0(1.0 / t, rho)

    d2 = (f_of_T(T + h) - 2.0 * f_of_T(T) + f_of_T(T - h)) / (h * h)
    return -T * d2


@dataclass(frozen=True)
class IdealGasPoint:
    beta: float
    rho: float
    mu0: float
    rho_c: float
    f0: float
    condensate: float
    phase: str
    specific_heat: float | None = None

    @property
    def T(self) -> float:
        return 1.0 / self.beta


def ideal_gas_point(beta: float, rho: float, with_specific_heat: bool = True) -> IdealGasPoint:
    mu = mu0(beta, rho)
    rc = critical_density(beta)
    return IdealGasPoint(
        beta=beta,
        rho=rho,
        mu0=mu,
        rho_c=rc,
        f0=f0(beta, rho),
        condensate=max(rho - rc, 0.0),
        phase="condensed" if rho >= rc else "normal",
        specific_heat=specific_heat(beta, rho) if with_specific_heat else None,
    )


# ----------------------------------------------------------------------------------
# behaviour at the condensation point

def _one_sided(f, x0: float, h: float, order: int, side: int) -> float:
    """n-th one-sided difference from the points x0 + side k h, k = 0..n."""
    total = sum((-1) ** (order - k) * math.comb(order, k) * f(x0 + side * k * h)
                for k in range(order + 1))
    return total / (side * h) ** order


def rho_derivative_jumps(beta: float, h: float | None = None) -> dict:
    """One-sided estimates of d^2 f0/drho^2 and d^3 f0/drho^3 just below and above rho_c.

    Each one-sided value is Richardson-extrapolated from steps h and h/2; the noise floor
    of an estimate is the change of that extrapolation when h is halved once more, plus a
    rounding bound.
    """
    rc = critical_density(beta)
    if h is None:
        h = 1e-3 * rc

    def f(r):
        return f0(beta, r)

    def rich(order, side, step):
        return 2.0 * _one_sided(f, rc, step / 2, order, side) - _one_sided(f, rc, step, order, side)

    out = {"rho_c": rc, "h": h}
    fscale = abs(f(rc))
    for order in (2, 3):
        rounding = 2.0 ** (order + 2) * np.finfo(float).eps * fscale / (h / 2) ** order
        sides = {}
        noise = 0.0
        for side, name in ((-1, "below"), (1, "above")):
            coarse = rich(order, side, h)
            fine = rich(order, side, h / 2)
            sides[name] = fine
            noise = max(noise, float(abs(fine - coarse) + rounding))
        out[f"d{order}_below"] = sides["below"]
        out[f"d{order}_above"] = sides["above"]
        out[f"d{order}_jump"] = sides["above"] - sides["below"]
        out[f"d{order}_noise"] = noise
    return out


def third_derivative_jump_exact(beta: float) -> float:
    """Limit of d^3 f0/drho^3 (above minus below) at rho_c, namely 2 (4 pi beta)^2.

    Below rho_c, zeta(3/2) - g_{3/2}(e^-c) = 2 sqrt(pi c) + O(c), so to leading order
    mu0 = -(4 pi beta)^2 (rho_c - rho)^2; above rho_c, mu0 = 0.  d f0/drho = mu0.
    """
    _check_beta(beta)
    return 2.0 * (4.0 * math.pi * beta) ** 2
