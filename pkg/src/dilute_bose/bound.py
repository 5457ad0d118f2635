"""Lower bound on the free energy of the dilute Bose gas, with its parameter choices and error budget.

All unnamed constants in the error terms are set to 1, so ``error_factor`` is an
illustration of the exponents, not a certified number.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import ideal_gas
from .errors import DomainError

DEFAULT_DELTA = 1e-4
A_RANGE = (Fraction(4, 403), Fraction(79, 403))
B_RANGE = (Fraction(2, 403), Fraction(161, 403))
DEFAULT_A = float(A_RANGE[0])
DEFAULT_B = float(B_RANGE[0])
BRANCHES = ("high_T", "low_T")


def gas_parameter(a: float, beta: float, rho: float) -> float:
    """x = a rho^2 beta^(5/2)."""
    return a * rho**2 * beta**2.5


def diluteness(a: float, rho: float) -> float:
    """y = a^3 rho."""
    return a**3 * rho


def correction_term(a: float, beta: float, rho: float) -> float:
    """4 pi a (2 rho^2 - [rho - rho_c]_+^2)."""
    if a < 0 or rho < 0:
        raise DomainError("need a >= 0 and rho >= 0")
    excess = max(rho - ideal_gas.critical_density(beta), 0.0)
    return 4.0 * math.pi * a * (2.0 * rho**2 - excess**2)


def ground_state_energy(a: float, rho: float) -> float:
    """Leading-order ground-state energy density 4 pi a rho^2."""
    if a < 0 or rho < 0:
        raise DomainError("need a >= 0 and rho >= 0")
    return 4.0 * math.pi * a * rho**2


def alpha_exponent(delta: float) -> float:
    """Exponent of a rho^(1/3) in the relative error: 2/2295 - delta."""
    if not 0 < delta < 2 / 2295:
        raise DomainError("delta: need 0 < delta < 2/2295")
    return 2 / 2295 - delta


def alpha_exact() -> Fraction:
    """2/2295 from the branch crossover x = y^(403/6885) and the headline x^(2/403).

    At the crossover the error is y^(2/6885); with y = (a rho^(1/3))^3 this is
    (a rho^(1/3))^(6/6885).
    """
    in_y = Fraction(2, 403) * Fraction(403, 6885)
    return 3 * in_y


@dataclass(frozen=True)
class ParameterSet:
    branch: str
    small_x: float
    R: float
    s: float
    kappa: float
    epsilon: float
    delta: float
    b: float | None = None
    p_c: float | None = None
    phi: float | None = None
    C: float | None = None
    A: float | None = None
    B: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ParameterSet":
        if d.get("branch") not in BRANCHES:
            raise DomainError("branch: must be high_T or low_T")
        return cls(**d)


def _check_exponents(delta, A, B):
    if not delta > 0:
        raise DomainError("delta: must be positive")
    if not float(A_RANGE[0]) - 1e-15 <= A <= float(A_RANGE[1]) + 1e-15:
        raise DomainError("A: must lie in [4/403, 79/403]")
    if not float(B_RANGE[0]) - 1e-15 <= B <= float(B_RANGE[1]) + 1e-15:
        raise DomainError("B: must lie in [2/403, 161/403]")


def choose_parameters(a: float, beta: float, rho: float, delta: float = DEFAULT_DELTA,
                      A: float = DEFAULT_A, B: float = DEFAULT_B,
                      branch: str = "high_T") -> ParameterSet:
    """Power-law parameter choices for either branch of the bound."""
    _check_exponents(delta, A, B)
    if not (a > 0 and beta > 0 and rho > 0):
        raise DomainError("need a > 0, beta > 0, rho > 0")
    x = gas_parameter(a, beta, rho)
    if branch == "high_T":
        R = rho ** (-1 / 3) * x ** (3 / 403)
        b = beta**0.5 * x ** (-121 / 403)
        s = (beta * rho ** (-1 / 3)) ** (1 / 3) * x ** (1 / 403)
        kappa = s * s / beta * x ** (-delta)
        mu = ideal_gas.mu0(beta, rho)
        p_c = beta**-0.5 * x ** (81 / 403) if beta * abs(mu) <= x ** (162 / 403) else 0.0
        return ParameterSet(
            branch=branch, small_x=x, R=R, s=s, kappa=kappa, epsilon=R / s, delta=delta,
            b=b, p_c=p_c, phi=a * x ** (-A), C=x ** (-B), A=A, B=B,
        )
    if branch == "low_T":
        y = diluteness(a, rho)
        return ParameterSet(
            branch=branch, small_x=y,
            R=a * y ** (-5 / 17),
            s=math.sqrt(beta * y ** (1 / 17 + delta)),
            kappa=y ** (1 / 17),
            epsilon=math.sqrt(y ** (3 / 85) / x ** (2 / 5)),
            delta=delta,
        )
    raise DomainError("branch: must be high_T or low_T")


def kappa_prime(params: ParameterSet, a_tilde: float, R0: float) -> float:
    """kappa - (24 a~ / pi^2) (4 R0)^2 / R^3."""
    return params.kappa - 24.0 * a_tilde / math.pi**2 * (4.0 * R0) ** 2 / params.R**3


def ordering_ratios(params: ParameterSet, beta: float, R0: float) -> dict:
    """Scale separations that the parameter choice relies on; each should exceed 1."""
    return {
        "R_over_R0": params.R / R0,
        "s_over_R": params.s / params.R,
        "kappa_beta_over_s2": params.kappa * beta / params.s**2,
    }


@dataclass(frozen=True)
class ErrorBudget:
    Z1: float
    Z2: float
    Z3: float
    Z4: float
    headline: float
    error_factor: float

    def ratios(self, a: float, rho: float) -> dict:
        scale = ground_state_energy(a, rho)
        return {k: getattr(self, k) / scale for k in ("Z1", "Z2", "Z3", "Z4")}


def error_budget(params: ParameterSet, a: float, beta: float, rho: float,
                 a_tilde: float | None = None, R0: float | None = None) -> ErrorBudget:
    """Per-volume error densities Z1..Z4 and the resulting o(1), unit constants throughout."""
    if params.branch == "low_T":
        y, x = params.small_x, gas_parameter(a, beta, rho)
        o = y ** (1 / 17) * (1 + 1 / x) + y ** (3 / 170 - 2 * params.delta) / x ** (1 / 5)
        return ErrorBudget(0.0, 0.0, 0.0, 0.0, o, o)

    at = a if a_tilde is None else a_tilde
    R0 = a if R0 is None else R0
    x = params.small_x
    mu = ideal_gas.mu0(beta, rho)
    pc, phi, C, R, s, b = params.p_c, params.phi, params.C, params.R, params.s, params.b
    m = pc**3 / (6.0 * math.pi**2)  # M / |Lambda|
    P = pc / beta  # P / |Lambda|
    n_fac = 1.0 + 2.0 / math.sqrt(C)

    z1 = m * (pc**2 - mu) + 16.0 * math.pi * rho * phi * m \
        + 32.0 * math.pi * at * C * m**2 * (1.0 + 2.0 * phi / (at * C)) ** 2
    z2 = 8.0 * math.pi * phi * P**2 + 16.0 * math.pi * phi * P * rho * n_fac
    gap = pc + math.sqrt(-mu)
    z3 = (rho * at**1.5 / math.sqrt(beta) / math.sqrt(gap) * (R**-3 + C * (rho * n_fac + rho))
          if gap > 0 else math.inf)
    tau = beta * (pc**2 - mu)
    soft = b**3 * at * beta * rho**2 + (math.sqrt(beta / tau) / b if tau > 0 else math.inf)
    z4 = at * (
        rho**2 * (params.kappa + R / s + R * pc + (R**3 * rho) ** (1 / 3) + (R0 / R) ** 3)
        + rho / (R**2 * s) * math.exp(-b / s)
        + R**-6 * math.sqrt(soft)
    )
    headline = x ** (2 / 403 - params.delta)
    total = (z1 + z2 + z3 + z4) / ground_state_energy(a, rho)
    return ErrorBudget(z1, z2, z3, z4, headline, headline + total)


@dataclass(frozen=True)
class BoundReport:
    a: float
    beta: float
    rho: float
    f0_term: float
    correction: float
    error_factor: float
    branch: str
    parameters: ParameterSet
    z_budget: dict
    lower_bound: float
    branch_values: dict
    crossover_branch: str
    bridging_bound: float
    note: str = "unit constants; illustrative, not rigorous"
    alternative: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["parameters"] = self.parameters.to_dict()
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=True)

    @classmethod
    def from_dict(cls, d: dict) -> "BoundReport":
        d = dict(d)
        d["parameters"] = ParameterSet.from_dict(d["parameters"])
        return cls(**d)


def _branch_value(branch, a, beta, rho, delta, A, B, a_tilde, R0, f0v, corr):
    params = choose_parameters(a, beta, rho, delta, A, B, branch)
    budget = error_budget(params, a, beta, rho, a_tilde, R0)
    if branch == "high_T":
        value = f0v + corr * (1.0 - budget.error_factor)
    else:
        value = f0v + ground_state_energy(a, rho) * (1.0 - budget.error_factor)
    return params, budget, value


def lower_bound(a: float, beta: float, rho: float, delta: float = DEFAULT_DELTA,
                A: float = DEFAULT_A, B: float = DEFAULT_B,
                a_tilde: float | None = None, R0: float | None = None) -> BoundReport:
    """Evaluate both branches and keep the larger lower bound."""
    if not (a > 0 and beta > 0 and rho > 0):
        raise DomainError("need a > 0, beta > 0, rho > 0")
    if not 0 < delta < 2 / 403:
        raise DomainError("delta: need 0 < delta < 2/403")
    f0v = ideal_gas.f0(beta, rho)
    corr = correction_term(a, beta, rho)
    results = {br: _branch_value(br, a, beta, rho, delta, A, B, a_tilde, R0, f0v, corr)
               for br in BRANCHES}
    values = {br: r[2] for br, r in results.items()}
    finite = {br: v for br, v in values.items() if math.isfinite(v)}
    best = max(finite, key=finite.get) if finite else "high_T"
    params, budget, value = results[best]
    # express the chosen value as f0 + correction (1 - error_factor)
    ef = 1.0 - (value - f0v) / corr if math.isfinite(value) else math.inf
    x, y = gas_parameter(a, beta, rho), diluteness(a, rho)
    other = "low_T" if best == "high_T" else "high_T"
    return BoundReport(
        a=a, beta=beta, rho=rho, f0_term=f0v, correction=corr, error_factor=ef,
        branch=best, parameters=params,
        z_budget={"Z1": budget.Z1, "Z2": budget.Z2, "Z3": budget.Z3, "Z4": budget.Z4,
                  "headline": budget.headline, "branch_o1": budget.error_factor},
        lower_bound=value, branch_values=values,
        crossover_branch="high_T" if x <= y ** (403 / 6885) else "low_T",
        bridging_bound=a * rho * beta**-1.5,
        alternative={"branch": other, "parameters": results[other][0].to_dict(),
                     "o1": results[other][1].error_factor},
    )
