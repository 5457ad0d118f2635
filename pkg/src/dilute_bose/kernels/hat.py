"""The hat function j(t) = 12 (t+2)(1-t)_+^2 and the soft interaction built from it."""
from __future__ import annotations

import numpy as np
from scipy import integrate

from ..errors import DomainError


def hat_j(t):
    """12 (t + 2) max(1 - t, 0)^2 for t >= 0."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("t: must be non-negative")
    out = 12.0 * (t_arr + 2.0) * np.clip(1.0 - t_arr, 0.0, None) ** 2
    return out if out.ndim else float(out)


def hat_moment() -> float:
    """int_0^1 t^2 j(t) dt, exact for a degree-5 polynomial with 4-point Gauss-Legendre."""
    x, w = np.polynomial.legendre.leggauss(4)
    t = 0.5 * (x + 1.0)
    return float(0.5 * np.sum(w * t**2 * hat_j(t)))


def ball_overlap_volume(t: float, radius: float = 0.5) -> float:
    """Volume of the intersection of two balls of the given radius with centres t apart.

    Integrates the cross-sectional disc areas along the axis; no closed form is used.
    """
    if t < 0:
        raise DomainError("t: must be non-negative")
    if t >= 2 * radius:
        return 0.0

    def area(z):
        r2 = min(radius**2 - z**2, radius**2 - (z - t) ** 2)
        return np.pi * max(r2, 0.0)

    lo, hi = t - radius, radius
    mid = t / 2
    v1, _ = integrate.quad(area, lo, mid, epsabs=1e-15, epsrel=1e-13)
    v2, _ = integrate.quad(area, mid, hi, epsabs=1e-15, epsrel=1e-13)
    return v1 + v2


def hat_j_geometric(t: float) -> float:
    """(144/pi) times the overlap volume of two balls of radius 1/2 at distance t."""
    return 144.0 / np.pi * ball_overlap_volume(t)


def soft_potential(t, R: float, R0: float = 0.0):
    """U_R(t) = R^-3 j(t/R) for t >= R0, zero inside R0; int t^2 U_R <= 1."""
    t_arr = np.asarray(t, dtype=float)
    out = np.where(t_arr >= R0, hat_j(t_arr / R) / R**3, 0.0)
    return out if out.ndim else float(out)
