"""Writing a radial profile as a superposition of hat functions, g(t) = int m(r) j(t/r) dr."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from ..errors import NumericalError
from .hat import hat_j


class DifferentiationError(NumericalError):
    pass


def _quad(f, lo, hi):
    # the integrands are smooth; quadpack's roundoff warning fires only at the 1e-13 level
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(f, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=400)
    return val


def _stencil(order: int, half_width: int = 3) -> np.ndarray:
    """Central finite-difference weights on offsets -w..w from the Taylor (Vandermonde) system."""
    k = np.arange(-half_width, half_width + 1, dtype=float)
    A = np.vander(k, increasing=True).T
    rhs = np.zeros(k.size)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(A, rhs)


_D2 = _stencil(2)
_D3 = _stencil(3)


def _fd(g: Callable, t: float, h: float, order: int) -> float:
    k = np.arange(-3, 4)
    vals = np.array([g(t + kk * h) for kk in k], dtype=float)
    stencil = _D2 if order == 2 else _D3
    return float(stencil @ vals) / h**order


def numeric_derivative(g: Callable, order: int, h: float = 1e-2, tol: float = 1e-6) -> Callable:
    """Central finite-difference derivative; raises if steps h and h/2 disagree beyond tol."""

    def d(t):
        a = _fd(g, t, h, order)
        b = _fd(g, t, h / 2, order)
        if abs(a - b) > tol * max(1.0, abs(b)):
            raise DifferentiationError(f"derivative of order {order} unstable at t={t}")
        return b

    return d


@dataclass(frozen=True)
class BallDecomposition:
    r: np.ndarray
    m: np.ndarray
    m_func: Callable

    def reconstruct(self, t: float, r_max: float = np.inf) -> float:
        """int_t^inf m(r) j(t/r) dr (j(t/r) vanishes for r < t)."""
        if t == 0:
            return 24.0 * _quad(self.m_func, 0, r_max)
        f = lambda r: self.m_func(r) * hat_j(t / r)
        return _quad(f, t, r_max)

    def split_bound(self, t: float, r_max: float = np.inf) -> float:
        """j(t) int_0^1 |m| + int_1^inf |m(r)| j(t/r) dr, an upper bound for g(t) with j decreasing."""
        absm = lambda r: abs(self.m_func(r))
        inner = _quad(absm, 0, 1)
        outer = _quad(lambda r: absm(r) * hat_j(t / r), max(1.0, t), r_max)
        return hat_j(t) * inner + outer


def ball_decomposition_m(g: Callable, g2: Callable | None = None, g3: Callable | None = None,
                         r_grid: np.ndarray | None = None) -> BallDecomposition:
    """m(r) = r (g''(r) - r g'''(r)) / 72, from analytic or finite-difference derivatives."""
    if g2 is None:
        g2 = numeric_derivative(g, 2)
    if g3 is None:
        g3 = numeric_derivative(g, 3)

    def m(r):
        return r * (g2(r) - r * g3(r)) / 72.0

    if r_grid is None:
        r_grid = np.logspace(-3, 1.5, 200)
    return BallDecomposition(np.asarray(r_grid), np.array([m(r) for r in r_grid]), m)


def gaussian_profile():
    """g(t) = exp(-t^2) with its second and third derivatives."""
    g = lambda t: np.exp(-t * t)
    g2 = lambda t: (4 * t * t - 2) * np.exp(-t * t)
    g3 = lambda t: (12 * t - 8 * t**3) * np.exp(-t * t)
    return g, g2, g3


def hat_profile():
    """g = j itself; its decomposition is a point mass at r = 1."""
    g = lambda t: hat_j(t)
    g2 = lambda t: 72.0 * t if t < 1 else 0.0
    g3 = lambda t: 72.0 if t < 1 else 0.0
    return g, g2, g3
