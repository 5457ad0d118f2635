"""Lattice check of the decay estimate for u(x) = |Lambda|^-1 sum_p o(s p) e^{-ipx}."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from ..errors import DomainError, ResolutionError
from .fields import radial_envelope
from .lattice import Lattice


@dataclass(frozen=True)
class PolynomialBump:
    """o(q) = (1 - |q|^2 / 4)_+^K, supported in the ball of radius 2 (inside the cube of side 4)."""

    K: int = 8

    def _poly(self) -> Polynomial:
        # as a polynomial in rho = |q|^2
        return Polynomial([1.0, -0.25]) ** self.K

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        return np.where(q < 2.0, self._poly()(q * q), 0.0)

    def laplacian_power_sup(self, n: int) -> float:
        """sup |(-Laplacian)^n o| on R^3, exact through the radial rule Lap f(rho) = 4 rho f'' + 6 f'."""
        if 2 * n >= self.K:
            raise DomainError("K must exceed 2n for (-Laplacian)^n o to be continuous")
        P = self._poly()
        for _ in range(n):
            P = -(Polynomial([0.0, 4.0]) * P.deriv(2) + 6.0 * P.deriv(1))
        crit = [r.real for r in P.deriv().roots() if abs(r.imag) < 1e-12 and 0 <= r.real <= 4]
        pts = np.array([0.0, 4.0] + crit)
        return float(np.max(np.abs(P(pts))))


@dataclass(frozen=True)
class DecayReport:
    n: int
    holds: bool
    min_margin: float
    min_ratio: float
    slope: float
    constant: str

    def to_dict(self) -> dict:
        return {"n": self.n, "holds": self.holds, "min_margin": self.min_margin,
                "min_ratio": self.min_ratio, "slope": self.slope, "constant": self.constant}


def decay_field(o, s: float, lat: Lattice) -> np.ndarray:
    """u on the lattice; o must vanish for |q| >= 2 and the grid must resolve |p| = 2/s."""
    if lat.p_max <= 2.0 / s:
        raise ResolutionError("grid does not resolve the support of o(s p)")
    ok = o(s * lat.momentum_norm())
    return np.real(np.fft.fftn(ok)) / lat.box_L**3


def decay_rhs_factor(s: float, d, L: float, n: int, constant: str = "stated"):
    """Distance-dependent part of the bound, without sup |(-Laplacian)^n o|.

    ``stated``:  (s / (16 d))^{2n} (2/(pi s) + 2 (n+1)/L)^3
    ``derived``: (pi s / (2 d))^{2n} (2/(pi s) + 2 (n+1)/L)^3, what the cosine estimate
    2 (1 - cos(2 pi x/L)) >= 16 x^2 / L^2 yields once the momentum spacing 2 pi / L of the
    discrete Laplacian is tracked.
    """
    count = (2.0 / (np.pi * s) + 2.0 * (n + 1) / L) ** 3
    d = np.asarray(d, dtype=float)
    if constant == "stated":
        return (s / (16.0 * d)) ** (2 * n) * count
    if constant == "derived":
        return (np.pi * s / (2.0 * d)) ** (2 * n) * count
    raise DomainError("constant: 'stated' or 'derived'")


def decay_bound_check(o: PolynomialBump, s: float, L: float, n_grid: int, n: int,
                      constant: str = "stated", fit_from: float = 2.0) -> DecayReport:
    """Compare |u(x)| with the bound at every site with d(x, 0) > s.

    The reported slope fits the shell maxima of |u| on [fit_from * s, L/2] in log-log.
    """
    if n not in (0, 1, 2, 3):
        raise DomainError("n: must be 0, 1, 2 or 3")
    lat = Lattice(L, n_grid)
    u = decay_field(o, s, lat)
    d = lat.torus_distance()
    far = d > s
    rhs = o.laplacian_power_sup(n) * decay_rhs_factor(s, d[far], L, n, constant)
    lhs = np.abs(u[far])
    margin = rhs - lhs
    bins = np.linspace(fit_from * s, L / 2, 13)
    centers, env = radial_envelope(lat.field(u), bins)
    good = env > 0
    slope = float(np.polyfit(np.log(centers[good]), np.log(env[good]), 1)[0])
    return DecayReport(n, bool(np.all(margin > 0)), float(margin.min()),
                       float(np.min(rhs / np.maximum(lhs, 1e-300))), slope, constant)
