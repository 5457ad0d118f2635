"""Momentum cutoff, the kernels h, f_R, w_R, and the localization bump eta."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, ResolutionError
from .lattice import Lattice, PeriodicLatticeField


def smoothstep7(t):
    """35 t^4 - 84 t^5 + 70 t^6 - 20 t^7 on [0, 1], clamped outside; C^3 at both ends."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    return t**4 * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)))


@dataclass(frozen=True)
class CutoffProfile:
    """chi(p) = nu(s |p|) with nu = 0 below 1, 1 above 2."""

    s: float
    smooth_order: int = 3

    def __post_init__(self):
        if not self.s > 0:
            raise DomainError("s: must be positive")
        if self.smooth_order != 3:
            raise DomainError("smooth_order: only the C^3 smoothstep is available")

    @staticmethod
    def nu(q):
        return smoothstep7(np.asarray(q, dtype=float) - 1.0)

    def chi(self, p):
        return self.nu(self.s * np.asarray(p, dtype=float))

    def describe(self) -> dict:
        return {"s": self.s, "nu": "smoothstep7(|q|-1)", "smooth_order": self.smooth_order}


def _check_resolves_cutoff(lat: Lattice, cutoff: CutoffProfile):
    if lat.p_max < 2.0 / cutoff.s:
        raise ResolutionError(
            f"grid momentum {lat.p_max:.4g} below the cutoff transition end 2/s = {2 / cutoff.s:.4g}")


def build_h(lat: Lattice, cutoff: CutoffProfile | None, shift=(0.0, 0.0, 0.0),
            zero_cutoff: bool = False) -> PeriodicLatticeField:
    """h(x - y) = |Lambda|^-1 sum_p (1 - chi(p)) e^{-ip(x-y)} on the lattice.

    ``shift`` is y; off-lattice shifts are exact phase factors.  ``zero_cutoff`` uses chi = 0.
    """
    if zero_cutoff:
        one_minus = np.ones((lat.grid_n,) * 3)
    else:
        _check_resolves_cutoff(lat, cutoff)
        one_minus = 1.0 - cutoff.chi(lat.momentum_norm())
    if any(shift):
        kx, ky, kz = lat.momenta()
        one_minus = one_minus * np.exp(1j * (kx * shift[0] + ky * shift[1] + kz * shift[2]))
    # fftn(G)[x] = sum_p G(p) e^{-ipx}
    return lat.field(np.fft.fftn(one_minus) / lat.box_L**3)


def imag_fraction(f: PeriodicLatticeField) -> float:
    scale = np.max(np.abs(f.values))
    return float(np.max(np.abs(np.imag(f.values))) / scale) if scale > 0 else 0.0


def build_fR(h: PeriodicLatticeField, R: float, min_cells: float = 4.0) -> PeriodicLatticeField:
    """f_R(x) = max over lattice offsets |y| <= R of |h(x - y) - h(x)|."""
    lat = Lattice(h.box_L, h.grid_n)
    if R < min_cells * lat.spacing:
        raise ResolutionError(f"R = {R} spans fewer than {min_cells} lattice cells")
    if R >= h.box_L / 2:
        raise DomainError("R: must be below box_L / 2")
    base = np.real(h.values)
    out = np.zeros_like(base)
    for off in lat.ball_offsets(R):
        np.maximum(out, np.abs(np.roll(base, tuple(off), axis=(0, 1, 2)) - base), out=out)
    return h.with_values(out)


def build_wR(fR: PeriodicLatticeField) -> PeriodicLatticeField:
    """w_R = (2 / pi^2) f_R * int f_R."""
    vals = np.real(fR.values)
    return fR.with_values(2.0 / np.pi**2 * vals * np.sum(vals) * fR.cell_volume)


def gradient_magnitude(h: PeriodicLatticeField) -> PeriodicLatticeField:
    """|grad h| by spectral differentiation."""
    lat = Lattice(h.box_L, h.grid_n)
    hk = np.fft.fftn(np.real(h.values))
    g2 = np.zeros((lat.grid_n,) * 3)
    for k in lat.momenta():
        k = np.where(np.abs(k) >= lat.p_max * (1 - 1e-12), 0.0, k)  # drop the unpaired Nyquist mode
        g2 = g2 + np.real(np.fft.ifftn(1j * k * hk)) ** 2
    return h.with_values(np.sqrt(g2))


def ball_max(f: PeriodicLatticeField, radius: float) -> PeriodicLatticeField:
    """Sitewise maximum of f over the closed ball of the given radius."""
    lat = Lattice(f.box_L, f.grid_n)
    base = np.real(f.values)
    out = base.copy()
    for off in lat.ball_offsets(radius):
        np.maximum(out, np.roll(base, tuple(off), axis=(0, 1, 2)), out=out)
    return f.with_values(out)


def gradient_bound_margin(h: PeriodicLatticeField, R: float, s: float) -> float:
    """min over sites of R max_{d(x,y)<=s} |grad h(y)| - f_R(x); non-negative when the bound holds."""
    fR = build_fR(h, R)
    env = ball_max(gradient_magnitude(h), s)
    return float(np.min(R * env.values - fR.values))


def radial_envelope(f: PeriodicLatticeField, bins: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Shell maxima of |f| against torus distance from the origin."""
    lat = Lattice(f.box_L, f.grid_n)
    d = lat.torus_distance()
    vals = np.abs(f.values)
    idx = np.digitize(d.ravel(), bins)
    centers, maxima = [], []
    for i in range(1, len(bins)):
        sel = idx == i
        if np.any(sel):
            centers.append(0.5 * (bins[i - 1] + bins[i]))
            maxima.append(vals.ravel()[sel].max())
    return np.array(centers), np.array(maxima)


def bump(r, radius: float, power: int = 4):
    """(1 - (r/radius)^2)_+^power."""
    q = np.clip(1.0 - (np.asarray(r, dtype=float) / radius) ** 2, 0.0, None)
    return q**power


def build_eta(b: float, lat: Lattice) -> PeriodicLatticeField:
    """eta_b = (psi * psi) / (psi * psi)(0) for a bump psi of radius b/2; so eta^ = |psi^|^2 / const."""
    if not 0 < b <= lat.box_L / 2:
        raise DomainError("b: need 0 < b <= box_L / 2")
    psi = bump(lat.torus_distance(), b / 2)
    psik = np.fft.fftn(psi)
    conv = np.real(np.fft.ifftn(np.abs(psik) ** 2))
    conv /= conv[0, 0, 0]
    return lat.field(conv)


def eta_transform_min_ratio(eta: PeriodicLatticeField) -> float:
    """min eta^ / max eta^ over the lattice; should be >= -1e-12."""
    k = np.real(np.fft.fftn(eta.values))
    return float(k.min() / k.max())
