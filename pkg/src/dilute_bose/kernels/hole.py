"""Radial finite-element check of the hole-filling inequality

    int_{|x|<=R/10} |grad phi|^2 - (lam/R0)^2 int_{|x|<=R0} |phi|^2
        >= -c int_{|x|<=R/10} |phi|^2,   c = 3 R0 / ((R/10)^3 - R0^3) (tan(lam)/lam - 1).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from ..errors import DomainError

_GX, _GW = np.polynomial.legendre.leggauss(3)  # exact for the degree-4 mass integrands


def hole_rhs_constant(R0: float, R: float, lam: float) -> float:
    if lam == 0:
        return 0.0
    return 3.0 * R0 / ((R / 10.0) ** 3 - R0**3) * (np.tan(lam) / lam - 1.0)


def _radial_mass(nodes: np.ndarray, lo: float, hi: float):
    """Element mass matrices 4 pi int r^2 N_a N_b over [lo, hi] for P1 elements."""
    a, b = nodes[:-1], nodes[1:]
    h = b - a
    x0 = np.clip(a, lo, hi)
    x1 = np.clip(b, lo, hi)
    half = 0.5 * (x1 - x0)
    mid = 0.5 * (x1 + x0)
    M = np.zeros((a.size, 2, 2))
    for gx, gw in zip(_GX, _GW):
        r = mid + half * gx
        N = np.stack([(b - r) / h, (r - a) / h], axis=1)
        w = 4.0 * np.pi * gw * half * r * r
        M += w[:, None, None] * N[:, :, None] * N[:, None, :]
    return M


def _assemble(n_nodes: int, elem: np.ndarray) -> np.ndarray:
    out = np.zeros((n_nodes, n_nodes))
    i = np.arange(n_nodes - 1)
    out[i, i] += elem[:, 0, 0]
    out[i + 1, i + 1] += elem[:, 1, 1]
    out[i, i + 1] += elem[:, 0, 1]
    out[i + 1, i] += elem[:, 1, 0]
    return out


@dataclass(frozen=True)
class HoleLemmaResult:
    eigenvalue: float
    rhs_constant: float
    r: np.ndarray
    profile: np.ndarray
    well_mass_fraction: float
    well_volume_fraction: float


def verify_hole_lemma(R0: float, R: float, lam: float, mesh: int = 1024) -> HoleLemmaResult:
    """Smallest eigenvalue of (form + c * mass) relative to the mass on [0, R/10].

    P1 elements are conforming, so the computed value bounds the exact one from above
    and converges to it as O(mesh^-2).
    """
    if not 0 <= lam < np.pi / 2:
        raise DomainError("lambda: need 0 <= lambda < pi/2")
    if not 0 < R0 < R / 10:
        raise DomainError("need 0 < R0 < R/10")
    if mesh < 256:
        raise DomainError("mesh: need at least 256 cells")
    Rh = R / 10.0
    nodes = np.linspace(0.0, Rh, mesh + 1)
    h = np.diff(nodes)
    k = 4.0 * np.pi * (nodes[1:] ** 3 - nodes[:-1] ** 3) / (3.0 * h * h)
    stiff = _assemble(mesh + 1, k[:, None, None] * np.array([[1.0, -1.0], [-1.0, 1.0]]))
    mass_all = _assemble(mesh + 1, _radial_mass(nodes, 0.0, Rh))
    mass_well = _assemble(mesh + 1, _radial_mass(nodes, 0.0, R0))
    c = hole_rhs_constant(R0, R, lam)
    A = stiff - (lam / R0) ** 2 * mass_well + c * mass_all
    vals, vecs = eigh(A, mass_all, subset_by_index=[0, 0])
    v = vecs[:, 0]
    v = v * np.sign(v[np.argmax(np.abs(v))])
    frac = float(v @ mass_well @ v / (v @ mass_all @ v))
    return HoleLemmaResult(float(vals[0]), c, nodes, v, frac, (R0 / Rh) ** 3)
