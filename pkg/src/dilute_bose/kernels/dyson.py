"""Lattice certification of the one-particle Dyson inequality

    p^2 chi(p)^2 + 1/2 sum_i v(d(x, y_i))
        >= (1 - eps) a U_R(d(x, y_NN(x))) - sum_i (a / eps) w_R(x - y_i),

by the smallest eigenvalue of (left side - right side) on a periodic grid.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh, lobpcg

from ..errors import DomainError, NumericalError, ResolutionError
from ..potentials import RadialPotential, TruncatedPotential
from ..scattering import scattering_length_ode
from .fields import CutoffProfile, build_fR, build_h, build_wR
from .hat import soft_potential
from .lattice import Lattice


@dataclass(frozen=True)
class DysonCheckConfig:
    scatterers: tuple = ()
    R: float = 8.0
    epsilon: float = 0.3
    kappa: float = 0.0
    U_choice: str = "hat"

    def __post_init__(self):
        if self.U_choice not in ("hat", "hat_with_hole"):
            raise DomainError("U_choice: 'hat' or 'hat_with_hole'")
        if not self.R > 0 or not self.epsilon > 0:
            raise DomainError("need R > 0 and epsilon > 0")
        if not 0 <= self.kappa < 1:
            raise DomainError("kappa: need 0 <= kappa < 1")

    def to_dict(self) -> dict:
        return {"scatterers": [list(map(float, y)) for y in self.scatterers], "R": self.R,
                "epsilon": self.epsilon, "kappa": self.kappa, "U_choice": self.U_choice}


@dataclass(frozen=True)
class DysonResult:
    eigenvalue: float
    grid_n: int
    box_L: float
    a_tilde: float
    config: DysonCheckConfig
    info: dict = field(default_factory=dict)


def random_scatterers(count: int, box_L: float, min_dist: float, seed: int = 0,
                      max_tries: int = 100000) -> tuple:
    """Uniform points on the torus, rejecting any closer than min_dist to an earlier one."""
    rng = np.random.default_rng(seed)
    pts: list[np.ndarray] = []
    tries = 0
    while len(pts) < count:
        tries += 1
        if tries > max_tries:
            raise NumericalError("could not place scatterers at the requested separation")
        y = rng.uniform(0.0, box_L, size=3)
        ok = True
        for q in pts:
            d = np.abs(y - q) % box_L
            d = np.minimum(d, box_L - d)
            if np.sqrt(np.sum(d * d)) < min_dist:
                ok = False
                break
        if ok:
            pts.append(y)
    return tuple(tuple(float(c) for c in y) for y in pts)


def _torus_dist(p, q, box_L: float) -> float:
    d = np.abs(np.asarray(p, float) - np.asarray(q, float)) % box_L
    d = np.minimum(d, box_L - d)
    return float(np.sqrt(np.sum(d * d)))


def neighbor_set(points, j: int, min_dist: float, box_L: float) -> list[int]:
    """Maximal min_dist-separated subset of the points other than j.

    Pass one keeps every point whose nearest other point (j excluded) is at least min_dist
    away; pass two walks the remaining indices in order and adds each one that keeps the
    set separated.  The result depends on that order.
    """
    others = [i for i in range(len(points)) if i != j]
    dist = {(i, k): _torus_dist(points[i], points[k], box_L) for i in others for k in others if i < k}
    d = lambda i, k: dist[(min(i, k), max(i, k))]
    chosen = [i for i in others if all(d(i, k) >= min_dist for k in others if k != i)]
    for i in others:
        if i not in chosen and all(d(i, k) >= min_dist for k in chosen):
            chosen.append(i)
    return sorted(chosen)


def _potential_of(p) -> RadialPotential:
    return p.potential if isinstance(p, TruncatedPotential) else p


def dyson_operator(config: DysonCheckConfig, potential, cutoff: CutoffProfile, lat: Lattice,
                   a_tilde: float | None = None, min_core_cells: float = 2.0):
    """The operator (left side - right side) as a LinearOperator, plus its diagonal potential."""
    v = _potential_of(potential)
    if v.core_radius > 0:
        raise DomainError("hard cores must be truncated to a finite step first")
    if not v.R0 < config.R < lat.box_L / 2:
        raise DomainError("need R0 < R < box_L / 2")
    if v.R0 < min_core_cells * lat.spacing:
        raise ResolutionError(f"potential range R0 = {v.R0} spans fewer than {min_core_cells} cells")
    if lat.p_max < 2.0 / cutoff.s:
        raise ResolutionError("grid does not resolve the cutoff transition")
    if a_tilde is None:
        a_tilde = scattering_length_ode(v).a

    pn = lat.momentum_norm()
    kinetic = (pn * cutoff.chi(pn)) ** 2
    if config.kappa:
        kinetic = kinetic * (1.0 - config.kappa)

    n = lat.grid_n
    diag = np.zeros((n, n, n))
    if config.scatterers:
        dists = np.stack([lat.torus_distance(y) for y in config.scatterers])
        for d in dists:
            diag += 0.5 * v(d)
        d_nn = dists.min(axis=0)
        R0_hole = v.R0 if config.U_choice == "hat" else 0.0
        diag -= (1.0 - config.epsilon) * (1.0 - config.kappa) * a_tilde * \
            soft_potential(d_nn, config.R, R0_hole)
        for y in config.scatterers:
            h = build_h(lat, cutoff, shift=y)
            w = build_wR(build_fR(h, config.R))
            diag += a_tilde / config.epsilon * np.real(w.values)

    shape = (n, n, n)

    def matvec(x):
        x = np.asarray(x).reshape(shape)
        kx = np.real(np.fft.ifftn(kinetic * np.fft.fftn(x)))
        return (kx + diag * x).ravel()

    op = LinearOperator((n**3, n**3), matvec=matvec, dtype=float)
    return op, diag, kinetic, a_tilde


def _dense(kinetic, diag):
    n = diag.shape[0]
    N = n**3
    eye = np.eye(N).reshape((N, n, n, n))
    K = np.real(np.fft.ifftn(kinetic[None] * np.fft.fftn(eye, axes=(1, 2, 3)), axes=(1, 2, 3)))
    return K.reshape(N, N) + np.diag(diag.ravel())


def _fourier_preconditioner(kinetic, diag):
    """(kinetic + c)^-1 applied in momentum space; c is the mean potential scale."""
    shape = kinetic.shape
    c = 1e-2 + float(np.mean(np.abs(diag)))
    denom = kinetic[..., None] + c

    def apply(X):
        X = np.asarray(X)
        cols = X.reshape(shape + (-1,))
        out = np.real(np.fft.ifftn(np.fft.fftn(cols, axes=(0, 1, 2)) / denom, axes=(0, 1, 2)))
        return out.reshape(X.shape)

    N = kinetic.size
    return LinearOperator((N, N), matvec=apply, matmat=apply, dtype=float)


def smallest_eigenvalue(op, diag, kinetic, seed: int = 0, tol: float = 1e-8,
                        block: int = 4) -> float:
    """Lowest eigenvalue: dense below 12 points per axis, else preconditioned LOBPCG.

    The low spectrum is crowded (chi kills the kinetic energy of slow modes), which makes
    plain Lanczos unreliable here; LOBPCG with the momentum-space preconditioner is not.
    """
    n = diag.shape[0]
    if n < 12:
        return float(np.linalg.eigvalsh(_dense(kinetic, diag))[0])
    N = n**3
    A = LinearOperator((N, N), matvec=op.matvec,
                       matmat=lambda X: np.column_stack([op.matvec(x) for x in X.T]), dtype=float)
    X0 = np.random.default_rng(seed).standard_normal((N, block))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        vals, vecs = lobpcg(A, X0, M=_fourier_preconditioner(kinetic, diag), tol=tol,
                            maxiter=1000, largest=False)
    i = int(np.argmin(vals))
    v = vecs[:, i]
    resid = float(np.linalg.norm(op.matvec(v) - vals[i] * v) / np.linalg.norm(v))
    if resid <= 1e-6:
        return float(vals[i])
    try:
        vals = eigsh(op, k=3, which="SA", v0=X0[:, 0], tol=1e-10, ncv=min(N - 1, 128),
                     maxiter=20000, return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        raise NumericalError("eigensolver did not converge") from exc
    return float(np.min(vals))


def verify_dyson(config: DysonCheckConfig, potential, cutoff: CutoffProfile, lat: Lattice,
                 a_tilde: float | None = None, seed: int = 0) -> DysonResult:
    """Smallest eigenvalue of the discretized (left side - right side)."""
    op, diag, kinetic, at = dyson_operator(config, potential, cutoff, lat, a_tilde)
    lam = smallest_eigenvalue(op, diag, kinetic, seed)
    return DysonResult(lam, lat.grid_n, lat.box_L, at, config,
                       {"cutoff": cutoff.describe(), "min_diag": float(diag.min())})


@dataclass(frozen=True)
class DysonVerdict:
    eigenvalues: dict
    tol_disc: float
    floor: float
    holds: bool
    negative_parts: dict
    refinement_ok: bool

    def to_dict(self) -> dict:
        return {"inequality": "dyson", "eigenvalue": self.eigenvalues[max(self.eigenvalues)],
                "eigenvalues": {str(k): v for k, v in self.eigenvalues.items()},
                "tol_disc": self.tol_disc, "floor": self.floor, "holds": self.holds,
                "negative_parts": {str(k): v for k, v in self.negative_parts.items()},
                "refinement_ok": self.refinement_ok}


def certify_dyson(config: DysonCheckConfig, potential, cutoff: CutoffProfile, box_L: float,
                  grids=(16, 24, 32), a_tilde: float | None = None, seed: int = 0) -> DysonVerdict:
    """Run the eigen-check across a refinement sequence and calibrate tol_disc.

    floor: |smallest eigenvalue| of the scatterer-free (pure kinetic) run on the finest grid.
    tol_disc = 4 floor + |lam(finest) - lam(previous)|, the last refinement change.
    The negative part must at least halve between the first and last grid, or already sit
    below the floor.
    """
    v = _potential_of(potential)
    if a_tilde is None:
        a_tilde = scattering_length_ode(v).a
    eig = {}
    for n in grids:
        eig[n] = verify_dyson(config, potential, cutoff, Lattice(box_L, n), a_tilde, seed).eigenvalue
    empty = DysonCheckConfig((), config.R, config.epsilon, config.kappa, config.U_choice)
    floor = max(abs(verify_dyson(empty, potential, cutoff, Lattice(box_L, grids[-1]), a_tilde,
                                 seed).eigenvalue), np.finfo(float).eps)
    fine, prev = grids[-1], grids[-2] if len(grids) > 1 else grids[-1]
    tol = 4.0 * floor + abs(eig[fine] - eig[prev])
    neg = {n: max(-lam, 0.0) for n, lam in eig.items()}
    refine_ok = neg[grids[-1]] <= max(neg[grids[0]] / 2.0, 4.0 * floor)
    return DysonVerdict(eig, tol, floor, eig[fine] >= -tol, neg, refine_ok)
