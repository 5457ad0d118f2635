"""Radial pair potentials and the integrable truncation used before the Fock-space step.

Units are hbar = 2m = 1.  A potential is a function of the pair distance r with a
finite range R0 (v(r) = 0 for r > R0).  Hard cores are represented by ``numpy.inf``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Mapping

import numpy as np

from .errors import DomainError, NumericalError

KINDS = ("hard_core", "step", "tabulated", "attractive_well")


@dataclass(frozen=True)
class RadialPotential:
    """A radial potential of finite range.

    ``params`` depends on ``kind``:

    * ``hard_core``: ``a`` (core radius, v = inf for r <= a)
    * ``step``: ``height``, ``width`` and optional ``inner``; v = height on [inner, width]
    * ``tabulated``: arrays ``r`` and ``v``, interpolated linearly, constant below r[0]
    * ``attractive_well``: ``lambda``; v = -2 lambda^2 / R0^2 on [0, R0]

    ``cut`` switches the potential off below a radius; the tail truncation produces it.
    """

    kind: str
    R0: float
    params: Mapping[str, Any] = field(default_factory=dict)
    cut: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"kind: unknown potential kind {self.kind!r}")
        if not np.isfinite(self.R0) or self.R0 < 0:
            raise DomainError(f"R0: range must be finite and non-negative, got {self.R0}")
        if self.cut < 0:
            raise DomainError("cut: must be non-negative")
        p = dict(self.params)
        if self.kind == "hard_core":
            a = float(p["a"])
            if a < 0 or a > self.R0 * (1 + 1e-12):
                raise DomainError("params.a: core radius must lie in [0, R0]")
            p["a"] = a
        elif self.kind == "step":
            h, w, inner = float(p["height"]), float(p["width"]), float(p.get("inner", 0.0))
            if not (np.isfinite(h) and h >= 0):
                raise DomainError("params.height: must be finite and non-negative")
            if not 0 <= inner <= w <= self.R0 * (1 + 1e-12):
                raise DomainError("params: need 0 <= inner <= width <= R0")
            p.update(height=h, width=w, inner=inner)
        elif self.kind == "tabulated":
            r = np.array(p["r"], dtype=float)
            v = np.array(p["v"], dtype=float)
            if r.ndim != 1 or r.shape != v.shape or r.size < 2:
                raise DomainError("params.r/params.v: need two 1-d arrays of equal length >= 2")
            if not (np.all(np.isfinite(r)) and np.all(np.isfinite(v))):
                raise DomainError("params.v: samples must be finite")
            if np.any(v < 0):
                raise DomainError("params.v: samples must be non-negative")
            if r[0] < 0 or np.any(np.diff(r) <= 0):
                raise DomainError("params.r: must be non-negative and strictly increasing")
            if r[-1] > self.R0 * (1 + 1e-12):
                raise DomainError("R0: table extends beyond the declared range")
            r.flags.writeable = False
            v.flags.writeable = False
            p.update(r=r, v=v)
        else:
            lam = float(p["lambda"])
            if not 0 <= lam < np.pi / 2:
                raise DomainError("params.lambda: need 0 <= lambda < pi/2")
            p["lambda"] = lam
        object.__setattr__(self, "params", p)

    # constructors -----------------------------------------------------------------
    @classmethod
    def hard_core(cls, a: float) -> "RadialPotential":
        return cls("hard_core", a, {"a": a})

    @classmethod
    def step(cls, height: float, width: float, inner: float = 0.0) -> "RadialPotential":
        return cls("step", width, {"height": height, "width": width, "inner": inner})

    @classmethod
    def tabulated(cls, r, v, R0: float | None = None) -> "RadialPotential":
        r = np.asarray(r, dtype=float)
        return cls("tabulated", float(r[-1]) if R0 is None else R0, {"r": r, "v": v})

    @classmethod
    def attractive_well(cls, lam: float, R0: float) -> "RadialPotential":
        return cls("attractive_well", R0, {"lambda": lam})

    @classmethod
    def zero(cls) -> "RadialPotential":
        return cls.step(0.0, 0.0)

    # evaluation -------------------------------------------------------------------
    @property
    def core_radius(self) -> float:
        """Radius of the hard core (0 if there is none)."""
        return self.params["a"] if self.kind == "hard_core" else 0.0

    @property
    def is_nonnegative(self) -> bool:
        return self.kind != "attractive_well" or self.params["lambda"] == 0.0

    def breakpoints(self) -> np.ndarray:
        """Radii where v or its derivative may jump."""
        if self.kind == "hard_core":
            pts = [self.params["a"]]
        elif self.kind == "step":
            pts = [self.params["inner"], self.params["width"]]
        elif self.kind == "tabulated":
            pts = list(self.params["r"])
        else:
            pts = [self.R0]
        pts = [x for x in pts if x > self.cut] + [self.cut]
        return np.unique(np.array(pts, dtype=float))

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise DomainError("r: distance must be non-negative")
        k, p = self.kind, self.params
        if k == "hard_core":
            out = np.where(r <= p["a"], np.inf, 0.0)
        elif k == "step":
            out = np.where((r >= p["inner"]) & (r <= p["width"]), p["height"], 0.0)
        elif k == "tabulated":
            out = np.interp(r, p["r"], p["v"], right=0.0)
            out = np.where(r > self.R0, 0.0, out)
        else:
            out = np.where(r <= self.R0, -2.0 * p["lambda"] ** 2 / self.R0**2, 0.0)
        if self.cut > 0:
            out = np.where(r < self.cut, 0.0, out)
        return out if out.ndim else float(out)

    eval = __call__

    # serialization ----------------------------------------------------------------
    def to_dict(self) -> dict:
        params = {k: (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in self.params.items()}
        d = {"kind": self.kind, "R0": self.R0, "params": params}
        if self.cut:
            d["cut"] = self.cut
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "RadialPotential":
        """Build a potential from its JSON form; errors name the offending key."""
        if not isinstance(d, Mapping):
            raise DomainError("<root>: potential description must be a JSON object")
        if "kind" not in d:
            raise DomainError("kind: missing")
        kind = d["kind"]
        params = d.get("params", {})
        if not isinstance(params, Mapping):
            raise DomainError("params: must be an object")
        required = {
            "hard_core": ("a",),
            "step": ("height", "width"),
            "tabulated": ("r", "v"),
            "attractive_well": ("lambda",),
        }.get(kind)
        if required is None:
            raise DomainError(f"kind: unknown potential kind {kind!r}")
        for key in required:
            if key not in params:
                raise DomainError(f"params.{key}: missing")
        try:
            if kind == "hard_core":
                R0 = float(d.get("R0", params["a"]))
            elif kind == "step":
                R0 = float(d.get("R0", params["width"]))
            elif kind == "tabulated":
                R0 = float(d.get("R0", params["r"][-1]))
            else:
                if "R0" not in d:
                    raise DomainError("R0: missing")
                R0 = float(d["R0"])
            return cls(kind, R0, params, float(d.get("cut", 0.0)))
        except (TypeError, ValueError, IndexError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"params: {exc}") from exc


# ----------------------------------------------------------------------------------
# tail integrals

def _r2_linear_integral(c0, c1, x0, lo, hi):
    """Integral of r^2 (c0 + c1 (r - x0)) over [lo, hi]."""
    d3 = (hi**3 - lo**3) / 3.0
    d4 = (hi**4 - lo**4) / 4.0
    return c0 * d3 + c1 * (d4 - x0 * d3)


def _tail_finite(p: RadialPotential, s: np.ndarray) -> np.ndarray:
    """Integral of r^2 v(r) over [s, inf) for potentials without a hard core."""
    s = np.maximum(s, p.cut)
    prm = p.params
    if p.kind == "step":
        lo = np.clip(s, prm["inner"], prm["width"])
        return prm["height"] * (prm["width"] ** 3 - lo**3) / 3.0
    if p.kind == "attractive_well":
        lo = np.minimum(s, p.R0)
        return -2.0 * prm["lambda"] ** 2 / p.R0**2 * (p.R0**3 - lo**3) / 3.0
    r, v = prm["r"], prm["v"]
    slopes = np.diff(v) / np.diff(r)
    seg = _r2_linear_integral(v[:-1], slopes, r[:-1], r[:-1], r[1:])
    # right-cumulative sums at nodes: after[i] = integral over [r_i, r_end]
    after = np.concatenate([np.cumsum(seg[::-1])[::-1], [0.0]])
    out = np.empty_like(s)
    below = s < r[0]
    out[below] = after[0] + v[0] * (r[0] ** 3 - s[below] ** 3) / 3.0
    beyond = s >= r[-1]
    out[beyond] = 0.0
    mid = ~(below | beyond)
    k = np.searchsorted(r, s[mid], side="right") - 1
    out[mid] = after[k + 1] + _r2_linear_integral(v[k], slopes[k], r[k], s[mid], r[k + 1])
    return out


def cumulative_tail(p: RadialPotential, s):
    """Return the tail budget  int_s^inf r^2 v(r) dr  (infinite if a hard core reaches [s, inf)).

    Every supported kind is piecewise polynomial in r, so the integral is evaluated
    in closed form segment by segment.
    """
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0):
        raise DomainError("s: must be non-negative")
    if p.kind == "hard_core":
        out = np.where(np.maximum(s_arr, p.cut) <= p.params["a"], np.inf, 0.0)
    else:
        out = _tail_finite(p, np.atleast_1d(s_arr)).reshape(s_arr.shape)
    return out if out.ndim else float(out)


# ----------------------------------------------------------------------------------
# truncation

@dataclass(frozen=True)
class TruncatedPotential:
    """A potential 0 <= v_tilde <= v whose tail budget int r^2 v_tilde is at most 2 phi."""

    base: RadialPotential
    potential: RadialPotential
    phi: float
    cut_radius_s: float
    epsilon: float | None = None
    tau: float | None = None
    construction: str = "unchanged"

    def __call__(self, r):
        return self.potential(r)

    @property
    def R0(self) -> float:
        return self.potential.R0

    @property
    def budget(self) -> float:
        """int_0^inf r^2 v_tilde(r) dr."""
        return cumulative_tail(self.potential, 0.0)


def _bisect_tail(p: RadialPotential, target: float, lo: float, hi: float, tol: float) -> float:
    """Find s in [lo, hi] with target - tol <= cumulative_tail(p, s) <= target.

    The tail is non-increasing in s; the returned point never overshoots the budget.
    """
    f_lo = cumulative_tail(p, lo) - target
    f_hi = cumulative_tail(p, hi) - target
    if f_lo < 0 or f_hi > 0:
        raise NumericalError("could not bracket the cut radius for the requested budget")
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        f_mid = cumulative_tail(p, mid) - target
        if -tol <= f_mid <= 0:
            return mid
        if f_mid > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4 * np.finfo(float).eps * max(hi, 1.0):
            break
    if cumulative_tail(p, hi) - target < -max(tol, 1e-8 * target):
        raise NumericalError("bisection for the cut radius did not reach the budget tolerance")
    return hi


def truncate(
    p: RadialPotential,
    phi: float,
    *,
    construction: str = "auto",
    epsilon: float | None = None,
    a_est: float | None = None,
    tol: float = 1e-10,
) -> TruncatedPotential:
    """Replace ``p`` by a smaller potential with  int_0^inf r^2 v_tilde <= 2 phi.

    * hard core: the explicit step  6 phi a^-3 theta(a - r)  (``construction="step"``),
      or the shell  min(v, tau)  on [(1-eps) a, a]  (``construction="shell"``).
    * finite potentials whose total budget reaches 2 phi: v theta(r - s) with the cut s
      found by bisection on the tail.
    * otherwise v is returned unchanged.
    """
    if not np.isfinite(phi) or phi <= 0:
        raise DomainError("phi: must be positive")
    if not p.is_nonnegative:
        raise DomainError("truncation is defined for non-negative potentials only")
    if p.kind == "hard_core":
        a = p.params["a"]
        if a == 0:
            return TruncatedPotential(p, p, phi, 0.0)
        if construction in ("auto", "step"):
            v_tilde = RadialPotential.step(6.0 * phi / a**3, a)
            return TruncatedPotential(p, replace(v_tilde, R0=p.R0), phi, 0.0, construction="step")
        if construction != "shell":
            raise DomainError(f"construction: unknown choice {construction!r}")
        a_ref = a if a_est is None else a_est
        eps = np.sqrt(a_ref / phi) if epsilon is None else epsilon
        if not 0 < eps <= 1:
            raise DomainError("epsilon: need 0 < epsilon <= 1")
        inner = (1.0 - eps) * a
        # the tail beyond the core vanishes, so the shell carries the whole budget 2 phi
        tau = 6.0 * phi / (a**3 - inner**3)
        v_tilde = RadialPotential("step", p.R0, {"height": tau, "width": a, "inner": inner})
        return TruncatedPotential(p, v_tilde, phi, inner, epsilon=eps, tau=tau, construction="shell")

    total = cumulative_tail(p, 0.0)
    if total < 2.0 * phi:
        return TruncatedPotential(p, p, phi, 0.0)
    s = _bisect_tail(p, 2.0 * phi, max(p.cut, 0.0), p.R0, tol)
    if p.kind == "step":
        prm = p.params
        v_tilde = RadialPotential("step", p.R0, {"height": prm["height"], "width": prm["width"],
                                                 "inner": max(s, prm["inner"])})
    else:
        v_tilde = replace(p, cut=s)
    return TruncatedPotential(p, v_tilde, phi, s, construction="tail")


def lj_like_table(core: float = 0.6, n: int = 400) -> RadialPotential:
    """Purely repulsive Lennard-Jones (WCA) potential sampled on [core, 2^(1/6)], in units sigma = eps = 1."""
    rc = 2.0 ** (1.0 / 6.0)
    r = np.linspace(core, rc, n)
    v = 4.0 * (r**-12 - r**-6) + 1.0
    v[-1] = 0.0
    return RadialPotential.tabulated(r, np.maximum(v, 0.0))
