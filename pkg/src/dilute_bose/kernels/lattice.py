"""Scalar fields on an L-periodic cubic lattice, with the lattice Fourier transform."""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError


@dataclass(frozen=True)
class PeriodicLatticeField:
    box_L: float
    grid_n: int
    values: np.ndarray = field(repr=False)
    space: str = "position"

    def __post_init__(self):
        if self.space not in ("position", "momentum"):
            raise DomainError("space: must be 'position' or 'momentum'")
        if not self.box_L > 0 or self.grid_n < 2:
            raise DomainError("need box_L > 0 and grid_n >= 2")
        if self.values.shape != (self.grid_n,) * 3:
            raise DomainError("values: shape must be (grid_n, grid_n, grid_n)")

    @property
    def spacing(self) -> float:
        return self.box_L / self.grid_n

    @property
    def cell_volume(self) -> float:
        return self.spacing**3

    def with_values(self, values, space=None) -> "PeriodicLatticeField":
        return PeriodicLatticeField(self.box_L, self.grid_n, np.asarray(values),
                                    self.space if space is None else space)

    def to_momentum(self) -> "PeriodicLatticeField":
        """f^(p) = sum_x f(x) e^{-ipx} dV."""
        if self.space != "position":
            raise DomainError("field is already in momentum space")
        return self.with_values(np.fft.fftn(self.values) * self.cell_volume, "momentum")

    def to_position(self) -> "PeriodicLatticeField":
        """f(x) = |Lambda|^-1 sum_p f^(p) e^{ipx}."""
        if self.space != "momentum":
            raise DomainError("field is already in position space")
        return self.with_values(np.fft.ifftn(self.values) / self.cell_volume, "position")

    def total(self) -> float:
        """Lattice approximation of the integral over the box."""
        return float(np.sum(self.values).real * self.cell_volume)

    # ------------------------------------------------------------------ I/O
    def dump(self, path: str | os.PathLike) -> tuple[str, str]:
        """Write raw row-major float64 (complex128 for complex data) plus a JSON sidecar."""
        path = os.fspath(path)
        vals = np.ascontiguousarray(self.values)
        dtype = "complex128" if np.iscomplexobj(vals) else "float64"
        meta = {"box_L": self.box_L, "grid_n": self.grid_n, "space": self.space,
                "dtype": dtype, "order": "C"}
        _atomic_write(path, vals.astype(dtype).tobytes())
        _atomic_write(path + ".json", (json.dumps(meta, sort_keys=True, indent=2) + "\n").encode())
        return path, path + ".json"

    @classmethod
    def load(cls, path: str | os.PathLike) -> "PeriodicLatticeField":
        path = os.fspath(path)
        with open(path + ".json") as fh:
            meta = json.load(fh)
        n = int(meta["grid_n"])
        raw = np.fromfile(path, dtype=meta.get("dtype", "float64"))
        if raw.size != n**3:
            raise DomainError(f"{path}: expected {n**3} values, found {raw.size}")
        return cls(float(meta["box_L"]), n, raw.reshape((n, n, n)), meta["space"])


def _atomic_write(path: str, data: bytes) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass(frozen=True)
class Lattice:
    """Geometry of an n^3 grid on the torus of side L."""

    box_L: float
    grid_n: int

    def __post_init__(self):
        if not self.box_L > 0 or self.grid_n < 2:
            raise DomainError("need box_L > 0 and grid_n >= 2")

    @property
    def spacing(self) -> float:
        return self.box_L / self.grid_n

    @property
    def cell_volume(self) -> float:
        return self.spacing**3

    @property
    def p_max(self) -> float:
        """Largest resolved momentum along an axis (Nyquist)."""
        return np.pi / self.spacing

    def coords(self) -> np.ndarray:
        return np.arange(self.grid_n) * self.spacing

    def momenta(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        k = 2.0 * np.pi * np.fft.fftfreq(self.grid_n, d=self.spacing)
        return np.meshgrid(k, k, k, indexing="ij", sparse=True)

    def momentum_norm(self) -> np.ndarray:
        kx, ky, kz = self.momenta()
        return np.sqrt(kx**2 + ky**2 + kz**2)

    def torus_distance(self, y=(0.0, 0.0, 0.0)) -> np.ndarray:
        """d(x, y) on the torus for every lattice site x."""
        c = self.coords()
        parts = []
        for axis, yc in enumerate(y):
            d = np.abs(c - yc) % self.box_L
            d = np.minimum(d, self.box_L - d)
            shape = [1, 1, 1]
            shape[axis] = self.grid_n
            parts.append(d.reshape(shape) ** 2)
        return np.sqrt(parts[0] + parts[1] + parts[2])

    def field(self, values, space="position") -> PeriodicLatticeField:
        return PeriodicLatticeField(self.box_L, self.grid_n, np.asarray(values), space)

    def ball_offsets(self, radius: float) -> np.ndarray:
        """Integer site offsets (i, j, k) with |offset| * spacing <= radius, origin excluded."""
        m = int(np.floor(radius / self.spacing + 1e-12))
        r = np.arange(-m, m + 1)
        I, J, K = np.meshgrid(r, r, r, indexing="ij")
        sel = (I**2 + J**2 + K**2) * self.spacing**2 <= radius**2 * (1 + 1e-12)
        sel &= ~((I == 0) & (J == 0) & (K == 0))
        return np.stack([I[sel], J[sel], K[sel]], axis=1)
