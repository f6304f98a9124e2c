"""Direct and monostatic sampling indicators on a rectangular grid."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, DomainError
from .scattering import MONOSTATIC, MULTISTATIC, FarFieldData


@dataclass(frozen=True)
class Grid:
    """nx x ny sampling points on the square of side ``side`` around ``center``."""

    center: tuple = (0.0, 0.0)
    side: float = 2.0
    nx: int = 101
    ny: int = 101

    def __post_init__(self):
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        if self.nx < 2 or self.ny < 2:
            raise DomainError("grid needs at least 2 points per axis")
        if not self.side > 0:
            raise DomainError("grid side must be positive")

    @property
    def xs(self) -> np.ndarray:
        return self.center[0] + (np.arange(self.nx) / (self.nx - 1) - 0.5) * self.side

    @property
    def ys(self) -> np.ndarray:
        return self.center[1] + (np.arange(self.ny) / (self.ny - 1) - 0.5) * self.side

    @property
    def spacing(self) -> float:
        return self.side / (self.nx - 1)

    def points(self) -> np.ndarray:
        """(nx, ny, 2) array of cell centers indexed [i, j]."""
        X, Y = np.meshgrid(self.xs, self.ys, indexing="ij")
        return np.stack([X, Y], axis=-1)

    def point(self, i: int, j: int) -> np.ndarray:
        return np.array([self.xs[i], self.ys[j]])


@dataclass
class ImageMap:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.nx, self.grid.ny):
            raise DomainError(f"map shape {self.values.shape} does not match the grid")

    def argmax(self) -> tuple:
        """(i, j) of the maximum; ties go to the lowest row-major index."""
        return np.unravel_index(int(np.argmax(self.values)), self.values.shape)

    def argmax_point(self) -> np.ndarray:
        return self.grid.point(*self.argmax())


def inner_product(a, b) -> complex:
    """(1/N) sum_n a_n conj(b_n)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise DomainError(f"inner product needs equal nonempty vectors, got {a.shape} and {b.shape}")
    return complex(np.sum(a * np.conj(b)) / a.size)


def _raw_map(data: FarFieldData, grid: Grid, p: int, factor: float) -> np.ndarray:
    """<u(., k_p), exp(-i factor k_p xhat . z)> at every grid point."""
    xh = data.aperture.directions()
    pts = grid.points().reshape(-1, 2)
    k = data.wavenumbers[p]
    # conj of the test function exp(-i f k xhat.z)
    test_conj = np.exp(1j * factor * k * (xh @ pts.T))
    vals = data.values[:, p] @ test_conj / xh.shape[0]
    return vals.reshape(grid.nx, grid.ny)


def _normalized(raw: np.ndarray, p: int) -> np.ndarray:
    peak = np.max(np.abs(raw))
    if peak == 0:
        raise DegenerateDataError(f"frequency slice {p} is identically zero")
    return raw / peak


def normalized_maps(data: FarFieldData, grid: Grid, factor: float) -> np.ndarray:
    """Complex per-frequency maps, each divided by its own grid maximum."""
    return np.stack([_normalized(_raw_map(data, grid, p, factor), p) for p in range(data.n_freqs)])


def combine_normalized(maps: np.ndarray) -> np.ndarray:
    """Modulus of the average of per-frequency normalized maps (fixed p order)."""
    acc = np.zeros(maps.shape[1:], dtype=complex)
    for m in maps:
        acc = acc + m
    return np.abs(acc / maps.shape[0])


def _require(data: FarFieldData, kind: str, single: bool):
    if data.kind != kind:
        raise DomainError(f"expected {kind} data, got {data.kind}")
    if single and data.n_freqs != 1:
        raise DomainError(f"single-frequency indicator needs 1 wavenumber, got {data.n_freqs}")
    if not single and data.n_freqs < 2:
        raise DomainError("multi-frequency indicator needs at least 2 wavenumbers")


def _single(data, grid, factor):
    raw = np.abs(_raw_map(data, grid, 0, factor))
    peak = raw.max()
    if peak == 0:
        raise DegenerateDataError("far-field data are identically zero")
    return ImageMap(grid, raw / peak)


def indicator_msm(data: FarFieldData, grid: Grid) -> ImageMap:
    _require(data, MONOSTATIC, single=True)
    return _single(data, grid, 2.0)


def msm_full_aperture(data: FarFieldData, grid: Grid) -> ImageMap:
    """The monostatic indicator for data on the whole circle."""
    if not data.aperture.is_full:
        raise DomainError("data do not cover the full aperture")
    _require(data, MONOSTATIC, single=True)
    return _single(data, grid, 2.0)


def indicator_mmsm(data: FarFieldData, grid: Grid) -> ImageMap:
    _require(data, MONOSTATIC, single=False)
    return ImageMap(grid, combine_normalized(normalized_maps(data, grid, 2.0)))


def indicator_dsm(data: FarFieldData, grid: Grid) -> ImageMap:
    _require(data, MULTISTATIC, single=True)
    return _single(data, grid, 1.0)


def indicator_mdsm(data: FarFieldData, grid: Grid) -> ImageMap:
    _require(data, MULTISTATIC, single=False)
    return ImageMap(grid, combine_normalized(normalized_maps(data, grid, 1.0)))


INDICATORS = {
    "msm": indicator_msm,
    "mmsm": indicator_mmsm,
    "dsm": indicator_dsm,
    "mdsm": indicator_mdsm,
}
