"""Scenes of small dielectric inhomogeneities and their Born far fields.

The far field of each target is the leading O(alpha^2) term of the small
volume expansion; the O(alpha^3) remainder is not modeled.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import noise
from .errors import DegenerateDataError, DomainError

EPS0 = 8.8541878128e-12  # F/m
MU0 = 1.25663706212e-6  # H/m
SPEED_OF_LIGHT = 299792458.0

MONOSTATIC = "monostatic"
MULTISTATIC = "multistatic-fixed-incidence"
KINDS = (MONOSTATIC, MULTISTATIC)

_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class Medium:
    eps0: float = EPS0
    mu0: float = MU0

    def __post_init__(self):
        if not (self.eps0 > 0 and self.mu0 > 0):
            raise DomainError("background permittivity and permeability must be positive")

    @property
    def wave_speed(self) -> float:
        return 1.0 / math.sqrt(self.eps0 * self.mu0)

    def wavenumber(self, freq_hz: float) -> float:
        return 2.0 * math.pi * freq_hz / self.wave_speed


VACUUM = Medium()


@dataclass(frozen=True)
class Inhomogeneity:
    """Target c + alpha * D with permittivity eps; ref_area is |D|."""

    center: tuple
    size_alpha: float
    ref_area: float
    eps: float

    def __post_init__(self):
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        if not (self.size_alpha > 0 and self.ref_area > 0 and self.eps > 0):
            raise DomainError("size, reference area and permittivity must be positive")

    @classmethod
    def disk(cls, center, radius, eps_r, medium: Medium = VACUUM):
        return cls(center, radius, math.pi, eps_r * medium.eps0)


@dataclass(frozen=True)
class Scene:
    medium: Medium = VACUUM
    targets: tuple = ()
    check_separation: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if not self.check_separation or len(self.targets) < 2:
            return
        alpha = max(t.size_alpha for t in self.targets)
        for i, a in enumerate(self.targets):
            for b in self.targets[i + 1:]:
                d = math.dist(a.center, b.center)
                if d == 0:
                    raise DomainError(f"two targets share the center {a.center}")
                if d < 4 * alpha:
                    warnings.warn(
                        f"targets at {a.center} and {b.center} are closer than 4*alpha",
                        stacklevel=3,
                    )

    @property
    def centers(self) -> np.ndarray:
        return np.array([t.center for t in self.targets], dtype=float).reshape(-1, 2)

    def weights(self) -> np.ndarray:
        return np.array([weight(t, self.medium) for t in self.targets])

    def amplitudes(self) -> np.ndarray:
        """Far-field amplitudes w_m / sqrt(eps0 mu0)."""
        return self.weights() / math.sqrt(self.medium.eps0 * self.medium.mu0)


def disk_cells(center, radius, eps_r, cell, medium: Medium = VACUUM) -> list:
    """Split a uniform disk into square cells of side ``cell``, each a small
    inhomogeneity; the Born far field of the disk is their sum."""
    cx, cy = center
    n = int(math.ceil(radius / cell))
    offs = (np.arange(-n, n) + 0.5) * cell
    out = []
    for dx in offs:
        for dy in offs:
            if dx * dx + dy * dy <= radius * radius:
                out.append(Inhomogeneity((cx + dx, cy + dy), cell, 1.0, eps_r * medium.eps0))
    return out


@dataclass(frozen=True)
class ApertureConfig:
    """Equidistant directions theta_n on the closed arc [theta1, thetaN]."""

    theta1: float
    thetaN: float
    n_dirs: int

    def __post_init__(self):
        if not 0 <= self.theta1 < self.thetaN <= 2 * math.pi + 1e-12:
            raise DomainError(
                f"aperture needs 0 <= theta1 < thetaN <= 2*pi, got [{self.theta1}, {self.thetaN}]"
            )
        if int(self.n_dirs) != self.n_dirs or self.n_dirs < 2:
            raise DomainError("n_dirs must be an integer >= 2")

    @classmethod
    def with_default_count(cls, theta1, thetaN, per_circle=128, minimum=16):
        """Keep the angular spacing of ``per_circle`` directions on 2*pi."""
        n = max(minimum, round(per_circle * (thetaN - theta1) / (2 * math.pi)))
        return cls(theta1, thetaN, n)

    @property
    def width(self) -> float:
        return self.thetaN - self.theta1

    @property
    def is_full(self) -> bool:
        return abs(self.width - 2 * math.pi) <= 1e-12

    def angles(self) -> np.ndarray:
        n = np.arange(self.n_dirs)
        return self.theta1 + n * (self.thetaN - self.theta1) / (self.n_dirs - 1)

    def directions(self) -> np.ndarray:
        th = self.angles()
        return np.stack([np.cos(th), np.sin(th)], axis=1)


@dataclass
class FarFieldData:
    kind: str
    aperture: ApertureConfig
    wavenumbers: np.ndarray
    values: np.ndarray
    incidence: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown data kind {self.kind!r}")
        self.wavenumbers = np.atleast_1d(np.asarray(self.wavenumbers, dtype=float))
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.aperture.n_dirs, self.wavenumbers.size):
            raise DomainError(
                f"values shape {self.values.shape} does not match "
                f"({self.aperture.n_dirs}, {self.wavenumbers.size})"
            )
        if np.any(np.diff(self.wavenumbers) <= 0):
            raise DomainError("wavenumbers must be strictly increasing")
        if self.kind == MULTISTATIC:
            if self.incidence is None:
                raise DomainError("multistatic data needs an incidence direction")
            self.incidence = _unit(self.incidence, "incidence")
        elif self.incidence is not None:
            raise DomainError("monostatic data carries no incidence direction")

    @property
    def n_freqs(self) -> int:
        return self.wavenumbers.size

    def replace_values(self, values) -> "FarFieldData":
        return FarFieldData(self.kind, self.aperture, self.wavenumbers.copy(),
                            values, None if self.incidence is None else self.incidence.copy())


def _unit(v, name):
    v = np.asarray(v, dtype=float).reshape(2)
    if abs(math.hypot(v[0], v[1]) - 1.0) > _UNIT_TOL:
        raise DomainError(f"{name} must be a unit vector, got {v.tolist()}")
    return v


def _dot(v, c):
    # explicit two-term dot keeps point and batched evaluation bit-identical
    return v[..., 0] * c[0] + v[..., 1] * c[1]


def weight(inh: Inhomogeneity, medium: Medium = VACUUM) -> float:
    """alpha^2 (eps_m - eps0) |D|."""
    return inh.size_alpha**2 * (inh.eps - medium.eps0) * inh.ref_area


def _check_k(k):
    if not (k > 0 and math.isfinite(k)):
        raise DomainError("wavenumber must be positive and finite")


def farfield_multistatic(xhat, theta_inc, k: float, scene: Scene) -> complex:
    xhat = _unit(xhat, "xhat")
    theta_inc = _unit(theta_inc, "theta_inc")
    _check_k(k)
    amps = scene.amplitudes()
    out = 0j
    for a, c in zip(amps, scene.centers):
        out += a * np.exp(1j * (k * _dot(theta_inc, c) - k * _dot(xhat, c)))
    return complex(out)


def farfield_monostatic(xhat, k: float, scene: Scene) -> complex:
    xhat = _unit(xhat, "xhat")
    return farfield_multistatic(xhat, -xhat, k, scene)


def synthesize(scene: Scene, aperture: ApertureConfig, wavenumbers: Sequence[float],
               kind: str = MONOSTATIC, incidence=None) -> FarFieldData:
    """Fill the (direction, wavenumber) matrix of Born far-field samples."""
    ks = np.atleast_1d(np.asarray(wavenumbers, dtype=float))
    for k in ks:
        _check_k(k)
    xh = aperture.directions()
    if kind == MONOSTATIC:
        if incidence is not None:
            raise DomainError("monostatic synthesis takes no incidence")
        inc_dot = None
    elif kind == MULTISTATIC:
        if incidence is None:
            raise DomainError("multistatic synthesis needs an incidence direction")
        incidence = _unit(incidence, "incidence")
    else:
        raise DomainError(f"unknown data kind {kind!r}")
    lam_min = 2 * math.pi / ks.max()
    for t in scene.targets:
        if t.size_alpha >= lam_min / 2:
            warnings.warn(f"target at {t.center} is not small (alpha >= lambda/2)", stacklevel=2)
    values = np.zeros((aperture.n_dirs, ks.size), dtype=complex)
    for a, c in zip(scene.amplitudes(), scene.centers):
        x_dot = _dot(xh, c)
        if kind == MONOSTATIC:
            inc_dot = _dot(-xh, c)
        else:
            inc_dot = np.full_like(x_dot, _dot(incidence, c))
        phase = ks[None, :] * inc_dot[:, None] - ks[None, :] * x_dot[:, None]
        values += a * np.exp(1j * phase)
    return FarFieldData(kind, aperture, ks, values, incidence)


def add_awgn(data: FarFieldData, snr_db: float, seed: int) -> FarFieldData:
    """Complex white Gaussian noise at ``snr_db`` relative to the mean signal
    power; each entry (n, p) draws from counter n * P + p of the seeded stream."""
    if math.isinf(snr_db) and snr_db > 0:
        return data.replace_values(data.values.copy())
    if data.values.size == 0:
        raise DegenerateDataError("no data to perturb")
    power = float(np.mean(np.abs(data.values) ** 2))
    if power == 0:
        raise DegenerateDataError("signal power is zero; SNR is undefined")
    noise_power = power / 10.0 ** (snr_db / 10.0)
    idx = np.arange(data.values.size, dtype=np.uint64).reshape(data.values.shape)
    g = noise.complex_normal(seed, idx)
    return data.replace_values(data.values + math.sqrt(noise_power / 2.0) * g)
