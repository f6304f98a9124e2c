"""Experiment pipeline: synthesize -> noise -> indicator -> prediction -> peaks."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import asymptotics as asy
from .errors import DomainError
from .sampling import INDICATORS, Grid, ImageMap
from .scattering import (
    MONOSTATIC,
    MULTISTATIC,
    VACUUM,
    ApertureConfig,
    FarFieldData,
    Inhomogeneity,
    Scene,
    add_awgn,
    disk_cells,
    synthesize,
)
from .specfun import FrequencyBand

METHODS = ("dsm", "mdsm", "msm", "mmsm")
MULTI_FREQUENCY = ("mdsm", "mmsm")
MULTISTATIC_METHODS = ("dsm", "mdsm")

SINGLE_FREQUENCY_HZ = (1.0e9,)
MULTI_FREQUENCIES_HZ = tuple(700e6 + 100e6 * p for p in range(7))
WAVELENGTH = VACUUM.wave_speed / 1.0e9
APERTURES = ((0.0, math.pi / 2), (0.0, math.pi), (0.0, 3 * math.pi / 2))


def single_disk_scene() -> Scene:
    return Scene(VACUUM, [Inhomogeneity.disk((0.31, 0.23), 0.1 * WAVELENGTH, 3.0)])


def three_disk_scene() -> Scene:
    centers = [(-0.51, 0.39), (0.41, 0.52), (0.19, -0.49)]
    return Scene(VACUUM, [Inhomogeneity.disk(c, 0.1 * WAVELENGTH, 3.0) for c in centers])


def extended_disk_scene(center=(0.21, 0.13), radius=0.5, cell=0.02) -> Scene:
    """A large uniform disk as a union of small Born cells."""
    return Scene(VACUUM, disk_cells(center, radius, 3.0, cell), check_separation=False)


@dataclass
class ExperimentSpec:
    scene: Scene
    frequencies: tuple
    method: str
    apertures: tuple = APERTURES
    grid: Grid = field(default_factory=Grid)
    incidence: Optional[float] = None  # angle in rad; None -> opposite the arc's middle
    snr_db: float = math.inf
    seed: int = 0
    n_dirs: Optional[int] = None
    predict: bool = True
    peak_count: Optional[int] = None
    peak_sep: float = 0.3
    ctl: asy.SeriesControl = asy.DEFAULT_CONTROL
    # reference points for peak matching; defaults to the scene's centers
    truth: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}; choose from {METHODS}")
        self.frequencies = tuple(float(f) for f in self.frequencies)
        if not self.frequencies or any(f <= 0 for f in self.frequencies):
            raise DomainError("frequencies must be positive")
        if self.method in MULTI_FREQUENCY and len(self.frequencies) < 2:
            raise DomainError(f"{self.method} needs at least 2 frequencies")
        if self.method not in MULTI_FREQUENCY and len(self.frequencies) != 1:
            raise DomainError(f"{self.method} takes exactly 1 frequency")
        self.apertures = tuple((float(a), float(b)) for a, b in self.apertures)
        if not self.apertures:
            raise DomainError("at least one aperture is required")

    @property
    def kind(self) -> str:
        return MULTISTATIC if self.method in MULTISTATIC_METHODS else MONOSTATIC

    def wavenumbers(self) -> np.ndarray:
        return np.array([self.scene.medium.wavenumber(f) for f in sorted(self.frequencies)])

    def aperture_config(self, theta1, thetaN) -> ApertureConfig:
        if self.n_dirs is None:
            return ApertureConfig.with_default_count(theta1, thetaN)
        return ApertureConfig(theta1, thetaN, self.n_dirs)

    def incidence_angle(self, theta1, thetaN) -> float:
        if self.incidence is not None:
            return self.incidence
        return 0.5 * (theta1 + thetaN) + math.pi

    def reference_points(self) -> np.ndarray:
        if self.truth is not None:
            return np.asarray(self.truth, dtype=float).reshape(-1, 2)
        return self.scene.centers


@dataclass
class PeakReport:
    peaks: list  # [(point, value)] by descending value
    matched: list  # [(peak index, target index, distance)]
    n_targets: int
    complete: bool = True

    @property
    def max_loc_error(self) -> float:
        if len(self.matched) < self.n_targets:
            return math.inf
        return max((d for _, _, d in self.matched), default=0.0)

    def n_within(self, tol: float) -> int:
        return sum(1 for _, _, d in self.matched if d <= tol)


@dataclass
class ApertureRun:
    aperture: ApertureConfig
    data: FarFieldData
    image: ImageMap
    prediction: Optional[asy.PredictionTerms]
    report: PeakReport


def find_peaks(image: ImageMap, count: int, min_sep: float):
    """Greedy maxima with disc suppression.

    Returns (peaks, complete) where peaks is [(point, value)] and complete is
    False when fewer than ``count`` peaks survive suppression.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    if min_sep < 0:
        raise DomainError("min_sep must be nonnegative")
    vals = image.values.ravel()
    pts = image.grid.points().reshape(-1, 2)
    order = np.argsort(-vals, kind="stable")
    alive = np.ones(vals.size, dtype=bool)
    peaks = []
    for idx in order:
        if not alive[idx]:
            continue
        peaks.append((pts[idx].copy(), float(vals[idx])))
        if len(peaks) == count:
            break
        alive &= np.hypot(*(pts - pts[idx]).T) > min_sep
    return peaks, len(peaks) == count


def match_peaks(peaks, centers) -> list:
    """Greedy nearest-pair assignment of peaks to true centers."""
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    pairs = []
    for i, (pt, _) in enumerate(peaks):
        for j, c in enumerate(centers):
            pairs.append((float(np.hypot(*(pt - c))), i, j))
    pairs.sort()
    used_p, used_t, out = set(), set(), []
    for d, i, j in pairs:
        if i in used_p or j in used_t:
            continue
        used_p.add(i)
        used_t.add(j)
        out.append((i, j, d))
    return sorted(out)


def peak_report(image: ImageMap, centers, count=None, min_sep=0.3) -> PeakReport:
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    peaks, complete = find_peaks(image, count or len(centers), min_sep)
    return PeakReport(peaks, match_peaks(peaks, centers), len(centers), complete)


def map_metrics(a: ImageMap, b: ImageMap):
    """(rms of a - b, max |a - b|, distance between the two argmax points)."""
    if a.grid != b.grid:
        raise DomainError("maps live on different grids")
    diff = a.values - b.values
    rms = float(np.sqrt(np.mean(diff**2)))
    dist = float(np.hypot(*(a.argmax_point() - b.argmax_point())))
    return rms, float(np.max(np.abs(diff))), dist


def predict(method, scene, wavenumbers, theta1, thetaN, grid, incidence=None,
            ctl=asy.DEFAULT_CONTROL) -> asy.PredictionTerms:
    ks = np.asarray(wavenumbers, dtype=float)
    if method == "msm":
        return asy.predict_msm(scene, ks[0], theta1, thetaN, grid, ctl)
    if method == "dsm":
        return asy.predict_dsm(scene, incidence, ks[0], theta1, thetaN, grid, ctl)
    band = FrequencyBand(ks[0], ks[-1])
    if method == "mmsm":
        return asy.predict_mmsm(scene, band, theta1, thetaN, grid, ctl)
    return asy.predict_mdsm(scene, incidence, band, theta1, thetaN, grid, ctl)


def simulate_data(spec: ExperimentSpec, theta1, thetaN) -> FarFieldData:
    ap = spec.aperture_config(theta1, thetaN)
    inc = None
    if spec.kind == MULTISTATIC:
        ang = spec.incidence_angle(theta1, thetaN)
        inc = np.array([math.cos(ang), math.sin(ang)])
    with warnings.catch_warnings():
        if not spec.scene.check_separation:
            warnings.simplefilter("ignore")
        data = synthesize(spec.scene, ap, spec.wavenumbers(), spec.kind, inc)
    return add_awgn(data, spec.snr_db, spec.seed)


def run_aperture(spec: ExperimentSpec, theta1, thetaN) -> ApertureRun:
    data = simulate_data(spec, theta1, thetaN)
    image = INDICATORS[spec.method](data, spec.grid)
    pred = None
    if spec.predict:
        pred = predict(spec.method, spec.scene, data.wavenumbers, theta1, thetaN,
                       spec.grid, data.incidence, spec.ctl)
    report = peak_report(image, spec.reference_points(), spec.peak_count, spec.peak_sep)
    return ApertureRun(data.aperture, data, image, pred, report)


def run_experiment(spec: ExperimentSpec) -> list:
    """One ApertureRun per aperture, in spec order."""
    return [run_aperture(spec, a, b) for a, b in spec.apertures]
