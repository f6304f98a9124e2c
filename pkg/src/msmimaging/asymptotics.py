"""Asymptotic structure of the sampling indicators.

Each ``predict_*`` returns the concentrating part (a Bessel J_0 term per
target), the disturbing part (the aperture series of higher orders, which
vanishes on the full circle) and the normalized modulus of their sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError
from .sampling import Grid, ImageMap
from .scattering import Scene
from .specfun import (
    FrequencyBand,
    bessel_j,
    bessel_j0_avg_closed,
    bessel_j_orders,
    gauss_legendre_band,
    hyp1f2,
    sinc,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SeriesControl:
    """Truncation of the aperture series.

    Terms are dropped from the first order s beyond the Bessel argument at
    which |J_s| < tol; s_max is a hard cap.
    """

    tol: float = 1e-12
    s_max: int = 200

    def __post_init__(self):
        if not self.tol > 0:
            raise DomainError("tol must be positive")
        if self.s_max < 1:
            raise DomainError("s_max must be >= 1")

    def order_cap(self, x_max: float) -> int:
        # J_s(x) < 1e-13 once s > x + ~10 x^(1/3)
        need = int(x_max + 10.0 * x_max ** (1.0 / 3.0) + 10)
        return max(1, min(self.s_max, need))


DEFAULT_CONTROL = SeriesControl()


@dataclass
class PredictionTerms:
    grid: Grid
    phi: np.ndarray
    lam: np.ndarray
    combined: ImageMap


def _check_aperture(theta1, thetaN):
    if not theta1 < thetaN:
        raise DomainError(f"need theta1 < thetaN, got [{theta1}, {thetaN}]")


def _is_full(theta1, thetaN):
    return abs((thetaN - theta1) - TWO_PI) <= 1e-12


def _cos_exact(a):
    """cos with exact zeros at odd multiples of pi/2."""
    a = np.asarray(a, dtype=float)
    q = a / math.pi - 0.5
    return np.where(q == np.rint(q), 0.0, np.cos(a))


def polar_angle(d):
    """phi(z) with phi(0) = 0."""
    d = np.asarray(d, dtype=float)
    return np.where((d[..., 0] == 0) & (d[..., 1] == 0), 0.0, np.arctan2(d[..., 1], d[..., 0]))


def aperture_factors(s, phi, theta1, thetaN):
    """cos(s (thetaN + theta1 - 2 phi) / 2) * sinc(s (thetaN - theta1) / 2).

    ``s`` broadcasts against ``phi``. Returns exact zeros on the full circle.
    """
    s = np.asarray(s, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if _is_full(theta1, thetaN):
        return np.zeros(np.broadcast(s, phi).shape)
    cosf = _cos_exact(s * (thetaN + theta1 - 2.0 * phi) / 2.0)
    return cosf * sinc(s * (thetaN - theta1) / 2.0)


def series_term(s: int, z, k: float, theta1: float, thetaN: float) -> complex:
    """The s-th term 2 i^s J_s(k|z|) cos(.) sinc(.) of the aperture series."""
    z = np.asarray(z, dtype=float)
    fac = aperture_factors(s, polar_angle(z), theta1, thetaN)
    return complex(2 * 1j**s * bessel_j(s, k * math.hypot(*z)) * fac)


def _sum_series(bess, x, phi, theta1, thetaN, ctl):
    """2 sum_{s>=1} i^s bess_s cos(.) sinc(.) with per-point truncation.

    bess: (S+1, npts) real or complex order-stacked values, x: (npts,) the
    largest Bessel argument per point (used to locate the decaying regime).
    """
    S = bess.shape[0] - 1
    if S < 1 or _is_full(theta1, thetaN):
        return np.zeros(bess.shape[1:], dtype=complex)
    s = np.arange(S + 1, dtype=float)[:, None]
    small = (s > x[None, :]) & (np.abs(bess) < ctl.tol)
    small[0] = False
    first = np.where(small.any(axis=0), small.argmax(axis=0), S + 1)
    keep = s < first[None, :]
    fac = aperture_factors(s, phi[None, :], theta1, thetaN)
    ipow = (1j ** np.arange(S + 1))[:, None]
    terms = np.where(keep, ipow * bess * fac, 0.0)
    terms[0] = 0.0
    acc = np.zeros(bess.shape[1:], dtype=complex)
    for row in terms[1:]:
        acc = acc + row
    return 2.0 * acc


def _r_series_points(d, k, theta1, thetaN, ctl):
    d = np.asarray(d, dtype=float).reshape(-1, 2)
    rho = np.hypot(d[:, 0], d[:, 1])
    x = k * rho
    S = ctl.order_cap(float(x.max()) if x.size else 0.0)
    bess = bessel_j_orders(S, x)
    return _sum_series(bess, x, polar_angle(d), theta1, thetaN, ctl)


def r_series(z, k: float, theta1: float, thetaN: float, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """R(z, k; theta1, thetaN): the aperture remainder of the Jacobi-Anger sum."""
    _check_aperture(theta1, thetaN)
    return complex(_r_series_points(z, k, theta1, thetaN, ctl)[0])


def band_avg_orders(s_max: int, r, band: FrequencyBand) -> np.ndarray:
    """Band averages of J_0..J_{s_max}(k r) through the exact recurrence
    int J_{s+1} = int J_{s-1} - 2 [J_s(k r)]_{k_lo}^{k_hi} / r,
    seeded with the Struve closed form for s = 0 and -[J_0(k r)] / r for s = 1."""
    r = np.asarray(r, dtype=float)
    flat = r.ravel()
    out = np.zeros((s_max + 1, flat.size))
    out[0] = np.atleast_1d(bessel_j0_avg_closed(flat, band))
    pos = flat > 0
    if s_max >= 1 and pos.any():
        rp = flat[pos]
        jhi = bessel_j_orders(s_max, band.k_hi * rp)
        jlo = bessel_j_orders(s_max, band.k_lo * rp)
        diff = (jhi - jlo) / (rp * band.width)
        prev, cur = out[0, pos], -diff[0]
        out[1, pos] = cur
        for s in range(1, s_max):
            nxt = prev - 2.0 * diff[s]
            out[s + 1, pos] = nxt
            prev, cur = cur, nxt
    return out.reshape((s_max + 1,) + r.shape)


def r_tilde_series(z, band: FrequencyBand, theta1: float, thetaN: float,
                   ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """R~: the aperture series with J_s replaced by its band average."""
    _check_aperture(theta1, thetaN)
    return complex(_r_tilde_points(z, band, theta1, thetaN, ctl)[0])


def _r_tilde_points(d, band, theta1, thetaN, ctl):
    d = np.asarray(d, dtype=float).reshape(-1, 2)
    rho = np.hypot(d[:, 0], d[:, 1])
    x = band.k_hi * rho
    S = ctl.order_cap(float(x.max()) if x.size else 0.0)
    bess = band_avg_orders(S, rho, band)
    return _sum_series(bess, x, polar_angle(d), theta1, thetaN, ctl)


def aperture_integral(z, k: float, theta1: float, thetaN: float) -> complex:
    """(1/(thetaN - theta1)) int_{theta1}^{thetaN} exp(i k xhat(theta) . z) dtheta."""
    _check_aperture(theta1, thetaN)
    z = np.asarray(z, dtype=float)
    rho = math.hypot(z[0], z[1])
    if rho == 0:
        return 1.0 + 0j
    phi = float(polar_angle(z))
    x = k * rho
    lim = 200 + int(4 * x)
    opts = dict(epsabs=1e-13, epsrel=1e-13, limit=lim)
    re, _ = integrate.quad(lambda t: math.cos(x * math.cos(t - phi)), theta1, thetaN, **opts)
    im, _ = integrate.quad(lambda t: math.sin(x * math.cos(t - phi)), theta1, thetaN, **opts)
    return complex(re, im) / (thetaN - theta1)


def _normalized_modulus(grid, field):
    mag = np.abs(field)
    peak = mag.max()
    if peak == 0:
        raise DomainError("prediction vanishes on the whole grid")
    return ImageMap(grid, mag / peak)


def _offsets(grid, c):
    return grid.points().reshape(-1, 2) - np.asarray(c)[None, :]


def _require_targets(scene):
    if not scene.targets:
        raise DomainError("prediction needs at least one target")


def predict_msm(scene: Scene, k: float, theta1: float, thetaN: float, grid: Grid,
                ctl: SeriesControl = DEFAULT_CONTROL) -> PredictionTerms:
    _require_targets(scene)
    _check_aperture(theta1, thetaN)
    shape = (grid.nx, grid.ny)
    phi = np.zeros(grid.nx * grid.ny, dtype=complex)
    lam = np.zeros_like(phi)
    for w, c in zip(scene.weights(), scene.centers):
        d = _offsets(grid, c)
        rho = np.hypot(d[:, 0], d[:, 1])
        x = 2 * k * rho
        bess = bessel_j_orders(ctl.order_cap(float(x.max())), x)
        phi = phi + w * bess[0]
        lam = lam + w * _sum_series(bess, x, polar_angle(d), theta1, thetaN, ctl)
    phi, lam = phi.reshape(shape), lam.reshape(shape)
    return PredictionTerms(grid, phi, lam, _normalized_modulus(grid, phi + lam))


def predict_mmsm(scene: Scene, band: FrequencyBand, theta1: float, thetaN: float, grid: Grid,
                 ctl: SeriesControl = DEFAULT_CONTROL, closed_form: bool = True) -> PredictionTerms:
    """``band`` holds the measured wavenumbers; the terms use the doubled band.

    closed_form=True takes the s = 0 average from the Struve antiderivative
    (the recurrence seed); False integrates it by Gauss-Legendre instead.
    """
    _require_targets(scene)
    _check_aperture(theta1, thetaN)
    band2 = band.scaled(2.0)
    shape = (grid.nx, grid.ny)
    phi = np.zeros(grid.nx * grid.ny, dtype=complex)
    lam = np.zeros_like(phi)
    for w, c in zip(scene.weights(), scene.centers):
        d = _offsets(grid, c)
        rho = np.hypot(d[:, 0], d[:, 1])
        x = band2.k_hi * rho
        S = ctl.order_cap(float(x.max()))
        bess = band_avg_orders(S, rho, band2)
        if not closed_form:
            bess[0] = gl_band_avg_orders(0, rho, band2)[0].real
        phi = phi + w * bess[0]
        lam = lam + w * _sum_series(bess, x, polar_angle(d), theta1, thetaN, ctl)
    phi, lam = phi.reshape(shape), lam.reshape(shape)
    return PredictionTerms(grid, phi, lam, _normalized_modulus(grid, phi + lam))


def predict_dsm(scene: Scene, incidence, k: float, theta1: float, thetaN: float, grid: Grid,
                ctl: SeriesControl = DEFAULT_CONTROL) -> PredictionTerms:
    _require_targets(scene)
    _check_aperture(theta1, thetaN)
    inc = _unit(incidence)
    shape = (grid.nx, grid.ny)
    phi = np.zeros(grid.nx * grid.ny, dtype=complex)
    lam = np.zeros_like(phi)
    for w, c in zip(scene.weights(), scene.centers):
        src = w * np.exp(1j * k * (inc @ c))
        d = _offsets(grid, c)
        rho = np.hypot(d[:, 0], d[:, 1])
        x = k * rho
        bess = bessel_j_orders(ctl.order_cap(float(x.max())), x)
        phi = phi + src * bess[0]
        lam = lam + src * _sum_series(bess, x, polar_angle(d), theta1, thetaN, ctl)
    phi, lam = phi.reshape(shape), lam.reshape(shape)
    return PredictionTerms(grid, phi, lam, _normalized_modulus(grid, phi + lam))


def _unit(v):
    v = np.asarray(v, dtype=float).reshape(2)
    if abs(math.hypot(*v) - 1.0) > 1e-12:
        raise DomainError("incidence must be a unit vector")
    return v


def gl_band_avg_orders(s_max: int, r, band: FrequencyBand, phase_shift: float = 0.0) -> np.ndarray:
    """(1/(k_hi - k_lo)) int exp(i k phase_shift) J_s(k r) dk for s = 0..s_max,
    by Gauss-Legendre in k (complex result)."""
    r = np.asarray(r, dtype=float)
    r_eff = (float(r.max()) if r.size else 0.0) + abs(phase_shift)
    k, w = gauss_legendre_band(band, r_eff)
    acc = np.zeros((s_max + 1,) + r.shape, dtype=complex)
    r_max = float(r.max()) if r.size else 0.0
    for kk, ww in zip(k, w):
        # orders beyond the cap are below 1e-13 at this node
        cap = min(s_max, DEFAULT_CONTROL.order_cap(kk * r_max))
        acc[: cap + 1] += ww * np.exp(1j * kk * phase_shift) * bessel_j_orders(cap, kk * r)
    return acc


def predict_mdsm(scene: Scene, incidence, band: FrequencyBand, theta1: float, thetaN: float,
                 grid: Grid, ctl: SeriesControl = DEFAULT_CONTROL) -> PredictionTerms:
    _require_targets(scene)
    _check_aperture(theta1, thetaN)
    inc = _unit(incidence)
    shape = (grid.nx, grid.ny)
    phi = np.zeros(grid.nx * grid.ny, dtype=complex)
    lam = np.zeros_like(phi)
    for w, c in zip(scene.weights(), scene.centers):
        d = _offsets(grid, c)
        rho = np.hypot(d[:, 0], d[:, 1])
        x = band.k_hi * rho
        S = ctl.order_cap(float(x.max()))
        bess = gl_band_avg_orders(S, rho, band, phase_shift=float(inc @ c))
        phi = phi + w * bess[0]
        lam = lam + w * _sum_series(bess, x, polar_angle(d), theta1, thetaN, ctl)
    phi, lam = phi.reshape(shape), lam.reshape(shape)
    return PredictionTerms(grid, phi, lam, _normalized_modulus(grid, phi + lam))


def mdsm_center_value(c, psi: float, band: FrequencyBand, t_max: int = 40,
                      tail_tol: float = 1e-8) -> complex:
    """Concentrating MDSM term at a target center, unit weight, through 1F2.

    Expands exp(i k |c| cos psi) by Jacobi-Anger and integrates each
    J_t(k |c|) over the band in closed form:
    int_0^K J_t(k r) dk = (r/2)^t K^(t+1) / (t+1)! 1F2((t+1)/2; t+1, (t+3)/2; -K^2 r^2/4).
    """
    if t_max < 1:
        raise DomainError("t_max must be >= 1")
    r = float(np.hypot(*np.asarray(c, dtype=float)))
    k1, kP = band.k_lo, band.k_hi

    def prim(t, K):
        # int_0^K J_t(k r) dk
        lead = K ** (t + 1) * math.exp(t * math.log(r / 2) - math.lgamma(t + 2)) if r > 0 else 0.0
        if t == 0:
            lead = K
        return lead * hyp1f2((t + 1) / 2, t + 1, (t + 3) / 2, -0.25 * K * K * r * r)

    phi1 = prim(0, kP) - prim(0, k1)
    phi2 = 0j
    if r > 0:
        for t in range(1, t_max + 1):
            phi2 += 2 * 1j**t * math.cos(t * psi) * (prim(t, kP) - prim(t, k1))
        # |int J_t| <= (k_hi - k_lo) max |J_t| <= width (kP r / 2)^t / t!
        q = kP * r / 2
        tail = 2 * band.width * math.exp((t_max + 1) * math.log(q) - math.lgamma(t_max + 2)) if q > 0 else 0.0
        ratio = q / (t_max + 2)
        tail = tail / (1 - ratio) if ratio < 1 else math.inf
        if tail > tail_tol * band.width:
            raise ConvergenceError(f"t-series tail bound too large at t_max={t_max}; raise t_max", tail)
    return complex(phi1 + phi2) / band.width
