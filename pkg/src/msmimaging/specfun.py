"""Special functions: integer-order Bessel J, Struve H0/H1, sinc, 1F2 and
frequency-averaged Bessel terms.

Everything here is written on top of numpy only; scipy is used solely for
adaptive quadrature in :func:`bessel_j_avg`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

# below this |x| the ascending series is used, above it Miller's algorithm
SERIES_CUTOFF = 6.0
# Struve: ascending series below this, integral representation above
STRUVE_SERIES_CUTOFF = 8.0
_RESCALE = 1e200


@dataclass(frozen=True)
class FrequencyBand:
    """Closed wavenumber interval [k_lo, k_hi] in rad/m."""

    k_lo: float
    k_hi: float

    def __post_init__(self):
        if not (math.isfinite(self.k_lo) and math.isfinite(self.k_hi)):
            raise DomainError("band edges must be finite")
        if not 0 < self.k_lo < self.k_hi:
            raise DomainError(f"need 0 < k_lo < k_hi, got [{self.k_lo}, {self.k_hi}]")

    @property
    def width(self) -> float:
        return self.k_hi - self.k_lo

    def scaled(self, factor: float) -> "FrequencyBand":
        return FrequencyBand(self.k_lo * factor, self.k_hi * factor)


def _as_float_array(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("argument must be finite")
    return arr


def _series_orders(s_max, x):
    """J_0..J_{s_max} by the ascending series; x is 1-D with |x| small."""
    out = np.zeros((s_max + 1, x.size))
    half = 0.5 * x
    q = half * half
    with np.errstate(divide="ignore"):
        log_half = np.log(half)
    for s in range(s_max + 1):
        if s == 0:
            lead = np.ones_like(x)
        else:
            lead = np.where(half > 0, np.exp(s * log_half - math.lgamma(s + 1)), 0.0)
        term = lead.copy()
        acc = lead.copy()
        m = 0
        while True:
            m += 1
            term = -term * q / (m * (m + s))
            acc += term
            if not np.any(np.abs(term) > 1e-17 * np.maximum(np.abs(acc), 1e-300)):
                break
            if m > 200:
                break
        out[s] = acc
        if s > 0 and not np.any(lead):
            break
    return out


def _miller_orders(s_max, x):
    """J_0..J_{s_max} by normalized backward recurrence; x is 1-D, x > 0."""
    big = max(float(s_max), float(x.max()))
    start = int(big + 30 + 4 * math.sqrt(big))
    start += start % 2
    out = np.zeros((s_max + 1, x.size))
    inv = 2.0 / x
    f_next = np.zeros_like(x)
    f = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    for n in range(start, 0, -1):
        # f holds J_n, f_next holds J_{n+1}
        if n <= s_max:
            out[n] = f
        if n % 2 == 0:
            norm += 2.0 * f
        f_prev = n * inv * f - f_next
        f_next, f = f, f_prev
        big_mask = np.abs(f) > _RESCALE
        if big_mask.any():
            scale = np.where(big_mask, 1.0 / _RESCALE, 1.0)
            f *= scale
            f_next *= scale
            norm *= scale
            out *= scale
    # f is now J_0 (unnormalized)
    out[0] = f
    norm += f
    return out / norm


def bessel_j_orders(s_max: int, x) -> np.ndarray:
    """Return J_s(x) for s = 0..s_max stacked along a new leading axis."""
    if s_max < 0:
        raise DomainError("order must be nonnegative")
    arr = _as_float_array(x)
    shape = arr.shape
    flat = arr.ravel()
    ax = np.abs(flat)
    out = np.zeros((s_max + 1, flat.size))
    small = ax < SERIES_CUTOFF
    if small.any():
        out[:, small] = _series_orders(s_max, ax[small])
    if (~small).any():
        out[:, ~small] = _miller_orders(s_max, ax[~small])
    neg = flat < 0
    if neg.any():
        odd = np.arange(s_max + 1) % 2 == 1
        out[np.ix_(odd, neg)] *= -1.0
    return out.reshape((s_max + 1,) + shape)


def bessel_j(order: int, x):
    """Bessel function of the first kind J_order(x) for integer order >= 0."""
    if int(order) != order or order < 0:
        raise DomainError(f"order must be a nonnegative integer, got {order}")
    vals = bessel_j_orders(int(order), x)[int(order)]
    return float(vals) if np.ndim(vals) == 0 else vals


def _struve_series(order, x):
    half = 0.5 * x
    q = half * half
    term = half ** (order + 1) / (math.gamma(1.5) * math.gamma(order + 1.5))
    acc = term.copy()
    for m in range(1, 300):
        term = -term * q / ((m + 0.5) * (m + order + 0.5))
        acc += term
        if not np.any(np.abs(term) > 1e-17 * np.maximum(np.abs(acc), 1e-300)):
            break
    return acc


def _struve_integral(order, x):
    # H_0 = 2/pi int_0^{pi/2} sin(x cos t) dt
    # H_1 = 2x/pi int_0^{pi/2} sin(x cos t) sin^2 t dt
    n = 60 + int(math.ceil(x.max()))
    nodes, weights = np.polynomial.legendre.leggauss(n)
    t = 0.25 * math.pi * (nodes + 1.0)
    w = 0.25 * math.pi * weights
    integrand = np.sin(np.outer(x, np.cos(t)))
    if order == 1:
        integrand = integrand * np.sin(t) ** 2
        return 2.0 * x / math.pi * (integrand @ w)
    return 2.0 / math.pi * (integrand @ w)


def struve_h(order: int, x):
    """Struve function H_0 or H_1 for x >= 0."""
    if order not in (0, 1):
        raise DomainError(f"unsupported Struve order {order}; only 0 and 1")
    arr = _as_float_array(x)
    if np.any(arr < 0):
        raise DomainError("Struve argument must be nonnegative")
    flat = arr.ravel()
    out = np.zeros_like(flat)
    small = flat <= STRUVE_SERIES_CUTOFF
    if small.any():
        out[small] = _struve_series(order, flat[small])
    if (~small).any():
        out[~small] = _struve_integral(order, flat[~small])
    out = out.reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def sinc(t):
    """sin(t)/t with sinc(0) = 1 and exact zeros at nonzero multiples of pi."""
    arr = np.asarray(t, dtype=float)
    q = arr / math.pi
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(arr == 0, 1.0, np.sin(arr) / arr)
    out = np.where((q == np.rint(q)) & (arr != 0), 0.0, out)
    return float(out) if out.ndim == 0 else out


def bessel_j_avg(order: int, r: float, band: FrequencyBand, tol: float = 1e-13) -> float:
    """Mean of J_order(k r) over k in the band by composite Gauss-Legendre,
    doubling the panel count until two passes agree to ``tol``."""
    if r < 0:
        raise DomainError("distance must be nonnegative")
    if r == 0:
        return 1.0 if order == 0 else 0.0
    x, w = np.polynomial.legendre.leggauss(20)
    # start with panels about half an oscillation wide
    panels = max(1, int(math.ceil(band.width * r / math.pi)))
    prev = None
    for _ in range(12):
        edges = np.linspace(band.k_lo, band.k_hi, panels + 1)
        half = 0.5 * np.diff(edges)
        k = (edges[:-1] + half)[:, None] + half[:, None] * x[None, :]
        val = float(np.sum(half[:, None] * w[None, :] * bessel_j(order, k * r))) / band.width
        if prev is not None and abs(val - prev) <= tol:
            return val
        prev = val
        panels *= 2
    raise ConvergenceError("band average did not settle", abs(val - prev))


def gauss_legendre_band(band: FrequencyBand, r_max: float):
    """Nodes and weights (already divided by the band width) that average a
    function of k over the band; enough nodes for J_s(k r), r <= r_max."""
    n = 48 + 2 * int(math.ceil(band.width * r_max))
    x, w = np.polynomial.legendre.leggauss(n)
    k = band.k_lo + 0.5 * band.width * (x + 1.0)
    return k, 0.5 * w


def bessel_j_avg_orders(s_max: int, r, band: FrequencyBand) -> np.ndarray:
    """Band-averaged J_0..J_{s_max} at every distance in ``r`` (vectorized).

    Uses Gauss-Legendre in k with a node count scaled to the largest
    oscillation frequency, which is exact to rounding for smooth J_s(k r).
    """
    r = _as_float_array(r)
    if np.any(r < 0):
        raise DomainError("distance must be nonnegative")
    k, w = gauss_legendre_band(band, float(r.max()) if r.size else 0.0)
    acc = np.zeros((s_max + 1,) + r.shape)
    for kk, ww in zip(k, w):
        acc += ww * bessel_j_orders(s_max, kk * r)
    return acc


def _antiderivative_j0(k, r):
    t = k * r
    j0 = bessel_j(0, t)
    j1 = bessel_j(1, t)
    h0 = struve_h(0, t)
    h1 = struve_h(1, t)
    return k * j0 + 0.5 * math.pi * k * (j1 * h0 - j0 * h1)


def bessel_j0_avg_closed(r, band: FrequencyBand):
    """Band average of J_0(k r) through the Struve antiderivative of J_0."""
    arr = _as_float_array(r)
    if np.any(arr < 0):
        raise DomainError("distance must be nonnegative")
    out = np.ones_like(arr)
    pos = arr > 0
    if pos.any():
        rp = arr[pos]
        out[pos] = (_antiderivative_j0(band.k_hi, rp) - _antiderivative_j0(band.k_lo, rp)) / band.width
    return float(out) if out.ndim == 0 else out


def _hyp1f2_terms(a, b1, b2, x, max_terms, one, tiny):
    term = one
    acc = one
    biggest = abs(one)
    for n in range(max_terms):
        term = term * (a + n) / ((b1 + n) * (b2 + n)) * x / (n + 1)
        acc = acc + term
        biggest = max(biggest, abs(term))
        if term == 0 or abs(term) < tiny * abs(acc):
            return acc, biggest
    raise ConvergenceError("1F2 series did not converge", float(abs(term)))


def hyp1f2(a: float, b1: float, b2: float, x: float, max_terms: int = 500) -> float:
    """Generalized hypergeometric 1F2(a; b1, b2; x) by its power series.

    For large negative x the alternating terms cancel; when the largest term
    exceeds the sum by more than 1e4 the series is re-summed with enough
    extra working precision (mpmath floats) to absorb the cancellation.
    """
    for b in (b1, b2):
        if b <= 0 and b == int(b):
            raise DomainError(f"lower parameter {b} is a nonpositive integer")
    acc, biggest = _hyp1f2_terms(a, b1, b2, x, max_terms, 1.0, 1e-16)
    if acc != 0 and biggest <= 1e4 * abs(acc):
        return acc
    import mpmath

    lost = math.log2(biggest / abs(acc)) if acc != 0 else 200.0
    with mpmath.workprec(64 + int(lost) + 20):
        one = mpmath.mpf(1)
        acc, _ = _hyp1f2_terms(mpmath.mpf(a), mpmath.mpf(b1), mpmath.mpf(b2),
                               mpmath.mpf(x), max_terms, one, mpmath.mpf(2) ** -60)
        return float(acc)
