"""Periodic spectral machinery on the uniform unit-interval grid.

All curve data in this package lives on the grid s_k = k/N with period 1.
Smooth periodic samples are identified with their trigonometric interpolant,
and every operation here (differentiation, antiderivatives, off-grid
evaluation, resampling) is exact for that interpolant.  The one deliberate
exception is :func:`fd_derivative`, a plain second-order centered difference
kept around as an independent check on the spectral pipeline.

Convention for even N: the Nyquist mode is represented as a pure cosine,
cos(pi*N*s), which matches the samples and keeps the interpolant real.  Its
derivative term vanishes at grid points, so grid derivatives simply zero the
Nyquist bin.
"""

from __future__ import annotations

import numpy as np

TAU = 2.0 * np.pi


def grid(n: int) -> np.ndarray:
    """Sample points s_k = k/n, k = 0..n-1."""
    if n < 4:
        raise ValueError("grid size must be at least 4, got %d" % n)
    return np.arange(n) / n


def loop_integral(values: np.ndarray) -> float:
    """Integral over one period; the trapezoid rule collapses to the mean."""
    return float(np.mean(values))


def derivative(values: np.ndarray) -> np.ndarray:
    """Grid samples of the interpolant's derivative."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    c = np.fft.rfft(values)
    k = np.arange(c.shape[0])
    c = c * (2j * np.pi * k)
    if n % 2 == 0:
        c[-1] = 0.0
    return np.fft.irfft(c, n)


def _coeffs(values: np.ndarray):
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    return n, np.fft.rfft(values)


def _trig_sum(n: int, c: np.ndarray, s, order: int):
    """Shared core: interpolant (order 0) or its derivative (order 1).

    c may be a truncated rfft array; only the harmonics present are summed,
    and the Nyquist correction applies only when the array is full length.
    """
    s = np.asarray(s, dtype=float)
    flat = np.atleast_1d(s).ravel()
    top = min((n + 1) // 2, c.shape[0])  # harmonics 1..top-1
    has_nyquist = n % 2 == 0 and c.shape[0] == n // 2 + 1
    k = np.arange(1, top)
    coef = c[1:top] if order == 0 else c[1:top] * (2j * np.pi * k)
    # Cap the phase matrix at a few million entries so bulk evaluation
    # (quadrature oracles, dense scans) cannot exhaust memory.
    out = np.empty(flat.shape[0])
    block = max(1, (1 << 22) // max(1, k.shape[0]))
    for lo in range(0, flat.shape[0], block):
        part = flat[lo:lo + block]
        phase = np.exp(2j * np.pi * part[:, None] * k[None, :])
        out[lo:lo + block] = (2.0 / n) * (phase * coef).real.sum(axis=1)
    if order == 0:
        out = out + c[0].real / n
        if has_nyquist:
            out = out + (c[n // 2].real / n) * np.cos(np.pi * n * flat)
    elif has_nyquist:
        out = out - (c[n // 2].real / n) * (np.pi * n) * np.sin(np.pi * n * flat)
    return out.reshape(s.shape) if s.ndim else float(out[0])


def evaluate(values: np.ndarray, s) -> np.ndarray:
    """Trigonometric interpolant of the samples, at arbitrary parameters."""
    n, c = _coeffs(values)
    return _trig_sum(n, c, s, 0)


def evaluate_derivative(values: np.ndarray, s) -> np.ndarray:
    """Derivative of the trigonometric interpolant at arbitrary parameters."""
    n, c = _coeffs(values)
    return _trig_sum(n, c, s, 1)


class Interpolant:
    """Reusable evaluator for one set of periodic samples.

    Computes the FFT once; repeated off-grid evaluation (root refinement,
    pair scans) then skips the transform.  Trailing harmonics below 1e-15
    of the spectral peak are dropped, which keeps evaluation proportional
    to the true bandwidth of the data rather than the grid size.
    """

    def __init__(self, values: np.ndarray):
        self.n, c = _coeffs(values)
        mag = np.abs(c)
        peak = float(np.max(mag)) if mag.size else 0.0
        alive = np.nonzero(mag > 1e-15 * peak)[0]
        keep = int(alive[-1]) + 1 if alive.size else 1
        self._c = c[:keep]

    def value(self, s):
        return _trig_sum(self.n, self._c, s, 0)

    def derivative(self, s):
        return _trig_sum(self.n, self._c, s, 1)


class DriftingInterpolant:
    """Evaluator for samples of base + drift*s + periodic part.

    This is the shape of an antiderivative such as z or w: the samples carry
    a linear ramp when the closure defect is nonzero.  Evaluation unwraps the
    ramp, so it is valid for any real s, not just [0, 1).
    """

    def __init__(self, samples: np.ndarray, drift: float):
        n = np.asarray(samples).shape[0]
        self.drift = float(drift)
        self._periodic = Interpolant(samples - self.drift * grid(n))

    def value(self, s):
        out = self.drift * np.asarray(s, dtype=float) + self._periodic.value(s)
        return out if np.ndim(s) else float(out)

    def derivative(self, s):
        out = self.drift + np.asarray(self._periodic.derivative(s))
        return out if np.ndim(s) else float(out)


def antiderivative(values: np.ndarray) -> tuple[np.ndarray, float]:
    """Grid samples of F(s) = integral of f from 0 to s, plus the mean drift.

    Returns (F, m) with F[k] = m*s_k + P(s_k) - P(0) where P is periodic and
    m is the full-period integral of f.  F[0] is exactly 0.  For even N the
    Nyquist mode integrates to a sine that vanishes at every grid point, so
    it drops out of the samples (off-grid callers want
    :func:`evaluate_antiderivative`).
    """
    n, c = _coeffs(values)
    mean = c[0].real / n
    k = np.arange(c.shape[0])
    d = np.zeros_like(c)
    d[1:] = c[1:] / (2j * np.pi * k[1:])
    if n % 2 == 0:
        d[-1] = 0.0
    p = np.fft.irfft(d, n)
    return mean * grid(n) + (p - p[0]), mean


def evaluate_antiderivative(values: np.ndarray, s) -> np.ndarray:
    """Integral of the interpolant from 0 to s, at arbitrary parameters."""
    n, c = _coeffs(values)
    f_samples, mean = antiderivative(values)
    p = f_samples - mean * grid(n)
    s = np.asarray(s, dtype=float)
    out = mean * s + np.asarray(evaluate(p, s))
    if n % 2 == 0:
        out = out + (c[n // 2].real / n) * np.sin(np.pi * n * s) / (np.pi * n)
    return out if s.ndim else float(out)


def fd_derivative(values: np.ndarray, drift: float = 0.0) -> np.ndarray:
    """Second-order centered difference, wrapping around the period.

    ``drift`` is the linear rate hidden in non-periodic samples such as an
    antiderivative with nonzero mean: the ramp drift*s is removed before
    differencing the periodic remainder and its exact rate is added back.
    Deliberately not spectral; see the module docstring.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    p = values - drift * grid(n)
    return (np.roll(p, -1) - np.roll(p, 1)) * (0.5 * n) + drift


def resample(values: np.ndarray, m: int) -> np.ndarray:
    """Samples of the band-limited projection of the interpolant on an m-grid.

    Upsampling is exact (the interpolant is unchanged); downsampling keeps
    the harmonics the coarse grid can represent and drops the rest.  The
    Nyquist bin needs care in both directions because it carries a half-share
    cosine in the real convention.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if m == n:
        return values.copy()
    if m < 4:
        raise ValueError("resample target must be at least 4, got %d" % m)
    c = np.fft.rfft(values)
    d = np.zeros(m // 2 + 1, dtype=complex)
    if m > n:
        d[: c.shape[0]] = c
        if n % 2 == 0:
            d[n // 2] *= 0.5  # old Nyquist splits into a genuine +/- pair
    else:
        d[:] = c[: d.shape[0]]
        if m % 2 == 0:
            d[-1] = 2.0 * c[m // 2].real  # only the cosine half survives
    return np.fft.irfft(d * (m / n), m)
