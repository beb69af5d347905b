"""Classical time-frequency baseline: DFT, Gabor spectrogram, ridge.

The windowed-transform route to instantaneous frequency carries an
irreducible time-frequency width trade-off (the Gaussian window
minimizes the product of second-moment widths at 1/(4*pi) in ordinary
frequency units).  This module provides that baseline for contrast with
the pointwise recovery in instafreq: forward DFT, the Gaussian-window
short-time transform, per-frame ridge extraction, and numeric width
measurements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AliasingError, DomainError
from .instafreq import FrequencyTrace
from .sigio import SampledSignal


@dataclass(frozen=True)
class Spectrum:
    """DFT coefficients with their frequency axis in Hz."""

    freqs: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "freqs", np.asarray(self.freqs, dtype=float))
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex))
        if self.freqs.shape != self.coeffs.shape:
            raise ValueError("freqs and coeffs must have equal length")


@dataclass(frozen=True)
class Spectrogram:
    """Time-frequency magnitude grid; rows are frames."""

    times: np.ndarray
    freqs: np.ndarray
    magnitudes: np.ndarray
    window_sigma: float

    def __post_init__(self):
        object.__setattr__(self, "times", np.asarray(self.times, dtype=float))
        object.__setattr__(self, "freqs", np.asarray(self.freqs, dtype=float))
        object.__setattr__(self, "magnitudes", np.asarray(self.magnitudes, dtype=float))
        if self.magnitudes.shape != (len(self.times), len(self.freqs)):
            raise ValueError("magnitude grid must be times x freqs")
        if np.any(self.magnitudes < 0):
            raise ValueError("magnitudes must be nonnegative")


def dft(signal: SampledSignal, centered: bool = False) -> Spectrum:
    """Forward DFT (no normalization; the inverse carries the 1/N).

    The frequency axis is in Hz, from 0 by default or from -fs/2 with
    centered=True.
    """
    coeffs = np.fft.fft(signal.samples)
    freqs = np.arange(len(coeffs)) / (len(coeffs) * signal.dx)
    if centered:
        coeffs = np.fft.fftshift(coeffs)
        freqs = np.fft.fftshift(np.fft.fftfreq(len(coeffs), signal.dx))
    return Spectrum(freqs, coeffs)


def inverse_dft(coeffs: np.ndarray) -> np.ndarray:
    """Inverse of dft's forward transform, normalized by 1/N."""
    return np.fft.ifft(np.asarray(coeffs, dtype=complex))


def gaussian_pair_check(sigma: float, n: int, span: float) -> float:
    """Max abs error between the sampled transform of exp(-sigma*x**2)
    and its closed-form angular-frequency transform
    exp(-omega**2/(4*sigma)) / sqrt(2*sigma).

    Raises AliasingError when the Gaussian tail at the span edges
    exceeds 1e-12.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if n < 2:
        raise ValueError("n must be at least 2")
    x0 = -span / 2.0
    dx = span / n
    edge = math.exp(-sigma * x0 * x0)
    if edge > 1e-12:
        raise AliasingError(
            f"Gaussian tail {edge:.3e} at the span edge exceeds 1e-12; widen the span"
        )
    x = x0 + dx * np.arange(n)
    f = np.exp(-sigma * x * x)
    coeffs = np.fft.fft(f)
    omega = 2.0 * math.pi * np.fft.fftfreq(n, dx)
    # Continuous-transform scaling in the unitary angular convention,
    # with the phase factor accounting for the grid origin.
    num = dx / math.sqrt(2.0 * math.pi) * np.exp(-1j * omega * x0) * coeffs
    ref = np.exp(-(omega ** 2) / (4.0 * sigma)) / math.sqrt(2.0 * sigma)
    return float(np.max(np.abs(num - ref)))


def _gaussian_window(sigma: float, dx: float) -> np.ndarray:
    half = int(round(4.0 * sigma / dx))
    u = dx * np.arange(-half, half + 1)
    w = np.exp(-(u ** 2) / (2.0 * sigma ** 2))
    return w / w.sum()


def stft(signal: SampledSignal, window_sigma: float, hop: int) -> Spectrogram:
    """Gaussian-window short-time transform (Gabor spectrogram).

    Frames are centered every *hop* samples; the unit-peak window is
    truncated at +-4 sigma and renormalized to unit sum, and parts of
    the window falling outside the signal see zeros.
    """
    if window_sigma <= 0:
        raise ValueError("window_sigma must be positive")
    if hop < 1:
        raise ValueError("hop must be at least 1")
    samples = signal.samples
    n = len(samples)
    if n < 1:
        raise DomainError("signal shorter than one frame")
    w = _gaussian_window(window_sigma, signal.dx)
    half = (len(w) - 1) // 2
    frame_len = len(w)
    centers = np.arange(0, n, hop)
    freqs = np.arange(frame_len // 2 + 1) / (frame_len * signal.dx)
    mags = np.empty((len(centers), len(freqs)))
    padded = np.zeros(n + 2 * half, dtype=complex)
    padded[half:half + n] = samples
    for row, c in enumerate(centers):
        frame = padded[c:c + frame_len] * w
        mags[row] = np.abs(np.fft.rfft(frame))
    times = signal.x0 + centers * signal.dx
    return Spectrogram(times, freqs, mags, window_sigma)


def ridge(sg: Spectrogram) -> FrequencyTrace:
    """Per-frame argmax frequency; ties break toward lower frequency.

    Frames with all-zero magnitude have no crest; they report 0 Hz and
    are marked as holes (the degeneracy flag).
    """
    if sg.magnitudes.size == 0:
        raise ValueError("empty spectrogram")
    omega = np.empty(len(sg.times))
    holes = set()
    for i, row in enumerate(sg.magnitudes):
        if np.all(row == 0.0):
            omega[i] = 0.0
            holes.add(i)
        else:
            omega[i] = sg.freqs[int(np.argmax(row))]
    return FrequencyTrace(sg.times, omega, frozenset(holes))


def _second_moment_width(axis: np.ndarray, weights: np.ndarray) -> float:
    total = float(np.sum(weights))
    if total <= 0:
        raise DomainError("cannot measure the width of an all-zero density")
    p = weights / total
    mean = float(np.sum(p * axis))
    var = float(np.sum(p * (axis - mean) ** 2))
    return math.sqrt(max(var, 0.0))


def uncertainty_product(
    window_sigma: float, n: int, span: float, window: str = "gaussian"
) -> tuple[float, float, float]:
    """Second-moment widths of a window and of its transform magnitude.

    Returns (sigma_x, sigma_f, product) with the frequency width
    measured on the ordinary-frequency (Hz) axis, where the Gaussian
    window attains the minimal product 1/(4*pi).  For the rectangular
    comparison window, window_sigma is its half-width.
    """
    if window_sigma <= 0:
        raise ValueError("window_sigma must be positive")
    x0 = -span / 2.0
    dx = span / n
    x = x0 + dx * np.arange(n)
    if window == "gaussian":
        w = np.exp(-(x ** 2) / (2.0 * window_sigma ** 2))
        edge = w[0]
        if edge > 1e-12:
            raise AliasingError(
                f"window tail {edge:.3e} at the span edge exceeds 1e-12; widen the span"
            )
    elif window == "rect":
        if window_sigma >= span / 2.0:
            raise AliasingError("rectangular window wider than the span")
        w = (np.abs(x) <= window_sigma).astype(float)
    else:
        raise ValueError("window must be 'gaussian' or 'rect'")
    sigma_x = _second_moment_width(x, w * w)
    coeffs = np.fft.fft(w)
    freqs = np.fft.fftfreq(n, dx)
    sigma_f = _second_moment_width(np.fft.fftshift(freqs), np.abs(np.fft.fftshift(coeffs)) ** 2)
    return sigma_x, sigma_f, sigma_x * sigma_f


def write_spectrum_csv(spec: Spectrum, path) -> None:
    """Serialize with header omega,re,im."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("omega,re,im\n")
        for f, c in zip(spec.freqs, spec.coeffs):
            fh.write(f"{float(f)!r},{c.real!r},{c.imag!r}\n")


def write_spectrogram_csv(sg: Spectrogram, path) -> None:
    """Serialize long-form with header x,omega,mag."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("x,omega,mag\n")
        for i, t in enumerate(sg.times):
            for j, f in enumerate(sg.freqs):
                fh.write(f"{float(t)!r},{float(f)!r},{float(sg.magnitudes[i, j])!r}\n")
