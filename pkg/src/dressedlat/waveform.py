"""Ramped frequency combs: multi-tone synthesis, Fourier analysis, moving potentials.

A :class:`CombRamp` repeats a sawtooth in which every component sweeps up to
its neighbour's starting frequency over the period ``t_n``. The synthesized
phase is the closed-form integral of that sawtooth, so it is continuous across
ramp resets unless ``phase_mode="reset"`` is requested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .dressing import AdiabaticPotentialGrid, RfComb, unfold_adiabatic
from .physcore import AtomSpecies, FieldModel

MIN_SAMPLES_PER_CYCLE = 8


@dataclass(frozen=True)
class Envelope:
    """Sinusoidal modulation: ``amplitude * (1 + am_depth sin(am_omega t + am_phase))``.

    Used both as an amplitude envelope and (with ``amplitude`` as the
    modulation depth in radians) as a phase-offset law.
    """

    amplitude: float = 1.0
    am_depth: float = 0.0
    am_omega: float = 0.0
    am_phase: float = 0.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.amplitude * (1.0 + self.am_depth * np.sin(self.am_omega * t + self.am_phase))


@dataclass(frozen=True)
class PhaseWobble:
    """Phase offset ``depth * sin(omega t)`` in radians."""

    depth: float = 0.0
    omega: float = 0.0

    def __call__(self, t):
        return self.depth * np.sin(self.omega * np.asarray(t, dtype=float))


@dataclass(frozen=True)
class CombRamp:
    base: RfComb
    t_n: float
    amplitudes: Optional[tuple[Callable, ...]] = None
    phase_offsets: Optional[tuple[Callable, ...]] = None
    phase_mode: str = "continuous"
    static: bool = False

    def __post_init__(self):
        if not self.t_n > 0:
            raise ValueError("ramp period t_n must be positive")
        if self.phase_mode not in ("continuous", "reset"):
            raise ValueError("phase_mode is 'continuous' or 'reset'")
        for name in ("amplitudes", "phase_offsets"):
            v = getattr(self, name)
            if v is not None and len(v) != len(self.base):
                raise ValueError(f"{name} needs one entry per comb component")

    @property
    def sweep(self) -> np.ndarray:
        """Frequency excursion per period for every component (rad/s).

        The top component has no upper neighbour; it sweeps by the mean
        spacing so a uniform comb maps onto itself after one period.
        """
        if self.static or len(self.base) == 1:
            return np.zeros(len(self.base))
        gaps = np.diff(self.base.omega)
        return np.append(gaps, gaps.mean())

    @property
    def max_frequency(self) -> np.ndarray:
        """Supremum of each component's instantaneous frequency (rad/s)."""
        return self.base.omega + self.sweep

    def comb_at(self, t: float) -> RfComb:
        return self.base.with_omegas(instantaneous_frequencies(self, t))


def _fold(ramp: CombRamp, t):
    t = np.asarray(t, dtype=float)
    k = np.floor(t / ramp.t_n)
    return k, t - k * ramp.t_n


def instantaneous_frequencies(ramp: CombRamp, t):
    """omega_n(t) = omega_n(0) + sweep_n (t mod t_n) / t_n, shape ``(N,) + shape(t)``."""
    _, tau = _fold(ramp, t)
    w0 = ramp.base.omega.reshape((-1,) + (1,) * tau.ndim)
    sw = ramp.sweep.reshape(w0.shape)
    return w0 + sw * (tau / ramp.t_n)


def ramp_phase(ramp: CombRamp, t):
    """Integrated phase of every component (without phase offsets), shape ``(N,) + shape(t)``."""
    k, tau = _fold(ramp, t)
    t = np.asarray(t, dtype=float)
    w0 = ramp.base.omega.reshape((-1,) + (1,) * t.ndim)
    rate = (ramp.sweep / ramp.t_n).reshape(w0.shape)
    if ramp.phase_mode == "reset":
        return w0 * tau + 0.5 * rate * tau**2
    return w0 * t + 0.5 * rate * (k * ramp.t_n**2 + tau**2)


@dataclass
class WaveformSignal:
    sample_rate: float  # Hz
    samples: np.ndarray
    start_time: float = 0.0
    description: str = ""

    @property
    def times(self) -> np.ndarray:
        return self.start_time + np.arange(self.samples.size) / self.sample_rate

    def __len__(self) -> int:
        return self.samples.size


def synthesize(
    ramp: CombRamp, duration: float, sample_rate: float, start_time: float = 0.0
) -> WaveformSignal:
    """Sum of sines following the ramp, sampled at ``sample_rate`` (Hz)."""
    limit_hz = ramp.max_frequency / (2 * math.pi)
    bad = [i + 1 for i, f in enumerate(limit_hz) if sample_rate < MIN_SAMPLES_PER_CYCLE * f * (1 - 1e-12)]
    if bad:
        raise ValueError(
            f"sample rate {sample_rate:g} Hz gives fewer than {MIN_SAMPLES_PER_CYCLE} samples per cycle "
            f"for component(s) {bad} (up to {max(limit_hz[i - 1] for i in bad):g} Hz)"
        )
    n = int(round(duration * sample_rate))
    if n < 1:
        raise ValueError("duration shorter than one sample")
    t = start_time + np.arange(n) / sample_rate
    phase = ramp_phase(ramp, t)
    out = np.zeros(n)
    for i in range(len(ramp.base)):
        ph = phase[i]
        if ramp.phase_offsets is not None:
            ph = ph + ramp.phase_offsets[i](t)
        amp = 1.0 if ramp.amplitudes is None else ramp.amplitudes[i](t)
        out += amp * np.sin(ph)
    desc = (
        f"comb_hz={[float(w / (2 * math.pi)) for w in ramp.base.omegas]};t_n_s={ramp.t_n!r};"
        f"phase_mode={ramp.phase_mode}"
    )
    return WaveformSignal(float(sample_rate), out, float(start_time), desc)


# -- Fourier analysis -------------------------------------------------------


@dataclass
class Spectrum:
    frequencies: np.ndarray  # rad/s, non-negative bins
    magnitudes: np.ndarray
    n_samples: int

    def two_sided_power(self) -> float:
        """sum |S_m|^2 over the full two-sided DFT, rebuilt from the one-sided bins."""
        p = self.magnitudes**2
        total = p[0] + 2 * p[1:].sum()
        if self.n_samples % 2 == 0:
            total -= p[-1]
        return float(total)


def _window(kind: str, n: int) -> np.ndarray:
    if kind in ("rect", "rectangular", None):
        return np.ones(n)
    if kind in ("hann", "raised-cosine"):
        return np.hanning(n)
    raise ValueError(f"unknown window {kind!r}")


def overall_spectrum(signal: WaveformSignal, window: str = "rect") -> Spectrum:
    """DFT magnitude over the full record."""
    if len(signal) < 2:
        raise ValueError("need at least two samples")
    x = signal.samples * _window(window, len(signal))
    mags = np.abs(np.fft.rfft(x))
    freqs = 2 * math.pi * np.fft.rfftfreq(len(signal), 1.0 / signal.sample_rate)
    return Spectrum(freqs, mags, len(signal))


@dataclass
class Spectrogram:
    window_starts: np.ndarray  # s
    frequency_bins: np.ndarray  # rad/s
    magnitudes: np.ndarray  # (n_windows, n_bins)
    window_length: int
    sample_rate: float

    @property
    def bin_width(self) -> float:
        return 2 * math.pi * self.sample_rate / self.window_length

    @property
    def window_midpoints(self) -> np.ndarray:
        return self.window_starts + 0.5 * self.window_length / self.sample_rate


def stepwise_spectrum(signal: WaveformSignal, window_length: int, window: str = "rect") -> Spectrogram:
    """DFT magnitudes over consecutive, non-overlapping windows; a trailing partial window is dropped."""
    if window_length < 2:
        raise ValueError("window must hold at least two samples")
    if window_length > len(signal):
        raise ValueError("window longer than the signal")
    n_win = len(signal) // window_length
    frames = signal.samples[: n_win * window_length].reshape(n_win, window_length)
    mags = np.abs(np.fft.rfft(frames * _window(window, window_length), axis=1))
    freqs = 2 * math.pi * np.fft.rfftfreq(window_length, 1.0 / signal.sample_rate)
    starts = signal.start_time + np.arange(n_win) * window_length / signal.sample_rate
    return Spectrogram(starts, freqs, mags, window_length, signal.sample_rate)


def peak_tracks(spec: Spectrogram, n_peaks: int, min_separation_bins: int = 2) -> np.ndarray:
    """Frequencies (rad/s) of the ``n_peaks`` strongest local maxima per window, ascending.

    Returns shape ``(n_windows, n_peaks)``.
    """
    out = np.empty((spec.magnitudes.shape[0], n_peaks))
    for w, row in enumerate(spec.magnitudes):
        interior = np.flatnonzero((row[1:-1] >= row[:-2]) & (row[1:-1] > row[2:])) + 1
        chosen: list[int] = []
        for i in interior[np.argsort(row[interior])[::-1]]:
            if all(abs(i - c) >= min_separation_bins for c in chosen):
                chosen.append(int(i))
            if len(chosen) == n_peaks:
                break
        if len(chosen) < n_peaks:
            raise ValueError(f"window {w}: found only {len(chosen)} peaks")
        out[w] = np.sort(spec.frequency_bins[chosen])
    return out


# -- moving adiabatic potentials ----------------------------------------


def moving_potentials(
    ramp: CombRamp,
    field: FieldModel,
    species: AtomSpecies,
    grid,
    times: Sequence[float],
    stark: bool = False,
    gravity: bool = False,
    workers: int = 1,
) -> list[AdiabaticPotentialGrid]:
    """Quasi-static adiabatic potentials for the instantaneous comb at each time."""
    frames = []
    for t in times:
        g = unfold_adiabatic(grid, field, ramp.comb_at(t), species, stark=stark, gravity=gravity, workers=workers)
        g.extra["time"] = float(t)
        frames.append(g)
    return frames


def correlation_shift(a: np.ndarray, b: np.ndarray, dz: float, max_lag: Optional[int] = None) -> float:
    """Displacement s (same units as ``dz``) maximising the overlap of b(z) with a(z - s).

    Both profiles must be sampled on the same uniform grid. ``max_lag``
    limits the search to |lag| <= max_lag samples.
    """
    a = np.asarray(a, dtype=float) - np.mean(a)
    b = np.asarray(b, dtype=float) - np.mean(b)
    n = a.size
    corr = np.correlate(b, a, mode="full")  # index n-1 is zero lag
    lags = np.arange(-(n - 1), n)
    # normalise by overlap length so large lags are not penalised
    corr = corr / (n - np.abs(lags))
    if max_lag is not None:
        keep = np.abs(lags) <= max_lag
        corr, lags = corr[keep], lags[keep]
    return float(lags[np.argmax(corr)] * dz)


def grating_shift(a: np.ndarray, b: np.ndarray, dz: float, max_lag: Optional[int] = None) -> float:
    """Displacement of a moving grating between two potential profiles.

    The unfolded potential's region offsets change as the comb ramps, so the
    profiles are not rigid translates of each other; their z-derivatives
    (the forces) are, away from switch points. The shift is therefore taken
    from the cross-correlation of the gradients.
    """
    return correlation_shift(np.gradient(np.asarray(a, float), dz), np.gradient(np.asarray(b, float), dz), dz, max_lag)
