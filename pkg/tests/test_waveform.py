import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dressedlat.dressing import RfComb
from dressedlat.lattice import lattice_constant
from dressedlat.physcore import LI6, Linear1D
from dressedlat.waveform import (
    CombRamp,
    Envelope,
    PhaseWobble,
    grating_shift,
    instantaneous_frequencies,
    moving_potentials,
    overall_spectrum,
    peak_tracks,
    ramp_phase,
    stepwise_spectrum,
    synthesize,
)

from conftest import TWO_PI

FIG5 = RfComb.uniform(TWO_PI * 1e5, TWO_PI * 1e5, 4, TWO_PI * 15e3)
T_N = 2e-3


def test_sawtooth_is_periodic():
    r = CombRamp(FIG5, T_N)
    t = np.linspace(0, T_N, 37, endpoint=False)
    assert np.allclose(instantaneous_frequencies(r, t), instantaneous_frequencies(r, t + T_N), rtol=1e-12)
    w = instantaneous_frequencies(r, np.array([0.0, T_N * (1 - 1e-12)]))
    assert np.allclose(w[:, 1], FIG5.omega + TWO_PI * 1e5, rtol=1e-9)


def test_static_ramp_keeps_frequencies():
    r = CombRamp(FIG5, T_N, static=True)
    assert np.all(instantaneous_frequencies(r, 1.234e-3) == FIG5.omega)


@given(st.integers(1, 5))
def test_phase_continuous_across_resets(k):
    r = CombRamp(FIG5, T_N)
    eps = 1e-10
    left, right = ramp_phase(r, k * T_N - eps), ramp_phase(r, k * T_N + eps)
    # jump bounded by the largest frequency times the interval
    assert np.all(np.abs(right - left) <= 2 * eps * r.max_frequency * (1 + 1e-6) + 1e-6)


def test_phase_reset_mode_restarts():
    r = CombRamp(FIG5, T_N, phase_mode="reset")
    assert np.allclose(ramp_phase(r, 3 * T_N), 0.0, atol=1e-9)


def test_phase_derivative_is_instantaneous_frequency():
    r = CombRamp(FIG5, T_N)
    t, h = 0.7e-3, 1e-9
    num = (ramp_phase(r, t + h) - ramp_phase(r, t - h)) / (2 * h)
    assert np.allclose(num, instantaneous_frequencies(r, t), rtol=1e-6)


def test_fig5_waveform_synthesizes():
    sig = synthesize(CombRamp(FIG5, T_N), 2e-3, 4e6)
    assert len(sig) == 8000
    assert np.max(np.abs(sig.samples)) <= 4.0


def test_undersampling_names_component():
    with pytest.raises(ValueError, match=r"component\(s\) \[4\]"):
        synthesize(CombRamp(FIG5, T_N), 1e-4, 3.5e6)


def test_parseval():
    sig = synthesize(CombRamp(FIG5, T_N), 2e-3, 4e6)
    sp = overall_spectrum(sig)
    assert sp.two_sided_power() == pytest.approx(len(sig) * np.sum(sig.samples**2), rel=1e-10)


def test_swept_tone_power_in_band():
    w1, w2 = TWO_PI * 1e5, TWO_PI * 2e5
    comb = RfComb((w1, w2), (0.0,))
    r = CombRamp(comb, T_N, amplitudes=(Envelope(1.0), Envelope(0.0)))
    sig = synthesize(r, T_N, 4e6)
    sp = overall_spectrum(sig)
    band = (sp.frequencies >= w1) & (sp.frequencies <= w2)
    assert np.sum(sp.magnitudes[band] ** 2) >= 0.9 * np.sum(sp.magnitudes**2)


def test_spectrogram_tracks_ramp_within_a_bin():
    r = CombRamp(FIG5, T_N)
    sg = stepwise_spectrum(synthesize(r, 2e-3, 4e6), 800)
    assert sg.magnitudes.shape == (10, 401)
    tracks = peak_tracks(sg, 4)
    pred = instantaneous_frequencies(r, sg.window_midpoints).T
    assert np.max(np.abs(tracks - pred)) <= sg.bin_width


def test_partial_window_dropped():
    sig = synthesize(CombRamp(FIG5, T_N), 2e-3, 4e6)
    assert stepwise_spectrum(sig, 900).magnitudes.shape[0] == 8
    with pytest.raises(ValueError):
        stepwise_spectrum(sig, 9000)


def test_envelopes_tracked_within_ten_percent():
    comb = RfComb.uniform(TWO_PI * 1e5, TWO_PI * 1e5, 3, 0.0)
    env = (Envelope(1.0, 0.5, TWO_PI * 500), Envelope(0.8, 0.3, TWO_PI * 250, 1.0), Envelope(0.6))
    wob = (PhaseWobble(), PhaseWobble(0.3, TWO_PI * 300), PhaseWobble(0.5, TWO_PI * 100))
    mod = CombRamp(comb, T_N, amplitudes=env, phase_offsets=wob, static=True)
    sg = stepwise_spectrum(synthesize(mod, 2e-3, 4e6), 800)
    for k, w in enumerate(comb.omega):
        b = int(round(w / sg.bin_width))
        measured = sg.magnitudes[:, b] / (800 / 2)
        expected = env[k](sg.window_midpoints)
        assert np.all(np.abs(measured - expected) <= 0.1 * expected)


def test_frames_repeat_after_one_period():
    r = CombRamp(FIG5, T_N)
    z = np.linspace(5e-6, 25e-6, 2001)
    f = Linear1D(2.0, 1e-5)
    a, b = moving_potentials(r, f, LI6, z, [0.3e-3, 0.3e-3 + T_N])
    assert np.max(np.abs(a.branches - b.branches)) <= 1e-9 * np.max(np.abs(a.branches))


def test_grating_moves_half_lattice_per_period_without_offset():
    # resonances advance by one comb spacing per period, i.e. d/2 in z
    r = CombRamp(FIG5, T_N)
    f = Linear1D(2.0)
    d = lattice_constant(TWO_PI * 1e5, 2.0, -2 / 3)
    dz = 5e-9
    for sign in (1, -1):
        z = sign * np.arange(5e-6, 25e-6 + dz / 2, dz)
        z = np.sort(z)
        frames = moving_potentials(r, f, LI6, z, [0.0, T_N / 8])
        s = grating_shift(frames[0].upper, frames[1].upper, dz, int(d / 4 / dz))
        assert abs(s - sign * 0.5 * d / 8) <= dz
