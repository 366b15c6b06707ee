"""``dressedlat <subcommand> --config <file> [--out <dir>] [--format csv,svg]``.

Exit codes: 0 success, 1 configuration error, 2 numerical error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .. import io as dio
from ..dressing import (
    RfComb,
    dressed_eigenvalues,
    multilevel_potentials,
    off_resonant_shift,
    potential_map_2d,
    resonance_ellipse_semiaxes,
    splitting,
    stark_sum,
    switch_discontinuities,
    switch_positions,
    unfold_adiabatic,
)
from ..errors import ConfigError, DomainError, NumericError
from ..lattice import (
    adiabaticity_margin,
    bloch_margin,
    bragg_gradient,
    cell_flags,
    comb_spacing_for,
    critical_depth_root,
    landau_zener_exponent,
    landau_zener_probability,
    lattice_params,
    measure_lattice,
    modulation_depth,
    recoil_energy,
    regime_diagram,
)
from ..physcore import CONSTANTS_SNAPSHOT, H, HBAR, K_B, Linear1D, Quadrupole2D, field_magnitude, zeeman_energy
from ..shaping import (
    asymptotic_lower_depth,
    flatness_metric,
    microwave_dressed_potentials,
    resonance_field,
    trap_depth,
    upper_barrier_height,
)
from ..waveform import (
    instantaneous_frequencies,
    moving_potentials,
    overall_spectrum,
    peak_tracks,
    stepwise_spectrum,
    synthesize,
    grating_shift,
)
from . import svg
from .config import RunConfig, parse_config

EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 1, 2, 3
FLAT_HALF_WIDTH = 20e-6  # m, central region for the flat-bottom check
UM, KHZ = 1e6, 1.0 / (H * 1e3)  # plot scalings: m -> um, J -> h kHz


@dataclass
class RunManifest:
    subcommand: str
    parameters: dict
    constants: str = CONSTANTS_SNAPSHOT
    files: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def to_json(self) -> str:
        files = sorted(self.files, key=lambda f: f["name"])
        body = {
            "subcommand": self.subcommand,
            "constants": self.constants,
            "parameters": self.parameters,
            "summary": self.summary,
            "files": files,
        }
        return json.dumps(body, indent=2, sort_keys=True, default=_jsonable) + "\n"


def _jsonable(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    return str(x)


class _Writer:
    """Collects emitted files; SVGs only when requested, CSVs whenever 'csv' is listed."""

    def __init__(self, directory: Path, formats, manifest: RunManifest):
        self.dir = directory
        self.formats = set(formats)
        self.manifest = manifest
        self.dir.mkdir(parents=True, exist_ok=True)

    def _add(self, path: Path, kind: str):
        self.manifest.files.append({"name": path.name, "kind": kind, "sha256": dio.sha256(path)})

    def csv(self, name, columns, rows, comments=()):
        if "csv" in self.formats:
            self._add(dio.write_csv(self.dir / name, columns, rows, comments), "csv")

    def svg(self, name, make: Callable[[], str]):
        if "svg" in self.formats:
            p = self.dir / name
            p.write_text(make(), encoding="utf-8", newline="\n")
            self._add(p, "svg")

    def waveform(self, name, signal):
        for fmt in ("csv", "raw"):
            if fmt in self.formats:
                self._add(dio.export_waveform(signal, self.dir / f"{name}.{fmt}", fmt), fmt)


def _need(cfg: RunConfig, *sections):
    missing = [s for s in sections if getattr(cfg, s) is None]
    if missing:
        raise ConfigError(f"this subcommand needs section(s) {missing}")


def _branch_columns(n):
    return [f"branch_{k + 1}_J" for k in range(n)]


def _potentials(cfg: RunConfig, pos, stark: bool):
    a = cfg.analysis
    if cfg.manifold.F == 0.5 or cfg.m_pair is not None:
        return unfold_adiabatic(
            pos, cfg.field, cfg.comb, cfg.species, stark=stark, gravity=a.gravity,
            manifold=cfg.manifold, m_pair=cfg.m_pair, workers=a.workers,
        )
    return multilevel_potentials(
        pos, cfg.field, cfg.comb, cfg.manifold, cfg.species, stark=stark, gravity=a.gravity, workers=a.workers
    )


def _emit_potentials(w: _Writer, name: str, g, title: str):
    w.csv(
        f"{name}.csv", ["z_m", "region"] + _branch_columns(g.n_branches),
        zip(g.positions, g.region, *g.branches),
        [f"{title}; energies in J", f"stark_corrected={int(g.stark_corrected)}", f"gravity={int(g.gravity)}"],
    )
    w.svg(f"{name}.svg", lambda: svg.line_plot(
        g.positions * UM, list(g.branches * KHZ), title=title, xlabel="z (um)", ylabel="E / h (kHz)"))


def _local_dressed(cfg: RunConfig, z):
    """Local dressed-state quantities with the locally resonant component."""
    B = np.asarray(field_magnitude(cfg.field, z))
    gF = abs(cfg.manifold.g_F)
    g = unfold_adiabatic(z, cfg.field, cfg.comb, cfg.species, manifold=cfg.manifold,
                         m_pair=cfg.m_pair, check_resolution=False)
    n = np.asarray(g.region)
    w, r = cfg.comb.omega[n - 1], cfg.comb.rabi[n - 1]
    e_p, e_m = dressed_eigenvalues(B, w, r, gF)
    det = splitting(B, gF) - HBAR * w
    off_p = np.full(z.shape, np.nan)
    ok = np.abs(HBAR * r) < 0.5 * np.abs(det)
    if np.any(ok):
        off_p[ok], _ = off_resonant_shift(B[ok], w[ok], r[ok], gF)
    L = stark_sum(z, cfg.field, cfg.comb, gF) if len(cfg.comb) > 1 else np.zeros(z.shape)
    m_lo, m_hi = cfg.m_pair or (-0.5, 0.5)
    cols = {
        "zeeman_lo_m_J": zeeman_energy(cfg.manifold, m_lo, B),
        "zeeman_hi_m_J": zeeman_energy(cfg.manifold, m_hi, B),
        "uncoupled_plus_J": 0.5 * det,
        "uncoupled_minus_J": -0.5 * det,
        "dressed_plus_J": e_p,
        "dressed_minus_J": e_m,
        "offres_plus_J": off_p,
        "offres_minus_J": -off_p,
        "stark_sum_J": np.broadcast_to(L, z.shape),
    }
    return n, cols


def cmd_potentials(cfg: RunConfig, w: _Writer, m: RunManifest):
    _need(cfg, "field", "comb", "grid")
    if not isinstance(cfg.field, Linear1D):
        raise ConfigError("potentials runs need a linear field; use map2d for the quadrupole")
    z = cfg.grid.z()
    bare = _potentials(cfg, z, stark=False)
    _emit_potentials(w, "potentials", bare, "adiabatic potentials (nearest component only)")
    if cfg.analysis.stark:
        st = _potentials(cfg, z, stark=True)
        _emit_potentials(w, "potentials_stark", st, "adiabatic potentials with Stark correction")
    if cfg.manifold.F == 0.5 or cfg.m_pair is not None:
        n, cols = _local_dressed(cfg, z)
        w.csv("local.csv", ["z_m", "region"] + list(cols), zip(z, n, *cols.values()),
              ["local dressed states with the nearest comb component; offres is blank (nan) near resonance"])
        w.svg("local.svg", lambda: svg.line_plot(
            z * UM, [cols[k] * KHZ for k in ("uncoupled_plus_J", "uncoupled_minus_J", "dressed_plus_J",
                                               "dressed_minus_J", "stark_sum_J")],
            ["uncoupled +", "uncoupled -", "dressed +", "dressed -", "Stark sum"],
            title="local dressed states", xlabel="z (um)", ylabel="E / h (kHz)"))
    if len(cfg.comb) > 1:
        zs = switch_positions(cfg.field, cfg.comb, cfg.manifold.g_F)
        j0 = switch_discontinuities(cfg.comb, stark=False)[-zs.size:] if zs.size else np.zeros(0)
        j1 = switch_discontinuities(cfg.comb, stark=True)[-zs.size:] if zs.size else np.zeros(0)
        first = len(cfg.comb) - zs.size
        w.csv("switch_points.csv", ["from_region", "z_m", "jump_bare_J", "jump_stark_J"],
              zip(range(first, len(cfg.comb)), zs, j0, j1),
              ["jump = right limit - left limit of the unfolded + potential at each switch point"])
        if zs.size:
            unit = HBAR * cfg.comb.min_spacing
            m.summary["max_jump_over_hbar_min_spacing"] = {
                "bare": float(np.max(np.abs(j0)) / unit), "stark": float(np.max(np.abs(j1)) / unit)}


def cmd_map2d(cfg: RunConfig, w: _Writer, m: RunManifest):
    _need(cfg, "field", "comb", "grid")
    if not isinstance(cfg.field, Quadrupole2D):
        raise ConfigError("map2d needs field.variant = 'quadrupole'")
    x, z = cfg.grid.x(), cfg.grid.z()
    g = potential_map_2d(x, z, cfg.field, cfg.comb, cfg.species, cfg.manifold, cfg.analysis.stark,
                         cfg.analysis.gravity, cfg.analysis.workers)
    X, Z = g.positions[..., 0].ravel(), g.positions[..., 1].ravel()
    w.csv("map2d.csv", ["x_m", "z_m", "region"] + _branch_columns(g.n_branches),
          zip(X, Z, g.region.ravel(), *(b.ravel() for b in g.branches)),
          ["adiabatic potentials on the (x, z) plane, z-major order; energies in J"])
    if cfg.field.B0 == 0:
        ax = resonance_ellipse_semiaxes(cfg.field, cfg.comb, cfg.manifold.g_F)
        w.csv("resonance_rings.csv", ["component", "omega_rad_s", "x_semi_m", "z_semi_m"],
              ((i + 1, om, a[0], a[1]) for i, (om, a) in enumerate(zip(cfg.comb.omegas, ax))))
    w.svg("map2d.svg", lambda: svg.heatmap(x * UM, z * UM, g.upper * KHZ, title="upper adiabatic potential",
                                           xlabel="x (um)", ylabel="z (um)"))
    mid = int(np.argmin(np.abs(x)))
    w.svg("map2d_cut.svg", lambda: svg.line_plot(
        z * UM, list(g.branches[:, :, mid] * KHZ), title="cut at x = 0", xlabel="z (um)", ylabel="E / h (kHz)"))


def _uniform_spacing(comb: RfComb) -> Optional[float]:
    d = np.diff(comb.omega)
    if d.size and np.allclose(d, d[0], rtol=1e-12, atol=0):
        return float(d.mean())
    return None


def cmd_comb(cfg: RunConfig, w: _Writer, m: RunManifest):
    _need(cfg, "field", "comb", "grid")
    if not isinstance(cfg.field, Linear1D):
        raise ConfigError("comb runs need a linear field")
    z = cfg.grid.z()
    dw = _uniform_spacing(cfg.comb)
    rows = []
    for stark in (False, True) if cfg.analysis.stark else (False,):
        g = _potentials(cfg, z, stark)
        _emit_potentials(w, "potentials_stark" if stark else "potentials", g,
                         "comb potentials" + (" with Stark correction" if stark else ""))
        if g.n_branches != 2:
            continue
        ev = lambda zz, s=stark: _potentials_eval(cfg, zz, s)  # noqa: E731
        meas = measure_lattice(z, g.upper, g.region, ev)
        tag = "stark" if stark else "bare"
        an_depth = modulation_depth(dw, max(cfg.comb.rabis)).value if dw else math.nan
        an_period = (2 * HBAR * dw / (splitting(cfg.field.b, cfg.manifold.g_F))) if dw else math.nan
        rows.append((f"depth_{tag}_J", meas.depth, an_depth, meas.depth / an_depth - 1))
        rows.append((f"period_{tag}_m", meas.period, an_period, meas.period / an_period - 1))
        m.summary[f"depth_{tag}_J"] = meas.depth
        m.summary[f"period_{tag}_m"] = meas.period
    if rows:
        w.csv("lattice_check.csv", ["quantity", "measured", "closed_form", "relative_error"], rows,
              ["measured from interior regions of the unfolded upper branch"])


def _potentials_eval(cfg, zz, stark):
    g = unfold_adiabatic(zz, cfg.field, cfg.comb, cfg.species, stark=stark, gravity=cfg.analysis.gravity,
                         manifold=cfg.manifold, m_pair=cfg.m_pair, check_resolution=False)
    return g.upper


def cmd_regime(cfg: RunConfig, w: _Writer, m: RunManifest):
    _need(cfg, "field")
    a = cfg.analysis
    if None in (a.omega_min, a.omega_max, a.d_min, a.d_max):
        raise ConfigError("regime needs analysis.omega_min/omega_max/d_min/d_max")
    if not isinstance(cfg.field, Linear1D):
        raise ConfigError("regime needs a linear field gradient")
    b, gF = cfg.field.b, cfg.manifold.g_F
    rd = regime_diagram(cfg.species, (a.omega_min, a.omega_max), (a.d_min, a.d_max), a.resolution, b,
                        a.acceleration, a.eta, gF)
    rows = []
    for i, O in enumerate(rd.omega_axis):
        for j, d in enumerate(rd.d_axis):
            V = modulation_depth(comb_spacing_for(d, b, gF), O).value
            rows.append((O, d, rd.adiabatic[i, j], rd.deep[i, j], rd.bloch_safe[i, j],
                         adiabaticity_margin(cfg.species, O, d, b, gF), V / recoil_energy(cfg.species, d),
                         bloch_margin(cfg.species, max(V, 0.0), d, rd.a)))
    w.csv("regime.csv", ["omega_rad_s", "d_m", "adiabatic", "deep", "bloch_safe", "adiabaticity_margin",
                         "depth_over_recoil", "bloch_margin"], rows,
          [f"eta={rd.eta!r}", f"b_T_per_m={b!r}", f"acceleration_m_s2={rd.a!r}"])
    bd = rd.boundaries
    w.csv("boundaries.csv", ["omega_rad_s", "d_adiabatic_m", "d_deep_m", "d_bloch_m"],
          zip(rd.omega_axis, bd["adiabatic"], bd["deep"], bd["bloch"]))
    code = (rd.adiabatic & rd.deep).astype(float) + (rd.adiabatic & rd.deep & rd.bloch_safe)
    om_khz = rd.omega_axis / (2 * math.pi * 1e3)
    w.svg("regime.svg", lambda: svg.heatmap(
        om_khz, rd.d_axis * UM, code.T, title="regime diagram", xlabel="Omega / 2pi (kHz)", ylabel="d (um)",
        logx=True, logy=True,
        overlays=[(om_khz, bd[k] * UM, k) for k in ("adiabatic", "deep", "bloch")]))
    m.summary["cells"] = int(code.size)


def cmd_evolve(cfg: RunConfig, w: _Writer, m: RunManifest):
    _need(cfg, "field", "comb", "grid", "ramp")
    if not isinstance(cfg.field, Linear1D):
        raise ConfigError("evolve needs a linear field")
    z = cfg.grid.z()
    t_n = cfg.ramp.t_n
    times = np.linspace(0.0, t_n, cfg.analysis.frames)
    frames = moving_potentials(cfg.ramp, cfg.field, cfg.species, z, times, cfg.analysis.stark,
                               cfg.analysis.gravity, cfg.analysis.workers)
    w.csv("frames.csv", ["time_s", "z_m", "region", "lower_J", "upper_J"],
          ((f.extra["time"], zz, n, lo, hi) for f in frames
           for zz, n, lo, hi in zip(f.positions, f.region, f.lower, f.upper)),
          ["quasi-static adiabatic potentials of the ramped comb"])
    dz = float(z[1] - z[0])
    dw = float(np.mean(np.diff(cfg.comb.omega))) if len(cfg.comb) > 1 else math.nan
    d = float(2 * HBAR * dw / splitting(cfg.field.b, cfg.manifold.g_F))
    lag = max(1, int(d / 4 / dz))
    rows, total = [], 0.0
    # the frame at t_n repeats t = 0 after the ramp reset, so it is not a step
    for k in range(1, len(frames)):
        if times[k] >= t_n:
            break
        step = grating_shift(frames[k - 1].upper, frames[k].upper, dz, lag)
        total += step
        rows.append((times[k], step, total, d * times[k] / t_n, 0.5 * d * times[k] / t_n))
    w.csv("displacement.csv", ["time_s", "step_m", "cumulative_m", "lattice_rate_m", "half_lattice_rate_m"],
          rows, [f"grid_spacing_m={dz!r}", f"lattice_constant_m={d!r}",
                 "lattice_rate = d t / t_n, half_lattice_rate = d t / (2 t_n)"])
    m.summary["period_mismatch_J"] = float(np.max(np.abs(frames[-1].branches - frames[0].branches)))
    w.svg("frames.svg", lambda: svg.line_plot(
        None, [f.upper * KHZ for f in frames], title="moving grating", xlabel="z (um)", ylabel="E / h (kHz)",
        xs=[f.positions * UM for f in frames]))


def cmd_spectra(cfg: RunConfig, w: _Writer, m: RunManifest):
    _need(cfg, "comb", "ramp")
    a = cfg.analysis
    if a.sample_rate is None or a.duration is None or a.window is None:
        raise ConfigError("spectra needs analysis.sample_rate, duration and window")
    sig = synthesize(cfg.ramp, a.duration, a.sample_rate)
    w.waveform("waveform", sig)
    sp = overall_spectrum(sig, a.window_kind)
    w.csv("spectrum.csv", ["freq_rad_per_s", "magnitude"], zip(sp.frequencies, sp.magnitudes),
          [f"sample_count={len(sig)}"])
    sg = stepwise_spectrum(sig, a.window, a.window_kind)
    if "csv" in w.formats:
        p = dio.write_spectrogram_csv(sg, w.dir / "spectrogram.csv")
        w._add(p, "csv")
    n = len(cfg.comb)
    tracks = peak_tracks(sg, n)
    pred = instantaneous_frequencies(cfg.ramp, sg.window_midpoints).T
    cols = ["window_start_s", "window_mid_s"] + [f"peak_{k + 1}_rad_s" for k in range(n)] \
        + [f"ramp_{k + 1}_rad_s" for k in range(n)]
    w.csv("peak_tracks.csv", cols, (
        (t0, tm, *pk, *pr) for t0, tm, pk, pr in zip(sg.window_starts, sg.window_midpoints, tracks, pred)),
        [f"bin_width_rad_s={sg.bin_width!r}"])
    m.summary["max_track_error_bins"] = float(np.max(np.abs(tracks - pred)) / sg.bin_width)
    w.svg("peak_tracks.svg", lambda: svg.line_plot(
        sg.window_midpoints * 1e3, [tracks[:, k] / (2e3 * math.pi) for k in range(n)]
        + [pred[:, k] / (2e3 * math.pi) for k in range(n)],
        title="spectrogram peaks and ramp law", xlabel="t (ms)", ylabel="f (kHz)"))
    w.svg("spectrum.svg", lambda: svg.line_plot(
        sp.frequencies / (2e3 * math.pi), [sp.magnitudes], title="overall spectrum", xlabel="f (kHz)",
        ylabel="|S|"))


def cmd_shaping(cfg: RunConfig, w: _Writer, m: RunManifest):
    _need(cfg, "field", "drive", "grid")
    z = cfg.grid.z()
    pos = np.stack([np.zeros_like(z), z], axis=-1) if isinstance(cfg.field, Quadrupole2D) else z
    g = microwave_dressed_potentials(cfg.pair, cfg.drive, cfg.field, pos)
    B = np.asarray(field_magnitude(cfg.field, pos))
    w.csv("shaping.csv", ["z_m", "B_T", "detuning_rad_s", "lower_J", "upper_J"],
          zip(z, B, g.extra["detuning"], g.lower, g.upper),
          ["microwave-dressed potentials, referenced to the upper branch at the origin"])
    B0 = float(field_magnitude(cfg.field, pos[np.argmin(np.abs(z))]))
    B_res = resonance_field(cfg.pair, cfg.drive)
    b = cfg.field.b if isinstance(cfg.field, Linear1D) else cfg.field.b_z
    z_res = math.sqrt(max(B_res**2 - cfg.field.B0**2, 0.0)) / b
    td = trap_depth(g.lower)
    flat = flatness_metric(g.upper, z, (-FLAT_HALF_WIDTH, FLAT_HALF_WIDTH))
    barrier = upper_barrier_height(cfg.pair, cfg.drive, B0)
    try:
        asym = asymptotic_lower_depth(cfg.pair, cfg.drive, B0)
    except ValueError:
        asym = math.nan
    summary = {
        "resonance_field_T": B_res,
        "resonance_z_m": z_res,
        "lower_trapped": td.trapped,
        "lower_depth_J": td.joules,
        "lower_depth_uK": td.microkelvin,
        "closed_form_depth_J": asym,
        "closed_form_depth_uK": asym / K_B * 1e6,
        "upper_flatness_J": flat,
        "upper_barrier_J": barrier,
        "flatness_over_barrier": flat / barrier,
    }
    w.csv("shaping_summary.csv", ["quantity", "value"], summary.items(),
          [f"flatness over |z| <= {FLAT_HALF_WIDTH!r} m; closed-form depth is the far-field limit"])
    m.summary.update(summary)
    w.svg("shaping.svg", lambda: svg.line_plot(
        z * UM, [g.lower / (H * 1e6), g.upper / (H * 1e6)], ["lower", "upper"],
        title="microwave-dressed potentials", xlabel="z (um)", ylabel="E / h (MHz)"))


def cmd_lattice_params(cfg: RunConfig, w: _Writer, m: RunManifest):
    _need(cfg, "field", "comb")
    if not isinstance(cfg.field, Linear1D):
        raise ConfigError("lattice-params needs a linear field gradient")
    dw = _uniform_spacing(cfg.comb)
    if dw is None:
        raise ConfigError("lattice-params needs a uniform comb with at least two components")
    sp, gF, b = cfg.species, cfg.manifold.g_F, cfg.field.b
    O = max(cfg.comb.rabis)
    t_n = cfg.ramp.t_n if cfg.ramp is not None else math.nan
    a = cfg.analysis
    if math.isnan(t_n):
        p = lattice_params(sp, dw, O, b, gF, 1.0)
    else:
        p = lattice_params(sp, dw, O, b, gF, t_n)
    rows = [
        ("lattice_constant", p.d, "m"),
        ("modulation_depth", p.V_ad, "J"),
        ("recoil_energy", p.E_r, "J"),
        ("depth_over_recoil", p.V_ad / p.E_r, "1"),
        ("bragg_velocity", p.v_brg, "m/s"),
        ("lz_exponent_at_bragg_velocity", landau_zener_exponent(O, p.v_brg, b, gF), "1"),
        ("lz_probability_at_bragg_velocity", landau_zener_probability(O, p.v_brg, b, gF), "1"),
        ("adiabaticity_margin", adiabaticity_margin(sp, O, p.d, b, gF), "1"),
        ("bloch_margin", bloch_margin(sp, max(p.V_ad, 0.0), p.d, a.acceleration), "1"),
        ("critical_lattice_constant", critical_depth_root(sp, O, b, gF), "m"),
    ]
    if not math.isnan(t_n):
        rows += [
            ("ramp_period", t_n, "s"),
            ("propagation_velocity", p.v_prop, "m/s"),
            ("lz_probability_at_propagation_velocity", landau_zener_probability(O, p.v_prop, b, gF), "1"),
            ("bragg_gradient", bragg_gradient(sp, dw, t_n, gF), "T/m"),
        ]
    adi, deep, bloch = cell_flags(sp, O, p.d, b, gF, a.acceleration, a.eta)
    rows += [("adiabatic", adi, "flag"), ("deep", deep, "flag"), ("bloch_safe", bloch, "flag")]
    w.csv("lattice_params.csv", ["quantity", "value", "unit"], rows, [f"eta={a.eta!r}"])
    m.summary.update({r[0]: r[1] for r in rows})


COMMANDS = {
    "potentials": cmd_potentials,
    "map2d": cmd_map2d,
    "comb": cmd_comb,
    "regime": cmd_regime,
    "evolve": cmd_evolve,
    "spectra": cmd_spectra,
    "shaping": cmd_shaping,
    "lattice-params": cmd_lattice_params,
}


def run(subcommand: str, config, out: Optional[str] = None, formats=None) -> RunManifest:
    """Execute ``subcommand`` for a :class:`RunConfig` (or its TOML text) and write outputs.

    ``manifest.json`` is written last; it lists every emitted file with its
    SHA-256 and holds no timestamps or absolute paths.
    """
    cfg = parse_config(config) if isinstance(config, str) else config
    if subcommand not in COMMANDS:
        raise ConfigError(f"unknown subcommand {subcommand!r}; choose from {sorted(COMMANDS)}")
    manifest = RunManifest(subcommand, cfg.resolved)
    fmts = tuple(formats) if formats is not None else cfg.output.formats
    writer = _Writer(Path(out or cfg.output.directory), fmts, manifest)
    COMMANDS[subcommand](cfg, writer, manifest)
    (writer.dir / "manifest.json").write_text(manifest.to_json(), encoding="utf-8", newline="\n")
    return manifest


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dressedlat", description="rf/microwave dressed-potential simulations")
    p.add_argument("subcommand", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, help="TOML run configuration")
    p.add_argument("--out", help="output directory (default: [output] directory, then $DRESSEDLAT_OUT)")
    p.add_argument("--format", help="comma-separated subset of csv,svg,raw")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return EXIT_IO
        cfg = parse_config(text)
        formats = None
        if args.format:
            formats = tuple(f.strip() for f in args.format.split(",") if f.strip())
            bad = [f for f in formats if f not in ("csv", "svg", "raw")]
            if bad:
                raise ConfigError(f"unknown format(s) {bad}")
        print(json.dumps({"parameters": cfg.resolved}, indent=2, sort_keys=True, default=_jsonable))
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            manifest = run(args.subcommand, cfg, args.out, formats)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericError, DomainError, ArithmeticError, ValueError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(manifest.to_json(), end="")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
