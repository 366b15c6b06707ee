"""Run configuration: TOML text with unit-suffixed quantities, resolved to SI.

Every physical quantity is a string such as ``"200 G/cm"``; bare numbers for
physical quantities are rejected, as are unknown keys.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field
from typing import Any, Optional

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from ..dressing import RfComb
from ..errors import ConfigError
from ..physcore import (
    CONST,
    HBAR,
    AtomSpecies,
    FieldModel,
    Linear1D,
    Manifold,
    Quadrupole2D,
    PRESETS,
    parse_quantity,
)
from ..shaping import HyperfinePair, MicrowaveDrive
from ..waveform import CombRamp, Envelope, PhaseWobble

OUT_ENV = "DRESSEDLAT_OUT"
DEFAULT_OUT = "dressedlat-out"
FORMATS = ("csv", "svg", "raw")

_MISSING = object()


def _check_keys(table: dict, allowed, section: str):
    unknown = sorted(set(table) - set(allowed))
    if unknown:
        raise ConfigError(f"[{section}]: unknown key(s) {unknown}; allowed: {sorted(allowed)}")


def _get(table, key, section, default=_MISSING):
    if key in table:
        return table[key]
    if default is _MISSING:
        raise ConfigError(f"[{section}]: missing required key {key!r}")
    return default


def _qty(table, key, dim, section, default=_MISSING):
    v = _get(table, key, section, default)
    if v is default and default is not _MISSING:
        return v
    try:
        return parse_quantity(v, dim)
    except ConfigError as exc:
        raise ConfigError(f"[{section}] {key}: {exc}") from None


def _num(table, key, section, kind=float, default=_MISSING):
    v = _get(table, key, section, default)
    if v is default and default is not _MISSING:
        return v
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"[{section}] {key}: expected a number, got {v!r}")
    if kind is int and not float(v).is_integer():
        raise ConfigError(f"[{section}] {key}: expected an integer, got {v!r}")
    return kind(v)


def _bool(table, key, section, default):
    v = table.get(key, default)
    if not isinstance(v, bool):
        raise ConfigError(f"[{section}] {key}: expected true/false, got {v!r}")
    return v


@dataclass
class GridSpec:
    z_min: float
    z_max: float
    points: int
    x_min: Optional[float] = None
    x_max: Optional[float] = None
    x_points: Optional[int] = None

    def z(self):
        import numpy as np

        return np.linspace(self.z_min, self.z_max, self.points)

    def x(self):
        import numpy as np

        if self.x_points is None:
            raise ConfigError("[grid]: 2D runs need x_min, x_max and x_points")
        return np.linspace(self.x_min, self.x_max, self.x_points)


@dataclass
class Analysis:
    eta: float = 10.0
    gravity: bool = False
    stark: bool = False
    acceleration: float = CONST.g_earth
    workers: int = 1
    omega_min: Optional[float] = None
    omega_max: Optional[float] = None
    d_min: Optional[float] = None
    d_max: Optional[float] = None
    resolution: int = 60
    frames: int = 9
    sample_rate: Optional[float] = None
    duration: Optional[float] = None
    window: Optional[int] = None
    window_kind: str = "rect"


@dataclass
class OutputSpec:
    directory: str
    formats: tuple[str, ...] = ("csv", "svg")


@dataclass
class RunConfig:
    species: AtomSpecies
    manifold: Manifold
    m_pair: Optional[tuple[float, float]] = None
    field: Optional[FieldModel] = None
    comb: Optional[RfComb] = None
    ramp: Optional[CombRamp] = None
    pair: Optional[HyperfinePair] = None
    drive: Optional[MicrowaveDrive] = None
    grid: Optional[GridSpec] = None
    analysis: Analysis = dc_field(default_factory=Analysis)
    output: OutputSpec = dc_field(default_factory=lambda: OutputSpec(default_output_dir()))
    resolved: dict = dc_field(default_factory=dict)


def default_output_dir() -> str:
    return os.environ.get(OUT_ENV, DEFAULT_OUT)


# -- sections ------------------------------------------------------------


def _species(t: dict):
    sec = "species"
    _check_keys(t, {"preset", "name", "mass", "manifolds", "F", "m_pair"}, sec)
    if "preset" in t:
        if {"name", "mass", "manifolds"} & set(t):
            raise ConfigError("[species]: give either preset or explicit name/mass/manifolds, not both")
        try:
            species = PRESETS[str(t["preset"]).lower()]
        except KeyError:
            raise ConfigError(f"[species]: unknown preset {t['preset']!r}; choose from {sorted(PRESETS)}") from None
    else:
        mans = []
        for i, m in enumerate(_get(t, "manifolds", sec)):
            s = f"species.manifolds[{i}]"
            _check_keys(m, {"F", "g_F", "E_offset"}, s)
            off = m.get("E_offset", "0 J")
            try:
                E = parse_quantity(off, "energy")
            except ConfigError:
                E = HBAR * _qty(m, "E_offset", "angular", s)
            try:
                mans.append(Manifold(_num(m, "F", s), _num(m, "g_F", s), E))
            except ValueError as exc:
                raise ConfigError(f"[{s}]: {exc}") from None
        try:
            species = AtomSpecies(str(_get(t, "name", sec)), _qty(t, "mass", "mass", sec), tuple(mans))
        except ValueError as exc:
            raise ConfigError(f"[species]: {exc}") from None
    try:
        manifold = species.manifold(_num(t, "F", sec, default=None))
    except KeyError as exc:
        raise ConfigError(f"[species]: {exc.args[0]}") from None
    m_pair = t.get("m_pair")
    if m_pair is not None:
        if len(m_pair) != 2 or abs(m_pair[1] - m_pair[0]) != 1 or max(map(abs, m_pair)) > manifold.F:
            raise ConfigError(f"[species] m_pair {m_pair} is not an adjacent sublevel pair of F={manifold.F}")
        m_pair = tuple(sorted(float(m) for m in m_pair))
    return species, manifold, m_pair


def _field(t: dict) -> FieldModel:
    sec = "field"
    variant = _get(t, "variant", sec)
    if variant == "linear":
        _check_keys(t, {"variant", "b", "B0"}, sec)
        b, B0 = _qty(t, "b", "gradient", sec), _qty(t, "B0", "field", sec, 0.0)
        if b < 0 or B0 < 0:
            raise ConfigError("[field]: gradient and offset must be non-negative")
        return Linear1D(b, B0)
    if variant == "quadrupole":
        _check_keys(t, {"variant", "b_x", "b_z", "B0"}, sec)
        bx, bz = _qty(t, "b_x", "gradient", sec), _qty(t, "b_z", "gradient", sec)
        B0 = _qty(t, "B0", "field", sec, 0.0)
        if min(bx, bz, B0) < 0:
            raise ConfigError("[field]: gradients and offset must be non-negative")
        return Quadrupole2D(bx, bz, B0)
    raise ConfigError(f"[field] variant must be 'linear' or 'quadrupole', got {variant!r}")


def _comb(t: dict):
    sec = "comb"
    _check_keys(t, {"frequencies", "start", "spacing", "count", "rabi", "ramp"}, sec)
    if "frequencies" in t:
        if {"start", "spacing", "count"} & set(t):
            raise ConfigError("[comb]: give either frequencies or start/spacing/count")
        omegas = []
        for i, f in enumerate(t["frequencies"]):
            try:
                omegas.append(parse_quantity(f, "angular"))
            except ConfigError as exc:
                raise ConfigError(f"[comb] frequencies[{i}]: {exc}") from None
        bad = [
            f"#{i + 1} ({t['frequencies'][i]}) >= #{i + 2} ({t['frequencies'][i + 1]})"
            for i in range(len(omegas) - 1)
            if not omegas[i + 1] > omegas[i]
        ]
        if bad:
            raise ConfigError("[comb]: frequencies must be strictly ascending; offending entries: " + "; ".join(bad))
    else:
        start, spacing = _qty(t, "start", "angular", sec), _qty(t, "spacing", "angular", sec)
        count = _num(t, "count", sec, int)
        if spacing <= 0 or count < 1:
            raise ConfigError("[comb]: spacing must be positive and count >= 1")
        omegas = [start + k * spacing for k in range(count)]
    rabi = _get(t, "rabi", sec)
    rabis = [parse_quantity(r, "angular") for r in (rabi if isinstance(rabi, list) else [rabi])]
    try:
        comb = RfComb(tuple(omegas), tuple(rabis))
    except ValueError as exc:
        raise ConfigError(f"[comb]: {exc}") from None
    ramp = _ramp(t["ramp"], comb) if "ramp" in t else None
    return comb, ramp


def _ramp(t: dict, comb: RfComb) -> CombRamp:
    sec = "comb.ramp"
    _check_keys(t, {"t_n", "phase_mode", "envelopes", "static"}, sec)
    t_n = _qty(t, "t_n", "time", sec)
    amps = phases = None
    if "envelopes" in t:
        env = t["envelopes"]
        if len(env) != len(comb):
            raise ConfigError(f"[{sec}]: need one envelope per comb component ({len(comb)})")
        amps, phases = [], []
        for i, e in enumerate(env):
            s = f"{sec}.envelopes[{i}]"
            _check_keys(e, {"amplitude", "am_depth", "am_freq", "pm_depth", "pm_freq"}, s)
            amps.append(
                Envelope(_num(e, "amplitude", s, default=1.0), _num(e, "am_depth", s, default=0.0),
                         _qty(e, "am_freq", "angular", s, 0.0))
            )
            phases.append(PhaseWobble(_num(e, "pm_depth", s, default=0.0), _qty(e, "pm_freq", "angular", s, 0.0)))
        amps, phases = tuple(amps), tuple(phases)
    try:
        return CombRamp(comb, t_n, amps, phases, str(t.get("phase_mode", "continuous")), _bool(t, "static", sec, False))
    except ValueError as exc:
        raise ConfigError(f"[{sec}]: {exc}") from None


def _drive(t: dict, species: AtomSpecies):
    sec = "drive"
    _check_keys(t, {"state_a", "state_b", "detuning", "rabi"}, sec)
    try:
        pair = HyperfinePair.from_species(species, tuple(_get(t, "state_a", sec)), tuple(_get(t, "state_b", sec)))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"[drive]: {exc}") from None
    rabi = _qty(t, "rabi", "angular", sec)
    if rabi < 0:
        raise ConfigError("[drive]: rabi must be non-negative")
    return pair, MicrowaveDrive.detuned(pair, _qty(t, "detuning", "angular", sec), rabi)


def _grid(t: dict) -> GridSpec:
    sec = "grid"
    _check_keys(t, {"z_min", "z_max", "points", "x_min", "x_max", "x_points"}, sec)
    g = GridSpec(_qty(t, "z_min", "length", sec), _qty(t, "z_max", "length", sec), _num(t, "points", sec, int))
    if not g.z_max > g.z_min or g.points < 2:
        raise ConfigError("[grid]: need z_max > z_min and points >= 2")
    if {"x_min", "x_max", "x_points"} & set(t):
        g.x_min, g.x_max = _qty(t, "x_min", "length", sec), _qty(t, "x_max", "length", sec)
        g.x_points = _num(t, "x_points", sec, int)
        if not g.x_max > g.x_min or g.x_points < 2:
            raise ConfigError("[grid]: need x_max > x_min and x_points >= 2")
    return g


def _analysis(t: dict) -> Analysis:
    sec = "analysis"
    a = Analysis()
    allowed = {
        "eta", "gravity", "stark", "acceleration", "workers", "omega_min", "omega_max", "d_min", "d_max",
        "resolution", "frames", "sample_rate", "duration", "window", "window_kind",
    }
    _check_keys(t, allowed, sec)
    a.eta = _num(t, "eta", sec, default=a.eta)
    a.gravity = _bool(t, "gravity", sec, a.gravity)
    a.stark = _bool(t, "stark", sec, a.stark)
    a.acceleration = _qty(t, "acceleration", "acceleration", sec, a.acceleration)
    a.workers = _num(t, "workers", sec, int, a.workers)
    for k in ("omega_min", "omega_max"):
        setattr(a, k, _qty(t, k, "angular", sec, None))
    for k in ("d_min", "d_max"):
        setattr(a, k, _qty(t, k, "length", sec, None))
    a.resolution = _num(t, "resolution", sec, int, a.resolution)
    a.frames = _num(t, "frames", sec, int, a.frames)
    a.sample_rate = _qty(t, "sample_rate", "rate", sec, None)
    a.duration = _qty(t, "duration", "time", sec, None)
    a.window = _num(t, "window", sec, int, None)
    a.window_kind = str(t.get("window_kind", a.window_kind))
    if a.eta <= 0 or a.workers < 1 or a.acceleration <= 0:
        raise ConfigError("[analysis]: eta and acceleration must be positive, workers >= 1")
    if a.window_kind not in ("rect", "hann"):
        raise ConfigError("[analysis] window_kind must be 'rect' or 'hann'")
    return a


def _output(t: dict) -> OutputSpec:
    _check_keys(t, {"directory", "formats"}, "output")
    formats = tuple(t.get("formats", ("csv", "svg")))
    bad = [f for f in formats if f not in FORMATS]
    if bad:
        raise ConfigError(f"[output]: unknown format(s) {bad}; allowed {list(FORMATS)}")
    return OutputSpec(str(t.get("directory", default_output_dir())), formats)


SECTIONS = {"species", "field", "comb", "drive", "grid", "analysis", "output"}


def parse_config(text: str) -> RunConfig:
    """Parse TOML run-configuration text into SI values.

    Raises :class:`ConfigError` for syntax errors (with line number), missing
    units, unknown keys and physically invalid values.
    """
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"syntax error: {exc}") from None
    _check_keys(raw, SECTIONS, "top level")
    if "species" not in raw:
        raise ConfigError("missing [species] section")
    species, manifold, m_pair = _species(raw["species"])
    cfg = RunConfig(species, manifold, m_pair)
    if "field" in raw:
        cfg.field = _field(raw["field"])
    if "comb" in raw:
        cfg.comb, cfg.ramp = _comb(raw["comb"])
    if "drive" in raw:
        cfg.pair, cfg.drive = _drive(raw["drive"], species)
    if "grid" in raw:
        cfg.grid = _grid(raw["grid"])
    cfg.analysis = _analysis(raw.get("analysis", {}))
    cfg.output = _output(raw.get("output", {}))
    cfg.resolved = resolved_parameters(cfg)
    return cfg


def resolved_parameters(cfg: RunConfig) -> dict[str, Any]:
    """Plain-data SI echo of a configuration, for the manifest and console."""
    out: dict[str, Any] = {
        "species": {
            "name": cfg.species.name,
            "mass_kg": cfg.species.mass,
            "F": cfg.manifold.F,
            "g_F": cfg.manifold.g_F,
            "m_pair": list(cfg.m_pair) if cfg.m_pair else None,
        }
    }
    if cfg.field is not None:
        if isinstance(cfg.field, Linear1D):
            out["field"] = {"variant": "linear", "b_T_per_m": cfg.field.b, "B0_T": cfg.field.B0}
        else:
            out["field"] = {
                "variant": "quadrupole", "b_x_T_per_m": cfg.field.b_x, "b_z_T_per_m": cfg.field.b_z,
                "B0_T": cfg.field.B0,
            }
    if cfg.comb is not None:
        out["comb"] = {"omega_rad_s": list(cfg.comb.omegas), "rabi_rad_s": list(cfg.comb.rabis)}
    if cfg.ramp is not None:
        out["ramp"] = {"t_n_s": cfg.ramp.t_n, "phase_mode": cfg.ramp.phase_mode}
    if cfg.drive is not None:
        out["drive"] = {
            "state_a": [cfg.pair.state_a.F, cfg.pair.state_a.m_F],
            "state_b": [cfg.pair.state_b.F, cfg.pair.state_b.m_F],
            "omega_mw_rad_s": cfg.drive.omega_mw,
            "rabi_rad_s": cfg.drive.Omega,
        }
    if cfg.grid is not None:
        out["grid"] = {k: v for k, v in vars(cfg.grid).items() if v is not None}
    out["analysis"] = {k: v for k, v in vars(cfg.analysis).items() if v is not None}
    return out
