"""Physical constants, atomic species, static field models and Zeeman/Rabi formulas.

Everything is SI internally; frequencies are angular (rad/s). Unit strings
only appear at the configuration boundary, through :func:`convert_units`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import ConfigError

__all__ = [
    "CONSTANTS_SNAPSHOT",
    "PhysicalConstants",
    "CONST",
    "Manifold",
    "AtomSpecies",
    "LI6",
    "LI7",
    "RB87",
    "PRESETS",
    "get_species",
    "Linear1D",
    "Quadrupole2D",
    "field_magnitude",
    "zeeman_energy",
    "rabi_frequency",
    "convert_units",
    "parse_quantity",
]

CONSTANTS_SNAPSHOT = "CODATA-2018"


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants (CODATA 2018). ``hbar`` is derived from the exact ``h``."""

    mu_B: float = 9.2740100783e-24  # J/T
    h: float = 6.62607015e-34  # J s, exact
    k_B: float = 1.380649e-23  # J/K, exact
    u: float = 1.66053906660e-27  # kg
    g_earth: float = 9.80665  # m/s^2, standard gravity
    snapshot: str = CONSTANTS_SNAPSHOT

    @property
    def hbar(self) -> float:
        return self.h / (2.0 * math.pi)


CONST = PhysicalConstants()
MU_B = CONST.mu_B
H = CONST.h
HBAR = CONST.hbar
K_B = CONST.k_B


# -- species ---------------------------------------------------------------


def _check_spin(F: float) -> None:
    if F <= 0 or (2 * F) != int(2 * F):
        raise ValueError(f"F must be a positive half-integer, got {F}")


@dataclass(frozen=True)
class Manifold:
    F: float
    g_F: float
    E_offset: float = 0.0  # J

    def __post_init__(self):
        _check_spin(self.F)

    @property
    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers, ascending."""
        return np.arange(-self.F, self.F + 0.5, 1.0)


@dataclass(frozen=True)
class AtomSpecies:
    name: str
    mass: float
    manifolds: tuple[Manifold, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        if not self.manifolds:
            raise ValueError("species needs at least one hyperfine manifold")
        ordered = tuple(sorted(self.manifolds, key=lambda m: m.E_offset))
        object.__setattr__(self, "manifolds", ordered)

    def manifold(self, F: float | None = None) -> Manifold:
        """Return the manifold with total spin ``F`` (the lowest one if ``F`` is None)."""
        if F is None:
            return self.manifolds[0]
        for m in self.manifolds:
            if m.F == F:
                return m
        raise KeyError(f"{self.name} has no F={F} manifold")


LI6 = AtomSpecies(
    "Li6", 6.0151228874 * CONST.u, (Manifold(0.5, -2.0 / 3.0, 0.0),)
)
LI7 = AtomSpecies(
    "Li7",
    7.0160034366 * CONST.u,
    (Manifold(1.0, -0.5, 0.0), Manifold(2.0, 0.5, CONST.h * 803.5040866e6)),
)
RB87 = AtomSpecies(
    "Rb87",
    86.909180527 * CONST.u,
    (Manifold(1.0, -0.5, 0.0), Manifold(2.0, 0.5, CONST.h * 6834.682610904e6)),
)
PRESETS = {"li6": LI6, "li7": LI7, "rb87": RB87}


def get_species(name: str) -> AtomSpecies:
    try:
        return PRESETS[name.lower()]
    except KeyError:
        raise KeyError(f"unknown species preset {name!r}; choose from {sorted(PRESETS)}") from None


# -- static field models ---------------------------------------------------


@dataclass(frozen=True)
class Linear1D:
    """|B(z)| = sqrt((b z)^2 + B0^2); the offset is combined in quadrature."""

    b: float
    B0: float = 0.0

    def __post_init__(self):
        if self.b < 0 or self.B0 < 0:
            raise ValueError("gradient and offset must be non-negative")

    ndim = 1


@dataclass(frozen=True)
class Quadrupole2D:
    """|B(x, z)| = sqrt((b_x x)^2 + (b_z z)^2 + B0^2)."""

    b_x: float
    b_z: float
    B0: float = 0.0

    def __post_init__(self):
        if self.b_x < 0 or self.b_z < 0 or self.B0 < 0:
            raise ValueError("gradients and offset must be non-negative")

    ndim = 2


FieldModel = Union[Linear1D, Quadrupole2D]


def field_magnitude(model: FieldModel, position) -> np.ndarray | float:
    """Static field magnitude in tesla.

    For :class:`Linear1D` ``position`` is z (scalar or array). For
    :class:`Quadrupole2D` it is a pair ``(x, z)``, or an array whose last
    axis has length 2.
    """
    if isinstance(model, Linear1D):
        z = np.asarray(position, dtype=float)
        if z.ndim > 1:
            raise ValueError("Linear1D expects scalar z positions or a 1D array of them")
        out = np.hypot(model.b * z, model.B0)
    elif isinstance(model, Quadrupole2D):
        p = np.asarray(position, dtype=float)
        if p.ndim == 0 or p.shape[-1] != 2:
            raise ValueError("Quadrupole2D expects (x, z) positions")
        x, z = p[..., 0], p[..., 1]
        out = np.sqrt((model.b_x * x) ** 2 + (model.b_z * z) ** 2 + model.B0**2)
    else:
        raise TypeError(f"unknown field model {type(model).__name__}")
    return float(out) if np.ndim(out) == 0 else out


# -- Zeeman and Rabi -------------------------------------------------------


def _check_m(F: float, m_F: float) -> None:
    if abs(m_F) > F + 1e-12 or (2 * (F - m_F)) != round(2 * (F - m_F)):
        raise ValueError(f"m_F={m_F} is not a sublevel of F={F}")


def zeeman_energy(manifold: Manifold, m_F: float, B):
    """Linear Zeeman energy mu_B g_F m_F B in joules."""
    _check_m(manifold.F, m_F)
    return MU_B * manifold.g_F * m_F * (np.asarray(B, dtype=float) if np.ndim(B) else B)


def rabi_frequency(
    B_rf: Sequence[float],
    e_B: Sequence[float],
    g_F: float,
    m_F: float,
    m_F2: float,
    F: float,
) -> float:
    """Rabi frequency (rad/s) of a linearly polarised rf field between adjacent sublevels.

    Only the rf component perpendicular to the local static field couples.
    """
    if abs(abs(m_F - m_F2) - 1.0) > 1e-12:
        raise ValueError("rf only couples adjacent sublevels, |m_F - m_F'| = 1")
    _check_m(F, m_F)
    _check_m(F, m_F2)
    e = np.asarray(e_B, dtype=float)
    if abs(np.linalg.norm(e) - 1.0) > 1e-12:
        raise ValueError("e_B must be a unit vector")
    perp = np.linalg.norm(np.cross(np.asarray(B_rf, dtype=float), e))
    spin = math.sqrt(F * (F + 1) - m_F * m_F2)
    return abs(MU_B * g_F / (4.0 * HBAR) * perp * spin)


# -- units -----------------------------------------------------------------

# unit -> (dimension, factor to the internal SI unit)
_UNITS: dict[str, tuple[str, float]] = {
    "T/m": ("gradient", 1.0),
    "G/cm": ("gradient", 1e-2),
    "T": ("field", 1.0),
    "mT": ("field", 1e-3),
    "G": ("field", 1e-4),
    "mG": ("field", 1e-7),
    "rad/s": ("angular", 1.0),
    "Hz": ("angular", 2.0 * math.pi),
    "kHz": ("angular", 2.0 * math.pi * 1e3),
    "MHz": ("angular", 2.0 * math.pi * 1e6),
    "GHz": ("angular", 2.0 * math.pi * 1e9),
    "J": ("energy", 1.0),
    "K": ("energy", CONST.k_B),
    "mK": ("energy", CONST.k_B * 1e-3),
    "uK": ("energy", CONST.k_B * 1e-6),
    "nK": ("energy", CONST.k_B * 1e-9),
    "m": ("length", 1.0),
    "mm": ("length", 1e-3),
    "um": ("length", 1e-6),
    "nm": ("length", 1e-9),
    "s": ("time", 1.0),
    "ms": ("time", 1e-3),
    "us": ("time", 1e-6),
    "m/s": ("velocity", 1.0),
    "mm/s": ("velocity", 1e-3),
    "m/s^2": ("acceleration", 1.0),
    "kg": ("mass", 1.0),
    "u": ("mass", CONST.u),
    "S/s": ("rate", 1.0),
    "MS/s": ("rate", 1e6),
}
_ALIASES = {"μm": "um", "µm": "um", "μK": "uK", "µK": "uK", "μs": "us", "µs": "us", "m/s2": "m/s^2"}


def _lookup(unit: str) -> tuple[str, float]:
    unit = _ALIASES.get(unit.strip(), unit.strip())
    try:
        return _UNITS[unit]
    except KeyError:
        raise ValueError(f"unsupported unit {unit!r}") from None


def unit_dimension(unit: str) -> str:
    return _lookup(unit)[0]


def convert_units(value, from_unit: str, to_unit: str):
    """Convert between two units of the same dimension.

    ``Hz``-type units convert to ``rad/s`` with the 2*pi factor; temperature
    units convert to energy through k_B.

    >>> convert_units(200, "G/cm", "T/m")
    2.0
    """
    d1, f1 = _lookup(from_unit)
    d2, f2 = _lookup(to_unit)
    if d1 != d2:
        raise ValueError(f"cannot convert {from_unit} ({d1}) to {to_unit} ({d2})")
    if f1 == f2:
        return value
    return value * f1 / f2


_QTY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S+)\s*$")


def parse_quantity(text: str, dimension: str) -> float:
    """Parse ``"200 G/cm"`` into an SI float, checking the expected dimension."""
    if not isinstance(text, str):
        raise ConfigError(f"expected a quantity with unit suffix, got {text!r}")
    m = _QTY.match(text)
    if not m:
        raise ConfigError(f"missing or malformed unit in {text!r}")
    number, unit = m.groups()
    try:
        dim, factor = _lookup(unit)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if dim != dimension:
        raise ConfigError(f"{text!r} has dimension {dim}, expected {dimension}")
    return float(number) * factor

