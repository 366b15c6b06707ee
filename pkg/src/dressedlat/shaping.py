"""Microwave dressing between hyperfine manifolds, e.g. a flat-bottom trap for 87Rb.

Two states |a> = |F_a, m_a> and |b> = |F_b, m_b> are coupled by a microwave
at omega_mw. In the frame rotating with the drive, |a> carries one photon, so
the bare rotating-frame energies are E_a(B) + hbar omega_mw and E_b(B). Only
the linear Zeeman effect is modelled.

Energies are referenced to the upper branch at z = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dressing import AdiabaticPotentialGrid
from .physcore import HBAR, K_B, MU_B, AtomSpecies, FieldModel, Quadrupole2D, field_magnitude


@dataclass(frozen=True)
class HyperfineState:
    F: float
    m_F: float
    g_F: float
    E_offset: float = 0.0

    def energy(self, B):
        """Energy relative to nothing in particular: offset plus linear Zeeman shift."""
        return self.E_offset + MU_B * self.g_F * self.m_F * np.asarray(B, dtype=float)


@dataclass(frozen=True)
class HyperfinePair:
    state_a: HyperfineState
    state_b: HyperfineState
    species: AtomSpecies

    def __post_init__(self):
        if self.state_a.F == self.state_b.F:
            raise ValueError("the two states must belong to different hyperfine manifolds")

    @classmethod
    def from_species(cls, species: AtomSpecies, a: tuple[float, float], b: tuple[float, float]) -> "HyperfinePair":
        """Build from ``(F, m_F)`` tuples looked up in the species' manifolds."""
        states = []
        for F, m in (a, b):
            man = species.manifold(F)
            if abs(m) > F:
                raise ValueError(f"m_F={m} out of range for F={F}")
            states.append(HyperfineState(F, m, man.g_F, man.E_offset))
        return cls(states[0], states[1], species)

    @property
    def field_free_frequency(self) -> float:
        """(E_b - E_a) / hbar at B = 0, in rad/s."""
        return (self.state_b.E_offset - self.state_a.E_offset) / HBAR

    def swapped(self) -> "HyperfinePair":
        return HyperfinePair(self.state_b, self.state_a, self.species)


@dataclass(frozen=True)
class MicrowaveDrive:
    omega_mw: float  # rad/s
    Omega: float  # rad/s

    def __post_init__(self):
        if self.Omega < 0:
            raise ValueError("Rabi frequency must be non-negative")

    @classmethod
    def detuned(cls, pair: HyperfinePair, detuning: float, Omega: float) -> "MicrowaveDrive":
        """Drive ``detuning`` (rad/s, red = negative) from the field-free a <-> b resonance."""
        return cls(pair.field_free_frequency + detuning, Omega)


def _rotating_energies(pair: HyperfinePair, drive: MicrowaveDrive, B):
    """Bare rotating-frame energies (a + photon, b), relative to E_b's offset."""
    a, b = pair.state_a, pair.state_b
    B = np.asarray(B, dtype=float)
    ref = b.E_offset
    e_a = (a.E_offset - ref) + HBAR * drive.omega_mw + MU_B * a.g_F * a.m_F * B
    e_b = MU_B * b.g_F * b.m_F * B
    return e_a, e_b


def pair_detuning(pair: HyperfinePair, drive: MicrowaveDrive, B):
    """Local detuning delta = (E_b(B) - E_a(B)) / hbar - omega_mw, in rad/s."""
    e_a, e_b = _rotating_energies(pair, drive, B)
    return (e_b - e_a) / HBAR


def resonance_field(pair: HyperfinePair, drive: MicrowaveDrive) -> float:
    """|B| at which the drive is resonant (linear Zeeman model)."""
    a, b = pair.state_a, pair.state_b
    slope = MU_B * (b.g_F * b.m_F - a.g_F * a.m_F) / HBAR
    if slope == 0:
        raise ValueError("pair has no differential Zeeman shift; resonance is field independent")
    return -float(pair_detuning(pair, drive, 0.0)) / slope


def _dressed(pair, drive, B):
    e_a, e_b = _rotating_energies(pair, drive, B)
    mean = 0.5 * (e_a + e_b)
    half_gap = 0.5 * np.hypot(HBAR * drive.Omega, e_b - e_a)
    return mean - half_gap, mean + half_gap


def microwave_dressed_potentials(
    pair: HyperfinePair, drive: MicrowaveDrive, field: FieldModel, grid
) -> AdiabaticPotentialGrid:
    """Lower and upper dressed potentials along ``grid``, referenced to the upper branch at the origin."""
    pos = np.asarray(grid, dtype=float)
    B = field_magnitude(field, pos)
    lo, hi = _dressed(pair, drive, B)
    origin = np.zeros(2) if isinstance(field, Quadrupole2D) else 0.0
    _, ref = _dressed(pair, drive, field_magnitude(field, origin))
    branches = np.stack([lo - ref, hi - ref])
    region = np.zeros(np.shape(B), dtype=int)
    return AdiabaticPotentialGrid(
        pos, branches, region, species=pair.species.name, field=field,
        extra={"reference": "upper branch at origin", "detuning": pair_detuning(pair, drive, B)},
    )


def flatness_metric(branch, positions, region: tuple[float, float]) -> float:
    """Peak-to-peak variation (J) of ``branch`` over ``region[0] <= z <= region[1]``."""
    branch = np.asarray(branch, dtype=float)
    z = np.asarray(positions, dtype=float)
    sel = (z >= region[0]) & (z <= region[1])
    if not np.any(sel):
        raise ValueError(f"no grid points inside {region}")
    v = branch[sel]
    return float(v.max() - v.min())


@dataclass(frozen=True)
class TrapDepth:
    trapped: bool
    joules: float = 0.0
    index_min: int = -1

    @property
    def microkelvin(self) -> float:
        return self.joules / K_B * 1e6


def trap_depth(branch) -> TrapDepth:
    """Lower of the two outward maxima minus the interior minimum.

    A branch whose minimum sits on the grid edge is reported as untrapped.
    """
    v = np.asarray(branch, dtype=float)
    i = int(np.argmin(v))
    if i == 0 or i == v.size - 1:
        return TrapDepth(False)
    barrier = min(v[:i].max(), v[i + 1 :].max())
    depth = barrier - v[i]
    if depth <= 0:
        return TrapDepth(False)
    return TrapDepth(True, float(depth), i)


def upper_barrier_height(pair: HyperfinePair, drive: MicrowaveDrive, B_center: float) -> float:
    """Upper branch at the resonance (delta = 0) minus its value at ``B_center`` (J).

    Grid independent reference scale for the flat-bottom criterion.
    """
    _, at_res = _dressed(pair, drive, resonance_field(pair, drive))
    _, at_center = _dressed(pair, drive, B_center)
    return float(at_res - at_center)


def asymptotic_lower_depth(pair: HyperfinePair, drive: MicrowaveDrive, B_center: float) -> float:
    """Closed-form lower-branch depth for a pair with one field-insensitive state.

    Far beyond resonance the lower branch approaches the bare energy of the
    field-insensitive state, so the depth is that energy minus the lower
    branch at ``B_center``.
    """
    a, b = pair.state_a, pair.state_b
    lo_c, _ = _dressed(pair, drive, B_center)
    e_a, e_b = _rotating_energies(pair, drive, B_center)
    for flat, other, e_flat in ((b, a, e_b), (a, b, e_a)):
        if flat.g_F * flat.m_F == 0:
            if other.g_F * other.m_F <= 0:
                raise ValueError("lower branch is not bounded: the other state is not a low-field seeker")
            return float(e_flat - lo_c)
    raise ValueError("closed-form depth needs one state with g_F m_F = 0")
