"""Dressed-state Hamiltonians and unfolded adiabatic potentials for rf combs.

Position enters every calculation only through the Zeeman splitting between
adjacent sublevels, ``s = mu_B |g_F| |B|``. The comb component closest to
resonance with ``s`` defines the local dressed basis; the piecewise dressed
energies are then stitched into continuous adiabatic potentials.

The sign of g_F only decides which bare m_F state is the upper one. With a
linearly polarised drive both rotating components are present, so resonance
is reached for either sign and all position-dependent formulas use |g_F|.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Sequence

import numpy as np

from .eigen import tridiagonal_eigvalsh
from .errors import ModelValidityWarning, ResolutionError, SingularInputError
from .physcore import (
    CONST,
    HBAR,
    MU_B,
    AtomSpecies,
    FieldModel,
    Linear1D,
    Manifold,
    Quadrupole2D,
    field_magnitude,
)

MIN_POINTS_PER_REGION = 8
STARK_RATIO_WARN = 0.5


@dataclass(frozen=True)
class RfComb:
    """Ordered rf frequency components (rad/s) with their Rabi frequencies (rad/s)."""

    omegas: tuple[float, ...]
    rabis: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.omegas)
        r = tuple(float(x) for x in self.rabis)
        if len(r) == 1 and len(w) > 1:
            r = r * len(w)
        if not w:
            raise ValueError("comb needs at least one component")
        if len(r) != len(w):
            raise ValueError("one Rabi frequency per component (or a single shared one)")
        bad = [(i + 1, w[i], w[i + 1]) for i in range(len(w) - 1) if not w[i + 1] > w[i]]
        if bad:
            raise ValueError(f"comb frequencies must be strictly increasing; offending (index, w_n, w_n+1): {bad}")
        if w[0] <= 0:
            raise ValueError("comb frequencies must be positive")
        if any(x < 0 for x in r):
            raise ValueError("Rabi frequencies must be non-negative")
        object.__setattr__(self, "omegas", w)
        object.__setattr__(self, "rabis", r)

    @classmethod
    def uniform(cls, first: float, spacing: float, count: int, rabi: float) -> "RfComb":
        return cls(tuple(first + spacing * k for k in range(count)), (rabi,))

    def __len__(self) -> int:
        return len(self.omegas)

    @property
    def omega(self) -> np.ndarray:
        return np.asarray(self.omegas)

    @property
    def rabi(self) -> np.ndarray:
        return np.asarray(self.rabis)

    @property
    def min_spacing(self) -> float:
        return float(np.min(np.diff(self.omega))) if len(self) > 1 else np.inf

    def with_omegas(self, omegas) -> "RfComb":
        return RfComb(tuple(omegas), self.rabis)


def check_validity(comb: RfComb) -> bool:
    """Warn when components are too close for the nearest-resonance picture."""
    if len(comb) > 1 and comb.min_spacing < 2.0 * max(comb.rabis):
        warnings.warn(
            f"comb spacing {comb.min_spacing:.4g} rad/s < 2 x max Rabi frequency "
            f"{max(comb.rabis):.4g} rad/s; nearest-resonance approximation degrades",
            ModelValidityWarning,
            stacklevel=3,
        )
        return False
    return True


@dataclass
class AdiabaticPotentialGrid:
    """Per-position branch energies (J), sorted ascending along axis 0.

    ``branches`` has shape ``(n_branches,) + grid_shape``. For 1D grids
    ``positions`` is z; for 2D maps it has shape ``grid_shape + (2,)`` holding
    (x, z).
    """

    positions: np.ndarray
    branches: np.ndarray
    region: np.ndarray
    stark_corrected: bool = False
    gravity: bool = False
    species: Optional[str] = None
    field: Optional[FieldModel] = None
    extra: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if not np.all(np.isfinite(self.branches)):
            raise ValueError("adiabatic potentials contain non-finite values")

    @property
    def n_branches(self) -> int:
        return self.branches.shape[0]

    @property
    def lower(self) -> np.ndarray:
        return self.branches[0]

    @property
    def upper(self) -> np.ndarray:
        return self.branches[-1]


# -- single-component dressed states ----------------------------------------


def two_level_hamiltonian(B: float, omega: float, Omega: float, g_F: float) -> np.ndarray:
    """2x2 rotating-frame Hamiltonian (J) of a two-level system with signed g_F."""
    if Omega < 0:
        raise ValueError("Omega must be non-negative")
    half_det = 0.5 * (MU_B * g_F * B - HBAR * omega)
    c = 0.5 * HBAR * Omega
    return np.array([[half_det, c], [c, -half_det]])


def dressed_eigenvalues(B, omega, Omega, g_F):
    """Closed-form eigenvalues ``(E_plus, E_minus)`` of :func:`two_level_hamiltonian`."""
    det = MU_B * g_F * np.asarray(B, dtype=float) - HBAR * omega
    e = 0.5 * np.hypot(HBAR * np.asarray(Omega, dtype=float), det)
    return e, -e


def off_resonant_shift(B, omega, Omega, g_F):
    """Far-detuned expansion of the dressed energies: bare term plus dynamic Stark shift.

    The returned pair follows the bare states, so it is odd in the detuning
    (for negative detuning the "+" value is the lower level).
    """
    det = MU_B * g_F * np.asarray(B, dtype=float) - HBAR * omega
    if np.any(det == 0):
        raise SingularInputError("off-resonant expansion is singular at zero detuning")
    a = HBAR * np.asarray(Omega, dtype=float)
    if np.any(np.abs(a / det) >= STARK_RATIO_WARN):
        warnings.warn("hbar*Omega is not small compared with the detuning", ModelValidityWarning, stacklevel=2)
    plus = 0.5 * det + a * a / (4.0 * det)
    return plus, -plus


# -- local resonance and Stark corrections ---------------------------------


def splitting(B, g_F: float):
    """Adjacent-sublevel Zeeman splitting mu_B |g_F| |B| in joules."""
    return MU_B * abs(g_F) * np.abs(B)


def switch_splittings(comb: RfComb) -> np.ndarray:
    """Splittings at which the nearest-resonant component changes (midpoints)."""
    w = comb.omega
    return 0.5 * HBAR * (w[:-1] + w[1:])


def resonant_index_from_splitting(s, comb: RfComb):
    """1-based index of the component closest to resonance; ties go to the lower index."""
    n = np.searchsorted(switch_splittings(comb), s, side="left") + 1
    return int(n) if np.ndim(n) == 0 else n


def local_resonant_index(z, field: FieldModel, comb: RfComb, g_F: float):
    """Index n(z) of the comb component closest to resonance at position ``z``."""
    return resonant_index_from_splitting(splitting(field_magnitude(field, z), g_F), comb)


def switch_positions(field: Linear1D, comb: RfComb, g_F: float) -> np.ndarray:
    """Positive z where the local component switches, for a linear gradient.

    Switch points with splitting below the offset field's splitting do not
    exist and are dropped.
    """
    if not isinstance(field, Linear1D):
        raise TypeError("analytic switch positions need a Linear1D field")
    B_s = switch_splittings(comb) / (MU_B * abs(g_F))
    B_s = B_s[B_s > field.B0]
    return np.sqrt(B_s**2 - field.B0**2) / field.b


def _stark_from_splitting(s, n, comb: RfComb):
    s = np.asarray(s, dtype=float)
    n = np.asarray(n)
    total = np.zeros(np.broadcast(s, n).shape)
    for j, (w, r) in enumerate(zip(comb.omegas, comb.rabis), start=1):
        if r == 0.0:
            continue
        det = s - HBAR * w
        mask = n != j
        if np.any(mask & (np.abs(det) <= 4 * np.finfo(float).eps * np.maximum(np.abs(s), HBAR * w))):
            raise SingularInputError(f"off-resonant component {j} is on resonance")
        with np.errstate(divide="ignore", invalid="ignore"):
            term = (HBAR * r) ** 2 / (4.0 * det)
        total = total + np.where(mask, term, 0.0)
    return total


def stark_sum(z, field: FieldModel, comb: RfComb, g_F: float, n=None):
    """Combined dynamic Stark shift L_n (J) of all components except ``n``.

    ``n`` defaults to the locally resonant index.
    """
    s = splitting(field_magnitude(field, z), g_F)
    if n is None:
        n = resonant_index_from_splitting(s, comb)
    out = _stark_from_splitting(s, n, comb)
    return float(out) if out.ndim == 0 else out


def _effective_detuning(s, n, comb: RfComb, stark: bool):
    idx = np.asarray(n) - 1
    det = s - HBAR * comb.omega[idx]
    if stark:
        det = det + 2.0 * _stark_from_splitting(s, n, comb)
    return det


def corrected_eigenvalues(z, field: FieldModel, comb: RfComb, g_F: float):
    """Stark-corrected dressed energies ``(E_plus, E_minus)`` at ``z``."""
    s = splitting(field_magnitude(field, z), g_F)
    n = resonant_index_from_splitting(s, comb)
    det = _effective_detuning(s, n, comb, stark=True)
    e = 0.5 * np.hypot(HBAR * comb.rabi[np.asarray(n) - 1], det)
    return e, -e


# -- unfolding --------------------------------------------------------------


def _unfold_offsets(comb: RfComb) -> np.ndarray:
    """sum_{k<n} (-1)^k hbar w_k for n = 1..N (index n-1)."""
    w = comb.omega
    signs = (-1.0) ** np.arange(1, len(w) + 1)
    return np.concatenate([[0.0], np.cumsum(signs * HBAR * w)[:-1]])


def two_level_upper(s, n, comb: RfComb, stark: bool = False, rabi_scale=None):
    """Unfolded "+" potential for splitting ``s`` evaluated in region ``n``.

    ``n`` may be forced (e.g. to evaluate both one-sided limits at a switch
    point); the "-" potential is its negative.
    """
    s = np.asarray(s, dtype=float)
    n = np.asarray(n)
    idx = n - 1
    rabi = comb.rabi[idx]
    if rabi_scale is not None:
        rabi = rabi * rabi_scale
    det = _effective_detuning(s, n, comb, stark)
    e_plus = 0.5 * np.hypot(HBAR * rabi, det)
    sign = np.where(n % 2 == 0, 1.0, -1.0)
    return sign * (e_plus - 0.5 * HBAR * comb.omega[idx]) - _unfold_offsets(comb)[idx]


def _check_resolution(n: np.ndarray) -> None:
    """Every region crossed by a 1D grid needs enough points."""
    if n.size < 2:
        return
    change = np.flatnonzero(np.diff(n) != 0)
    if np.any(np.abs(np.diff(n)) > 1):
        raise ResolutionError("grid skips a comb region entirely")
    edges = np.concatenate([[0], change + 1, [n.size]])
    runs = np.diff(edges)
    # the first and last runs are cut by the grid edges
    interior = runs[1:-1]
    if interior.size and interior.min() < MIN_POINTS_PER_REGION:
        raise ResolutionError(
            f"only {interior.min()} grid points in a comb region; need at least {MIN_POINTS_PER_REGION}"
        )


def _chunked(func, arrays, workers: int):
    """Evaluate ``func`` over position chunks; output order never depends on ``workers``."""
    size = arrays[0].shape[0]
    if workers <= 1 or size < 2 * workers:
        return func(*arrays)
    bounds = np.linspace(0, size, workers + 1).astype(int)
    parts = [tuple(a[lo:hi] for a in arrays) for lo, hi in zip(bounds[:-1], bounds[1:])]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda p: func(*p), parts))
    return np.concatenate(results, axis=-1)


def _pair_mean_energy(manifold: Optional[Manifold], m_pair, B):
    if manifold is None or m_pair is None:
        return 0.0
    m_lo, m_hi = sorted(m_pair)
    if m_hi - m_lo != 1 or abs(m_hi) > manifold.F or abs(m_lo) > manifold.F:
        raise ValueError(f"m_pair {m_pair} is not an adjacent sublevel pair of F={manifold.F}")
    return MU_B * manifold.g_F * 0.5 * (m_lo + m_hi) * B


def unfold_adiabatic(
    positions,
    field: FieldModel,
    comb: RfComb,
    species: AtomSpecies,
    stark: bool = False,
    gravity: bool = False,
    manifold: Optional[Manifold] = None,
    m_pair: Optional[Sequence[float]] = None,
    rabi_profile: Optional[Callable] = None,
    workers: int = 1,
    check_resolution: bool = True,
) -> AdiabaticPotentialGrid:
    """Two-branch adiabatic potentials along a 1D grid (or any positions of ``field``).

    Parameters
    ----------
    positions : z values for :class:`Linear1D`, ``(..., 2)`` array for :class:`Quadrupole2D`
    manifold : hyperfine manifold; defaults to the species' lowest one
    m_pair : adjacent (m_F, m_F + 1) pair to dress when F > 1/2
    rabi_profile : optional callable ``positions -> factor`` scaling every
        Rabi frequency, for orientation-dependent coupling
    workers : number of threads for the grid evaluation
    """
    manifold = manifold or species.manifold()
    if manifold.F != 0.5 and m_pair is None:
        raise ValueError("F > 1/2 needs an explicit m_pair (or use multilevel_potentials)")
    check_validity(comb)
    pos = np.asarray(positions, dtype=float)
    B = np.asarray(field_magnitude(field, pos), dtype=float)
    s = splitting(B, manifold.g_F)
    n = resonant_index_from_splitting(s, comb)
    n = np.asarray(n)
    if check_resolution and pos.ndim == 1:
        order = np.argsort(pos, kind="stable")
        _check_resolution(n[order])
    scale = None if rabi_profile is None else np.asarray(rabi_profile(pos), dtype=float)

    flat_s, flat_n = s.reshape(-1), n.reshape(-1)
    flat_scale = None if scale is None else np.broadcast_to(scale, s.shape).reshape(-1)

    def kernel(ss, nn, *sc):
        return two_level_upper(ss, nn, comb, stark, sc[0] if sc else None)

    arrays = (flat_s, flat_n) + ((flat_scale,) if flat_scale is not None else ())
    v_plus = _chunked(kernel, arrays, workers).reshape(s.shape)
    mean = _pair_mean_energy(manifold, m_pair, B)
    lo = -np.abs(v_plus) + mean
    hi = np.abs(v_plus) + mean
    branches = np.stack([lo, hi])
    if gravity:
        branches = branches + _gravity(species, pos, field)
    return AdiabaticPotentialGrid(
        pos, branches, n, stark_corrected=stark, gravity=gravity, species=species.name, field=field
    )


def _gravity(species: AtomSpecies, pos: np.ndarray, field: FieldModel) -> np.ndarray:
    z = pos[..., 1] if isinstance(field, Quadrupole2D) else pos
    return species.mass * CONST.g_earth * z


# -- multilevel -------------------------------------------------------------


def spin_matrix_elements(F: float, Omega: float) -> np.ndarray:
    """Off-diagonal couplings (hbar Omega / 2) sqrt(F(F+1) - m m') for ascending m."""
    m = np.arange(-F, F + 0.5, 1.0)
    return 0.5 * HBAR * Omega * np.sqrt(F * (F + 1) - m[:-1] * m[1:])


def multilevel_hamiltonian(detuning: float, Omega: float, F: float) -> tuple[np.ndarray, np.ndarray]:
    """(diagonal, off-diagonal) of the (2F+1)-level rotating-frame matrix."""
    m = np.arange(-F, F + 0.5, 1.0)
    return m * detuning, spin_matrix_elements(F, Omega)


def multilevel_offsets(comb: RfComb, F: float) -> tuple[np.ndarray, np.ndarray]:
    """Sorted-eigenvalue index and additive offset per (region, branch).

    Branch b is the bare state m = -F + b on the inner side of the first
    resonance, where the adiabatic potential is the bare Zeeman ladder
    m |s|. Across every switch point the branch's sorted position reverses
    (the detuning changes sign) and its offset is fixed by continuity of the
    uncoupled energies; for F = 1/2 this reproduces the two-level unfolding.
    """
    N = len(comb)
    dim = int(round(2 * F)) + 1
    m = np.arange(-F, F + 0.5, 1.0)
    k = np.empty((N, dim), dtype=int)
    c = np.empty((N, dim))
    k[0] = dim - 1 - np.arange(dim)
    c[0] = m * HBAR * comb.omegas[0]
    for r in range(1, N):
        gap = HBAR * (comb.omegas[r] - comb.omegas[r - 1])
        c[r] = c[r - 1] + gap * (k[r - 1] - F)
        k[r] = dim - 1 - k[r - 1]
    return k, c


def _multilevel_points(s, n, comb: RfComb, F: float, stark: bool, rabi_scale=None):
    det = _effective_detuning(s, n, comb, stark)
    rabi = comb.rabi[n - 1]
    if rabi_scale is not None:
        rabi = rabi * rabi_scale
    k, c = multilevel_offsets(comb, F)
    dim = k.shape[1]
    out = np.empty((dim, s.size))
    m = np.arange(-F, F + 0.5, 1.0)
    for i in range(s.size):
        lam = tridiagonal_eigvalsh(m * det[i], spin_matrix_elements(F, rabi[i]))
        r = n[i] - 1
        out[:, i] = lam[k[r]] + c[r]
    return out


def multilevel_potentials(
    positions,
    field: FieldModel,
    comb: RfComb,
    manifold: Manifold,
    species: Optional[AtomSpecies] = None,
    stark: bool = False,
    gravity: bool = False,
    rabi_profile: Optional[Callable] = None,
    workers: int = 1,
    check_resolution: bool = True,
) -> AdiabaticPotentialGrid:
    """(2F+1)-branch adiabatic potentials from the tridiagonal dressed matrix."""
    if gravity and species is None:
        raise ValueError("gravity needs the species mass")
    check_validity(comb)
    pos = np.asarray(positions, dtype=float)
    B = np.asarray(field_magnitude(field, pos), dtype=float)
    s = splitting(B, manifold.g_F)
    n = np.asarray(resonant_index_from_splitting(s, comb))
    if check_resolution and pos.ndim == 1:
        _check_resolution(n[np.argsort(pos, kind="stable")])
    arrays = (s.reshape(-1), n.reshape(-1))
    if rabi_profile is not None:
        arrays += (np.broadcast_to(np.asarray(rabi_profile(pos), dtype=float), s.shape).reshape(-1),)

    def kernel(ss, nn, *sc):
        return _multilevel_points(ss, nn, comb, manifold.F, stark, sc[0] if sc else None)

    vals = _chunked(kernel, arrays, workers).reshape((-1,) + s.shape)
    branches = np.sort(vals, axis=0)
    if gravity:
        branches = branches + _gravity(species, pos, field)
    return AdiabaticPotentialGrid(
        pos,
        branches,
        n,
        stark_corrected=stark,
        gravity=gravity,
        species=species.name if species else None,
        field=field,
        extra={"F": manifold.F, "g_F": manifold.g_F},
    )


def potential_map_2d(
    x,
    z,
    field: Quadrupole2D,
    comb: RfComb,
    species: AtomSpecies,
    manifold: Optional[Manifold] = None,
    stark: bool = False,
    gravity: bool = False,
    workers: int = 1,
) -> AdiabaticPotentialGrid:
    """Adiabatic potentials over the (x, z) plane of a quadrupole field.

    The result's branches have shape ``(n_branches, len(z), len(x))``.
    """
    if not isinstance(field, Quadrupole2D):
        raise TypeError("potential_map_2d needs a Quadrupole2D field")
    manifold = manifold or species.manifold()
    X, Z = np.meshgrid(np.asarray(x, dtype=float), np.asarray(z, dtype=float))
    pos = np.stack([X, Z], axis=-1)
    if manifold.F == 0.5:
        grid = unfold_adiabatic(pos, field, comb, species, stark, gravity, manifold, workers=workers)
    else:
        grid = multilevel_potentials(pos, field, comb, manifold, species, stark, gravity, workers=workers)
    grid.extra["axes"] = (np.asarray(x, dtype=float), np.asarray(z, dtype=float))
    return grid


def resonance_ellipse_semiaxes(field: Quadrupole2D, comb: RfComb, g_F: float) -> np.ndarray:
    """(x_n, z_n) semi-axes of the resonance rings of a zero-offset quadrupole."""
    B_n = HBAR * comb.omega / (MU_B * abs(g_F))
    return np.stack([B_n / field.b_x, B_n / field.b_z], axis=1)


def switch_discontinuities(comb: RfComb, stark: bool = False) -> np.ndarray:
    """Jump of the unfolded "+" potential at every switch point (J).

    Both one-sided limits are evaluated in closed form at the exact switch
    splitting, so the result is independent of any grid.
    """
    if len(comb) < 2:
        return np.zeros(0)
    s_b = switch_splittings(comb)
    n_lo = np.arange(1, len(comb))
    left = two_level_upper(s_b, n_lo, comb, stark)
    right = two_level_upper(s_b, n_lo + 1, comb, stark)
    return right - left
