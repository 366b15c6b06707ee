"""Closed-form analytics of rf-comb lattices and the (Omega, d) regime diagram.

All formulas use |g_F| so lengths, velocities and gradients come out
positive. The ``>>`` inequalities are exposed as raw ratios; a margin factor
``eta`` (default 10) turns them into boolean regime flags.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError
from .physcore import CONST, H, HBAR, MU_B, AtomSpecies

DEFAULT_ETA = 10.0


def _require_positive(**kw):
    for k, v in kw.items():
        if not v > 0:
            raise ValueError(f"{k} must be positive, got {v}")


def lattice_constant(delta_omega: float, b: float, g_F: float) -> float:
    """Spatial period 2 hbar dw / (mu_B |g_F| b) of a uniform comb lattice."""
    if b == 0 or g_F == 0:
        raise ValueError("lattice constant needs non-zero gradient and g-factor")
    _require_positive(delta_omega=delta_omega, b=b)
    return 2.0 * HBAR * delta_omega / (MU_B * abs(g_F) * b)


def comb_spacing_for(d: float, b: float, g_F: float) -> float:
    """Inverse of :func:`lattice_constant`: comb spacing (rad/s) giving period ``d``."""
    return d * MU_B * abs(g_F) * b / (2.0 * HBAR)


@dataclass(frozen=True)
class Depth:
    """Modulation depth in joules; ``lattice`` is False when the depth is not positive."""

    value: float

    @property
    def lattice(self) -> bool:
        return self.value > 0

    def __float__(self) -> float:
        return self.value


def modulation_depth(delta_omega: float, Omega: float) -> Depth:
    """Peak-to-peak depth hbar (dw/2 - Omega) of the unfolded comb potential."""
    if not delta_omega > 0 or Omega < 0:
        raise ValueError("need delta_omega > 0 and Omega >= 0")
    return Depth(HBAR * (0.5 * delta_omega - Omega))


def recoil_energy(species: AtomSpecies, d: float) -> float:
    _require_positive(d=d)
    return H**2 / (8.0 * species.mass * d**2)


def bragg_velocity(species: AtomSpecies, d: float) -> float:
    """Velocity h / (m d) whose de Broglie wavelength matches the lattice."""
    _require_positive(d=d)
    return H / (species.mass * d)


def propagation_velocity(d: float, t_n: float) -> float:
    _require_positive(t_n=t_n)
    return d / t_n


def landau_zener_exponent(Omega: float, v: float, b: float, g_F: float) -> float:
    """h Omega^2 / (mu_B |g_F| v b); infinite for v = 0."""
    _require_positive(b=b)
    if v < 0:
        raise ValueError("velocity must be non-negative")
    if v == 0:
        return math.inf
    return H * Omega**2 / (MU_B * abs(g_F) * v * b)


def landau_zener_probability(Omega: float, v: float, b: float, g_F: float) -> float:
    """Probability of staying on the adiabatic branch when crossing a resonance at speed v.

    Returns exactly 1 for ``v == 0``.
    """
    x = landau_zener_exponent(Omega, v, b, g_F)
    if math.isinf(x):
        return 1.0
    return -math.expm1(-x)


def adiabaticity_margin(species: AtomSpecies, Omega: float, d: float, b: float, g_F: float) -> float:
    """m Omega^2 d / (mu_B |g_F| b): the Landau-Zener exponent at the Bragg velocity."""
    _require_positive(d=d, b=b)
    return species.mass * Omega**2 * d / (MU_B * abs(g_F) * b)


def bloch_margin(species: AtomSpecies, V_ad: float, d: float, a: float) -> float:
    """(pi/4) V_ad^2 / (E_r m a d); large values suppress interband tunnelling."""
    _require_positive(d=d, a=a)
    if V_ad < 0:
        raise ValueError("V_ad must be non-negative")
    return 0.25 * math.pi * V_ad**2 / (recoil_energy(species, d) * species.mass * a * d)


def bragg_gradient(species: AtomSpecies, delta_omega: float, t_n: float, g_F: float) -> float:
    """Gradient at which the moving lattice travels at its own Bragg velocity."""
    _require_positive(t_n=t_n, delta_omega=delta_omega)
    return math.sqrt(2.0 * HBAR * species.mass / (math.pi * t_n)) * delta_omega / (MU_B * abs(g_F))


def _depth_minus_recoil(species, Omega, b, g_F, d):
    return d * MU_B * abs(g_F) * b / 4.0 - HBAR * Omega - recoil_energy(species, d)


def critical_depth_root(
    species: AtomSpecies, Omega: float, b: float, g_F: float, rtol: float = 0.0
) -> float:
    """Lattice constant at which the modulation depth equals one recoil energy.

    The comb spacing is eliminated through the lattice constant, leaving
    d mu_B|g_F| b / 4 - hbar Omega = h^2 / (8 m d^2), solved by bisection.
    The left side minus the right is increasing in d, so the positive root is
    unique. With the default ``rtol = 0`` bisection runs down to adjacent
    doubles; for large Omega the depth is a small difference of large terms,
    so a looser tolerance on d shows up amplified in the residual.
    """
    _require_positive(b=b)
    if Omega < 0:
        raise ValueError("Omega must be non-negative")
    f = lambda d: _depth_minus_recoil(species, Omega, b, g_F, d)  # noqa: E731
    slope = MU_B * abs(g_F) * b / 4.0
    # the root lies above both the depth zero and the Omega = 0 root
    lo = 1e-12
    hi = max(HBAR * Omega / slope, (H**2 / (8 * species.mass * slope)) ** (1 / 3)) * 4.0 + 1e-12
    if f(lo) > 0 or f(hi) < 0:
        raise DomainError("no positive root of V_ad = E_r in bracket")
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= rtol * hi:
            break
    return lo if abs(f(lo)) <= abs(f(hi)) else hi


def bloch_boundary(
    species: AtomSpecies, Omega: float, b: float, g_F: float, a: float, eta: float = DEFAULT_ETA,
    rtol: float = 1e-12,
) -> float:
    """Smallest lattice constant with bloch_margin >= eta, at fixed Omega.

    Above the zero-depth point the margin grows monotonically with d.
    """
    slope = MU_B * abs(g_F) * b / 4.0
    d0 = HBAR * Omega / slope

    def g(d):
        V = d * slope - HBAR * Omega
        return bloch_margin(species, max(V, 0.0), d, a) - eta

    lo = max(d0, 1e-15)
    hi = 2.0 * lo
    while g(hi) < 0:
        hi *= 2.0
        if hi > 1.0:
            raise DomainError("Bloch criterion not reachable below d = 1 m")
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if g(mid) >= 0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= rtol * hi:
            break
    return hi


def adiabatic_boundary(species: AtomSpecies, Omega: float, b: float, g_F: float, eta: float = DEFAULT_ETA) -> float:
    """Lattice constant where adiabaticity_margin == eta."""
    return eta * MU_B * abs(g_F) * b / (species.mass * Omega**2)


@dataclass(frozen=True)
class LatticeParams:
    d: float
    V_ad: float
    E_r: float
    v_brg: float
    v_prop: float
    t_n: float

    @property
    def has_lattice(self) -> bool:
        return self.V_ad > 0


def lattice_params(
    species: AtomSpecies, delta_omega: float, Omega: float, b: float, g_F: float, t_n: float
) -> LatticeParams:
    d = lattice_constant(delta_omega, b, g_F)
    return LatticeParams(
        d=d,
        V_ad=modulation_depth(delta_omega, Omega).value,
        E_r=recoil_energy(species, d),
        v_brg=bragg_velocity(species, d),
        v_prop=propagation_velocity(d, t_n),
        t_n=t_n,
    )


@dataclass
class RegimeDiagram:
    """Per-cell regime flags on a (Omega, d) raster, indexed ``[i_omega, i_d]``."""

    omega_axis: np.ndarray
    d_axis: np.ndarray
    adiabatic: np.ndarray
    deep: np.ndarray
    bloch_safe: np.ndarray
    b: float
    a: float
    eta: float
    species: AtomSpecies
    g_F: float
    boundaries: dict = field(default_factory=dict)


def cell_flags(species, Omega, d, b, g_F, a, eta):
    """(adiabatic, deep, bloch_safe) for a single (Omega, d) point."""
    dw = comb_spacing_for(d, b, g_F)
    V = modulation_depth(dw, Omega).value
    E_r = recoil_energy(species, d)
    adiabatic = adiabaticity_margin(species, Omega, d, b, g_F) >= eta
    deep = V >= E_r
    bloch = bloch_margin(species, max(V, 0.0), d, a) >= eta
    return adiabatic, deep, bloch


def regime_diagram(
    species: AtomSpecies,
    omega_range: tuple[float, float],
    d_range: tuple[float, float],
    resolution: int | tuple[int, int],
    b: float,
    a: float | None = None,
    eta: float = DEFAULT_ETA,
    g_F: float | None = None,
) -> RegimeDiagram:
    """Classify a log-spaced (Omega, d) raster against the depth, Landau-Zener and Bloch criteria.

    Analytic boundary curves (d as a function of Omega) are stored in
    ``boundaries`` under ``"adiabatic"``, ``"deep"`` and ``"bloch"``.
    """
    n_om, n_d = (resolution, resolution) if isinstance(resolution, int) else resolution
    if n_om < 2 or n_d < 2:
        raise ValueError("resolution must be at least 2 per axis")
    if min(omega_range) <= 0 or min(d_range) <= 0:
        raise ValueError("ranges must be positive")
    a = CONST.g_earth if a is None else a
    g_F = species.manifold().g_F if g_F is None else g_F
    om = np.geomspace(omega_range[0], omega_range[1], n_om)
    dd = np.geomspace(d_range[0], d_range[1], n_d)
    shape = (n_om, n_d)
    adi, deep, bl = np.zeros(shape, bool), np.zeros(shape, bool), np.zeros(shape, bool)
    for i, O in enumerate(om):
        for j, d in enumerate(dd):
            adi[i, j], deep[i, j], bl[i, j] = cell_flags(species, O, d, b, g_F, a, eta)
    bounds = {
        "adiabatic": np.array([adiabatic_boundary(species, O, b, g_F, eta) for O in om]),
        "deep": np.array([critical_depth_root(species, O, b, g_F) for O in om]),
        "bloch": np.array([bloch_boundary(species, O, b, g_F, a, eta) for O in om]),
    }
    return RegimeDiagram(om, dd, adi, deep, bl, b, a, eta, species, g_F, bounds)


@dataclass(frozen=True)
class LatticeMeasurement:
    depth: float  # J, peak-to-peak over interior regions
    period: float  # m, mean spacing of successive maxima
    maxima: np.ndarray  # refined (z, V) rows
    minima: np.ndarray


def _refine(evaluate, z, i, sign):
    lo, hi = z[max(i - 1, 0)], z[min(i + 1, z.size - 1)]
    res = minimize_scalar(
        lambda x: -sign * float(evaluate(np.array([x]))[0]),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12 * max(abs(lo), abs(hi), hi - lo)},
    )
    return res.x, -sign * res.fun


def measure_lattice(z, values, region, evaluate) -> LatticeMeasurement:
    """Depth and period of an unfolded comb potential sampled on a 1D grid.

    Only regions fully inside the grid are used. Each region holds one
    extremum at its resonance (a maximum for odd region index, a minimum for
    even), located on the grid and then refined on the continuous potential
    ``evaluate(z_array) -> values``.
    """
    z, v, n = (np.asarray(a) for a in (z, values, region))
    if np.any(np.diff(z) <= 0):
        raise ValueError("grid must be strictly increasing")
    inner = [r for r in np.unique(n) if r not in (n[0], n[-1])]
    if len(inner) < 3:
        raise ValueError("need at least three interior regions")
    maxima, minima = [], []
    for r in inner:
        idx = np.flatnonzero(n == r)
        sign = 1 if r % 2 else -1
        i = idx[np.argmax(sign * v[idx])]
        (maxima if sign > 0 else minima).append(_refine(evaluate, z, i, sign))
    maxima, minima = np.array(maxima), np.array(minima)
    if len(maxima) < 2:
        raise ValueError("need two interior maxima for a period")
    period = (maxima[-1, 0] - maxima[0, 0]) / (len(maxima) - 1)
    return LatticeMeasurement(float(maxima[:, 1].max() - minima[:, 1].min()), float(period), maxima, minima)
