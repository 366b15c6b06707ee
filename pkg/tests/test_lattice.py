import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dressedlat.dressing import RfComb, unfold_adiabatic
from dressedlat.errors import DomainError
from dressedlat.lattice import (
    adiabatic_boundary,
    adiabaticity_margin,
    bloch_boundary,
    bloch_margin,
    bragg_gradient,
    bragg_velocity,
    comb_spacing_for,
    critical_depth_root,
    landau_zener_exponent,
    landau_zener_probability,
    lattice_constant,
    measure_lattice,
    modulation_depth,
    propagation_velocity,
    recoil_energy,
    regime_diagram,
)
from dressedlat.physcore import H, HBAR, LI6, LI7, MU_B, RB87, Linear1D

from conftest import TWO_PI

G6 = -2 / 3

# frozen from scripts/oracles.py
D_100KHZ = 1.0717160258706465e-05
VBRG_100KHZ = 0.006189886742238793
ER_1UM = 5.494503699290668e-30
ROOT_3KHZ = 1.467903138072278e-06
ROOT_LIMIT = 1.2113251113278965e-06


def test_lattice_constant_li6():
    assert lattice_constant(TWO_PI * 1e5, 2.0, G6) == pytest.approx(D_100KHZ, rel=1e-12)
    assert comb_spacing_for(D_100KHZ, 2.0, G6) == pytest.approx(TWO_PI * 1e5, rel=1e-12)


def test_lattice_constant_needs_gradient():
    with pytest.raises(ValueError):
        lattice_constant(TWO_PI * 1e5, 0.0, G6)


def test_depth_values():
    assert modulation_depth(TWO_PI * 4e3, TWO_PI * 400).value == pytest.approx(H * 1.6e3, rel=1e-12)
    assert not modulation_depth(TWO_PI * 1e3, TWO_PI * 600).lattice


def test_recoil_and_bragg():
    assert recoil_energy(LI6, 1e-6) == pytest.approx(ER_1UM, rel=1e-12)
    assert bragg_velocity(LI6, D_100KHZ) == pytest.approx(VBRG_100KHZ, rel=1e-12)


def test_lz_against_direct_exponent():
    O, v, b = TWO_PI * 3e3, 0.01, 2.0
    x = H * O**2 / (MU_B * (2 / 3) * v * b)
    assert landau_zener_probability(O, v, b, G6) == pytest.approx(1 - math.exp(-x), rel=1e-14)
    assert landau_zener_probability(O, 0.0, b, G6) == 1.0


@given(st.floats(1e2, 1e6), st.floats(1e-6, 1.0), st.floats(1e-6, 1.0))
def test_lz_monotone_in_velocity(O, v1, v2):
    lo, hi = sorted((v1, v2))
    p_lo, p_hi = (landau_zener_probability(O, v, 2.0, G6) for v in (lo, hi))
    assert 0.0 <= p_hi <= p_lo <= 1.0


def test_adiabaticity_margin_is_lz_exponent_at_bragg_velocity():
    O, d = TWO_PI * 3e3, 2e-6
    a = adiabaticity_margin(LI6, O, d, 2.0, G6)
    assert a == pytest.approx(landau_zener_exponent(O, bragg_velocity(LI6, d), 2.0, G6), rel=1e-12)


@given(st.sampled_from([LI6, LI7, RB87]), st.floats(TWO_PI * 1e3, TWO_PI * 1e6), st.floats(1e-4, 1e-1))
def test_bragg_closure(species, dw, t_n):
    g = species.manifold().g_F
    b = bragg_gradient(species, dw, t_n, g)
    d = lattice_constant(dw, b, g)
    assert propagation_velocity(d, t_n) == pytest.approx(bragg_velocity(species, d), rel=1e-9)


def test_bloch_margin_scaling():
    d = np.array([1e-6, 1.1e-6])
    fixed = [bloch_margin(LI6, 1e-30, x, 9.81) for x in d]
    assert math.log(fixed[1] / fixed[0]) / math.log(1.1) == pytest.approx(1.0, rel=1e-9)
    # depth from the comb with Omega = 0 grows linearly with d: margin ~ d^3
    dep = [bloch_margin(LI6, modulation_depth(comb_spacing_for(x, 2.0, G6), 0.0).value, x, 9.81) for x in d]
    assert math.log(dep[1] / dep[0]) / math.log(1.1) == pytest.approx(3.0, rel=1e-9)


def test_critical_root_residual_and_scan():
    O = TWO_PI * 3e3
    d = critical_depth_root(LI6, O, 2.0, G6)
    V = modulation_depth(comb_spacing_for(d, 2.0, G6), O).value
    assert abs(V - recoil_energy(LI6, d)) <= 1e-9 * recoil_energy(LI6, d)
    assert d == pytest.approx(ROOT_3KHZ, rel=1e-9)


def test_critical_root_small_omega_limit():
    assert critical_depth_root(LI6, 1e-6, 2.0, G6) == pytest.approx(ROOT_LIMIT, rel=1e-9)


def test_bloch_boundary_meets_eta():
    O = TWO_PI * 3e3
    d = bloch_boundary(LI6, O, 2.0, G6, 9.80665)
    V = modulation_depth(comb_spacing_for(d, 2.0, G6), O).value
    assert bloch_margin(LI6, V, d, 9.80665) == pytest.approx(10.0, rel=1e-9)


def test_bloch_boundary_unreachable():
    with pytest.raises(DomainError):
        bloch_boundary(LI6, TWO_PI * 3e3, 2.0, G6, 1e40)


def test_adiabatic_boundary_slope():
    O = np.geomspace(TWO_PI * 1e2, TWO_PI * 1e5, 20)
    d = np.array([adiabatic_boundary(LI6, o, 2.0, G6) for o in O])
    slope = np.polyfit(np.log(O), np.log(d), 1)[0]
    assert slope == pytest.approx(-2.0, abs=1e-9)


def test_regime_flags_reverify():
    rd = regime_diagram(LI6, (TWO_PI * 1e2, TWO_PI * 1e5), (1e-7, 1e-4), 25, 2.0)
    for i, O in enumerate(rd.omega_axis):
        for j, d in enumerate(rd.d_axis):
            V = modulation_depth(comb_spacing_for(d, 2.0, G6), O).value
            assert rd.adiabatic[i, j] == (adiabaticity_margin(LI6, O, d, 2.0, G6) >= 10)
            assert rd.deep[i, j] == (V >= recoil_energy(LI6, d))
            assert rd.bloch_safe[i, j] == (bloch_margin(LI6, max(V, 0), d, 9.80665) >= 10)
        # deep boundary within one cell of the raster transition
        first_deep = np.flatnonzero(rd.deep[i])
        if first_deep.size and first_deep[0] > 0:
            j = first_deep[0]
            assert rd.d_axis[j - 1] <= rd.boundaries["deep"][i] <= rd.d_axis[j]


def _uniform_setup(n=12, stark=False):
    comb = RfComb.uniform(TWO_PI * 4.5e3, TWO_PI * 1.5e3, n, TWO_PI * 400)
    f = Linear1D(2.0)
    z = np.linspace(0, 1.05 * HBAR * comb.omega[-1] / (MU_B * (2 / 3) * 2.0), 10_000)
    g = unfold_adiabatic(z, f, comb, LI6, stark=stark)
    ev = lambda zz: unfold_adiabatic(zz, f, comb, LI6, stark=stark, check_resolution=False).upper  # noqa: E731
    return z, g, ev


def test_measured_depth_and_period():
    z, g, ev = _uniform_setup()
    m = measure_lattice(z, g.upper, g.region, ev)
    assert m.depth == pytest.approx(modulation_depth(TWO_PI * 1.5e3, TWO_PI * 400).value, rel=1e-9)
    assert m.period == pytest.approx(lattice_constant(TWO_PI * 1.5e3, 2.0, G6), rel=1e-6)
