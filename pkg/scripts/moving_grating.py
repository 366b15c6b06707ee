"""Per-frame displacement of the ramped-comb grating, with and without an offset field.

Prints the measured step next to d * dt / t_n and d * dt / (2 t_n).
"""

import argparse
import math

import numpy as np

from dressedlat.dressing import RfComb
from dressedlat.lattice import lattice_constant
from dressedlat.physcore import LI6, Linear1D
from dressedlat.waveform import CombRamp, grating_shift, moving_potentials


def cli():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--offsets-gauss", default="0,0.1")
    ap.add_argument("--frames", type=int, default=8)
    args = ap.parse_args()
    comb = RfComb.uniform(2 * math.pi * 1e5, 2 * math.pi * 1e5, 4, 2 * math.pi * 15e3)
    ramp = CombRamp(comb, 2e-3)
    d = lattice_constant(2 * math.pi * 1e5, 2.0, LI6.manifold().g_F)
    dz = 5e-9
    z = np.arange(5e-6, 25e-6 + dz / 2, dz)
    times = np.arange(args.frames) * ramp.t_n / args.frames
    dt = times[1]
    print(f"d = {d * 1e6:.4f} um; d dt/t_n = {d * dt / ramp.t_n * 1e6:.4f} um; "
          f"d dt/(2 t_n) = {d * dt / (2 * ramp.t_n) * 1e6:.4f} um")
    for B0 in (float(x) * 1e-4 for x in args.offsets_gauss.split(",")):
        frames = moving_potentials(ramp, Linear1D(2.0, B0), LI6, z, times)
        steps = [grating_shift(a.upper, b.upper, dz, int(d / 4 / dz)) for a, b in zip(frames, frames[1:])]
        print(f"B0 = {B0 * 1e4:g} G: steps (um) " + " ".join(f"{s * 1e6:.3f}" for s in steps))


if __name__ == "__main__":
    cli()
