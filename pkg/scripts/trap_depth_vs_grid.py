"""Lower-branch depth of the microwave-dressed trap versus the half-width of the grid.

The lower branch approaches its far-field value only slowly, so the depth
read off a finite grid depends on the grid extent.
"""

import math

import numpy as np

from dressedlat.physcore import K_B, RB87, Linear1D
from dressedlat.shaping import (
    HyperfinePair,
    MicrowaveDrive,
    asymptotic_lower_depth,
    microwave_dressed_potentials,
    trap_depth,
)


def main():
    pair = HyperfinePair.from_species(RB87, (1, -1), (2, 0))
    drive = MicrowaveDrive.detuned(pair, -2 * math.pi * 2e6, 2 * math.pi * 600e3)
    field = Linear1D(2.0, 1e-4)
    print("half_width_um,depth_uK")
    for half in (150e-6, 200e-6, 300e-6, 1e-3, 1e-2):
        z = np.linspace(-half, half, 8001)
        d = trap_depth(microwave_dressed_potentials(pair, drive, field, z).lower)
        print(f"{half * 1e6:g},{d.microkelvin:.3f}")
    print(f"far field,{asymptotic_lower_depth(pair, drive, 1e-4) / K_B * 1e6:.3f}")


if __name__ == "__main__":
    main()
