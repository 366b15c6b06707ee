"""Switch-point discontinuities with and without the Stark correction, versus Rabi frequency.

Shows that the corrected jump falls off faster than the bare one (fourth
versus second order in Omega / spacing).
"""

import argparse
import math

import numpy as np

from dressedlat.dressing import RfComb, switch_discontinuities
from dressedlat.physcore import HBAR


def cli():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--freqs-khz", default="2,4,8")
    ap.add_argument("--points", type=int, default=9)
    args = ap.parse_args()
    w = tuple(2 * math.pi * 1e3 * float(f) for f in args.freqs_khz.split(","))
    spacing = min(np.diff(w))
    print("rabi_over_spacing,bare_jump,stark_jump  (units of hbar * min spacing)")
    for r in np.geomspace(0.02, 0.5, args.points):
        comb = RfComb(w, (r * spacing,))
        unit = HBAR * spacing
        bare = np.max(np.abs(switch_discontinuities(comb))) / unit
        stark = np.max(np.abs(switch_discontinuities(comb, stark=True))) / unit
        print(f"{r:.4f},{bare:.6g},{stark:.6g}")


if __name__ == "__main__":
    cli()
