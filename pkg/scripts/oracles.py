"""Independent oracle values frozen into the test suite.

Each quantity is computed here by a route that does not call the package's
physics code: dense numpy diagonalisation, direct arithmetic with the
CODATA constants, or brute-force scans. Run it to regenerate the numbers.
"""

import math

import numpy as np

MU_B = 9.2740100783e-24
H = 6.62607015e-34
HBAR = H / (2 * math.pi)
K_B = 1.380649e-23
U = 1.66053906660e-27
M_LI6 = 6.0151228874 * U
M_RB87 = 86.909180527 * U
TWO_PI = 2 * math.pi


def local_plus(s, w, rabi, L=0.0):
    """Upper eigenvalue of the 2x2 rotating-frame matrix, dense route."""
    det = s - HBAR * w + 2 * L
    m = np.array([[0.5 * det, 0.5 * HBAR * rabi], [0.5 * HBAR * rabi, -0.5 * det]])
    return np.linalg.eigvalsh(m)[1]


def stark(s, n, ws, rabi):
    return sum((HBAR * rabi) ** 2 / (4 * (s - HBAR * w)) for j, w in enumerate(ws, 1) if j != n)


def unfolded(s, n, ws, rabi, with_stark):
    L = stark(s, n, ws, rabi) if with_stark else 0.0
    e = local_plus(s, ws[n - 1], rabi, L)
    off = sum((-1) ** k * HBAR * ws[k - 1] for k in range(1, n))
    return (-1) ** n * (e - 0.5 * HBAR * ws[n - 1]) - off


def switch_jumps(ws, rabi, with_stark):
    out = []
    for n in range(1, len(ws)):
        s = 0.5 * HBAR * (ws[n - 1] + ws[n])
        out.append(unfolded(s, n + 1, ws, rabi, with_stark) - unfolded(s, n, ws, rabi, with_stark))
    return out


def critical_root_scan(m, Omega, b, g, lo=1e-7, hi=1e-5, n=2_000_001):
    d = np.linspace(lo, hi, n)
    f = d * MU_B * g * b / 4 - HBAR * Omega - H**2 / (8 * m * d**2)
    i = np.flatnonzero(np.diff(np.sign(f)))[0]
    return d[i] - f[i] * (d[i + 1] - d[i]) / (f[i + 1] - f[i])


def main():
    ws = [TWO_PI * 2e3, TWO_PI * 4e3, TWO_PI * 8e3]
    unit = HBAR * TWO_PI * 2e3
    print("switch jumps bare / hbar dw_min :", [repr(float(j / unit)) for j in switch_jumps(ws, TWO_PI * 700, False)])
    print("switch jumps stark / hbar dw_min:", [repr(float(j / unit)) for j in switch_jumps(ws, TWO_PI * 700, True)])
    print("lattice constant li6 100 kHz 2 T/m:", repr(2 * HBAR * TWO_PI * 1e5 / (MU_B * 2 / 3 * 2)))
    d = 2 * HBAR * TWO_PI * 1e5 / (MU_B * 2 / 3 * 2)
    print("bragg velocity at that d:", repr(H / (M_LI6 * d)))
    print("recoil li6 d=1um:", repr(H**2 / (8 * M_LI6 * 1e-12)))
    print("critical root li6 3 kHz (scan):", repr(float(critical_root_scan(M_LI6, TWO_PI * 3e3, 2.0, 2 / 3))))
    print("critical root li6 Omega->0 limit:", repr((H**2 / (2 * M_LI6 * MU_B * 2 / 3 * 2.0)) ** (1 / 3)))
    # microwave pair |1,-1> <-> |2,0>: linear Zeeman slope of a is mu_B/2
    hf = 6834.682610904e6
    w_mw = TWO_PI * (hf - 2e6)
    B_res = HBAR * (TWO_PI * hf - w_mw) / (MU_B / 2)
    print("resonance field (G):", repr(B_res * 1e4), " |z| (um):", repr(math.sqrt(B_res**2 - 1e-8) / 2.0 * 1e6))
    eps0 = H * 2e6 - MU_B / 2 * 1e-4
    depth = 0.5 * (eps0 + math.hypot(HBAR * TWO_PI * 6e5, eps0))
    print("far-field depth (uK):", repr(depth / K_B * 1e6), " (MHz):", repr(depth / H / 1e6))


if __name__ == "__main__":
    main()
