"""Symmetric tridiagonal eigensolver (implicit-shift QL).

The dressed-state matrices only couple m_F to m_F +/- 1, so they are real
symmetric tridiagonal and small (2F+1 <= 9 in practice). Plain Python floats
are faster than numpy for matrices this size.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import ConvergenceError

REL_TOL = 1e-14
MAX_SWEEPS = 50


def tridiagonal_eigh(
    diag: Sequence[float],
    offdiag: Sequence[float],
    vectors: bool = False,
    tol: float = REL_TOL,
    max_sweeps: int = MAX_SWEEPS,
):
    """Eigenvalues (ascending) and optionally eigenvectors of a symmetric tridiagonal matrix.

    Parameters
    ----------
    diag : length-n main diagonal
    offdiag : length n-1 sub/super diagonal
    vectors : also return the (n, n) orthonormal eigenvector matrix (columns)

    Raises
    ------
    ConvergenceError
        if an eigenvalue needs more than ``max_sweeps`` QL sweeps.
    """
    d = [float(x) for x in diag]
    n = len(d)
    if len(offdiag) != max(n - 1, 0):
        raise ValueError("offdiag must have length len(diag) - 1")
    e = [float(x) for x in offdiag] + [0.0]
    z = np.eye(n) if vectors else None

    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= tol * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise ConvergenceError(f"no convergence for eigenvalue {l} after {max_sweeps} sweeps")
            # Wilkinson-type shift from the leading 2x2 block
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            deflated = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if z is not None:
                    col = z[:, i + 1].copy()
                    z[:, i + 1] = s * z[:, i] + c * col
                    z[:, i] = c * z[:, i] - s * col
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    order = sorted(range(n), key=d.__getitem__)
    w = np.array([d[k] for k in order])
    if z is None:
        return w
    return w, z[:, order]


def tridiagonal_eigvalsh(diag, offdiag, **kw) -> np.ndarray:
    return tridiagonal_eigh(diag, offdiag, vectors=False, **kw)
