"""Independent reference computations used by the tests.

These deliberately avoid the library's own slicing/refinement code paths:
constraints are written in the raw textbook form and maxima are found by
masked grid scans with window refinement.
"""

import math

import numpy as np

from pplv.region import RegionSpec


def region_mask(region: RegionSpec, X, Y):
    """Feasibility of grid points, using the raw power form of the constraints."""
    p = region.p
    U, V = region.bounds.U, region.bounds.V
    if math.isinf(p):
        return (X > 0) & (Y > 0) & (X <= U) & (Y <= V)
    if p == 1.0:
        pu, pv = X, Y
    else:
        pu = U ** (1.0 - p) * X ** p
        pv = V ** (1.0 - p) * Y ** p
    c1 = region.b_min * pu + region.c_min * pv <= region.abar
    c2 = region.abar <= region.b_max * X + region.c_max * Y
    c3 = -region.e_max * X + region.f_min * pv <= region.dbar
    c4 = region.dbar <= -region.e_min * pu + region.f_max * Y
    return c1 & c2 & c3 & c4 & (X > 0) & (Y > 0)


def grid_refine_max(region: RegionSpec, objective, xmax: float, ymax: float,
                    n: int = 2000, rounds: int = 3):
    """Masked grid maximum with window refinement around the best cell.

    Returns (value, (x, y)) or (None, None) when no feasible point is seen.
    """
    x_lo, x_hi, y_lo, y_hi = 0.0, xmax, 0.0, ymax
    best = None
    arg = None
    for r in range(rounds + 1):
        xs = np.linspace(x_lo, x_hi, n)
        ys = np.linspace(y_lo, y_hi, n)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        mask = region_mask(region, X, Y)
        if not mask.any():
            break
        vals = np.where(mask, objective(X, Y), -np.inf)
        i, j = np.unravel_index(np.argmax(vals), vals.shape)
        if best is None or vals[i, j] > best:
            best = float(vals[i, j])
            arg = (float(X[i, j]), float(Y[i, j]))
        dx = (x_hi - x_lo) / (n - 1)
        dy = (y_hi - y_lo) / (n - 1)
        x_lo = max(0.0, X[i, j] - 2 * dx)
        x_hi = min(xmax, X[i, j] + 2 * dx)
        y_lo = max(0.0, Y[i, j] - 2 * dy)
        y_hi = min(ymax, Y[i, j] + 2 * dy)
    return best, arg


def grid_supxy(region: RegionSpec, xmax: float, ymax: float, n: int = 2000, rounds: int = 3):
    return grid_refine_max(region, lambda x, y: x * y, xmax, ymax, n=n, rounds=rounds)
