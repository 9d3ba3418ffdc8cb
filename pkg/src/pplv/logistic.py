"""Positive T-periodic solutions of the scalar periodic logistic equation.

For u' = u*(growth(t) - damping(t)*u) with mean(growth) > 0 and damping
strictly positive there is exactly one positive T-periodic solution.  The
substitution w = 1/u turns the equation into the linear problem
w' = -growth*w + damping, whose unique periodic solution is written down
by quadrature; no shooting or Newton iteration is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

from .coeffs import PeriodicCoefficient, _GAUSS_NODES, _GAUSS_WEIGHTS

TOL_PERIODIC = 1e-9
DEFAULT_GRID = 2048

_AVG_NODES, _AVG_WEIGHTS = np.polynomial.legendre.leggauss(4)


class NoPositiveSolution(ValueError):
    """No positive periodic solution exists (mean growth is not positive)."""


@dataclass(frozen=True)
class PeriodicOrbit1D:
    """A sampled positive T-periodic scalar orbit with cubic interpolation."""

    T: float
    ts: np.ndarray
    values: np.ndarray
    interpolation: str = "cubic-periodic"

    def __post_init__(self) -> None:
        if np.any(self.values <= 0):
            raise ValueError("periodic orbit values must be strictly positive")
        gap = abs(self.values[0] - self.values[-1])
        if gap > TOL_PERIODIC * float(np.max(self.values)):
            raise ValueError(f"orbit endpoints differ by {gap:.3e}; not periodic")

    @cached_property
    def _spline(self) -> CubicSpline:
        vals = self.values.copy()
        vals[-1] = vals[0]  # exact closure for the periodic spline
        return CubicSpline(self.ts, vals, bc_type="periodic")

    def value_at(self, t):
        """Interpolated orbit value, T-periodic in ``t``."""
        return self._spline(np.mod(t, self.T))

    @property
    def minimum(self) -> float:
        return float(np.min(self.values))

    @property
    def maximum(self) -> float:
        return float(np.max(self.values))


def periodic_logistic(growth: PeriodicCoefficient, damping: PeriodicCoefficient,
                      T: float, n: int = DEFAULT_GRID) -> PeriodicOrbit1D:
    """The unique positive T-periodic solution of u' = u*(growth - damping*u).

    Exists iff the mean of ``growth`` is positive.  Built from the linear
    substitution w = 1/u: with A(t) the running integral of growth,

        w(t) = exp(-A(t)) * (w0 + integral_0^t damping * exp(A)),
        w0   = integral_0^T damping * exp(A) / (exp(A(T)) - 1).

    All exponentials are rescaled by exp(-max A) so large T*growth cannot
    overflow.  A(t) is exact (trig antiderivatives); the damping integral
    uses cumulative 8-node Gauss panels on a uniform grid of ``n`` cells.
    """
    lam = growth.mean
    if lam <= 0:
        raise NoPositiveSolution(
            f"mean growth {lam:.6g} <= 0: no positive periodic solution")

    ts = np.linspace(0.0, T, n + 1)
    A = np.asarray(growth.antiderivative(T, ts), dtype=float)
    K = float(np.max(A))
    a0 = A[-1]  # = T * lam > 0

    # B(t) = integral_0^t damping(s) * exp(A(s) - K) ds, cumulatively.
    mid = 0.5 * (ts[:-1] + ts[1:])
    half = 0.5 * (ts[1:] - ts[:-1])
    nodes = mid[:, None] + half[:, None] * _GAUSS_NODES[None, :]
    flat = nodes.ravel()
    integrand = damping.evaluate(T, flat) * np.exp(
        np.asarray(growth.antiderivative(T, flat), dtype=float) - K)
    panel = np.sum(half[:, None] * _GAUSS_WEIGHTS[None, :]
                   * integrand.reshape(nodes.shape), axis=1)
    B = np.concatenate(([0.0], np.cumsum(panel)))

    # r = exp(-a0) / (1 - exp(-a0)), stable for both tiny and huge a0.
    r = math.exp(-a0) / (-math.expm1(-a0))
    w = np.exp(K - A) * (B[-1] * r + B)
    theta = 1.0 / w
    return PeriodicOrbit1D(T=T, ts=ts, values=theta)


def weighted_average(weight: PeriodicCoefficient, orbit: PeriodicOrbit1D) -> float:
    """(1/T) * integral over one period of weight(t) * orbit(t)."""
    T = orbit.T
    ts = orbit.ts
    mid = 0.5 * (ts[:-1] + ts[1:])
    half = 0.5 * (ts[1:] - ts[:-1])
    nodes = (mid[:, None] + half[:, None] * _AVG_NODES[None, :]).ravel()
    vals = weight.evaluate(T, nodes) * orbit._spline(nodes)
    total = float(np.sum((half[:, None] * _AVG_WEIGHTS[None, :]).ravel() * vals))
    return total / T
