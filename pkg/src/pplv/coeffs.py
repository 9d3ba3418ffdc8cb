"""Periodic coefficient functions and their basic measurements.

A system is driven by six T-periodic coefficients.  Two coefficient kinds
are supported: constants and finite trigonometric polynomials

    c0 + sum_k  cos_k * cos(2*pi*k*t/T) + sin_k * sin(2*pi*k*t/T),

which are exactly T-periodic, have exact means (c0) and exact
antiderivatives, and are cheap to evaluate densely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

TOL_EXTREMUM = 1e-10
TOL_QUAD = 1e-10

_TWO_PI = 2.0 * math.pi
_EXTREMA_SAMPLES = 4096
_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(8)


class NegativeIntegrand(ValueError):
    """The p-th power average was requested for a sign-changing function."""


class ZeroDenominator(ValueError):
    """A ratio was requested against a denominator that is not strictly positive."""


def _require_finite(name: str, x: float) -> None:
    if not math.isfinite(x):
        raise ValueError(f"{name} must be finite, got {x!r}")


@dataclass(frozen=True)
class PeriodicCoefficient:
    """One T-periodic coefficient, either a constant or a trig polynomial.

    The period itself is not stored here; all evaluations take it as an
    argument so the same coefficient object can be reused at any period.
    """

    kind: str
    value: float = 0.0
    c0: float = 0.0
    harmonics: tuple[tuple[int, float, float], ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "trigonometric"):
            raise ValueError(f"unknown coefficient kind {self.kind!r}")
        if self.kind == "constant":
            _require_finite("value", self.value)
        else:
            _require_finite("c0", self.c0)
            seen: set[int] = set()
            for k, ck, sk in self.harmonics:
                if int(k) != k or k < 1:
                    raise ValueError(f"harmonic index must be a positive integer, got {k!r}")
                if k in seen:
                    raise ValueError(f"duplicate harmonic index {k}")
                seen.add(int(k))
                _require_finite("cos coefficient", ck)
                _require_finite("sin coefficient", sk)

    @classmethod
    def constant(cls, value: float) -> "PeriodicCoefficient":
        return cls(kind="constant", value=float(value))

    @classmethod
    def trig(
        cls, c0: float, harmonics: Iterable[tuple[int, float, float]] = ()
    ) -> "PeriodicCoefficient":
        hs = tuple((int(k), float(ck), float(sk)) for k, ck, sk in harmonics)
        return cls(kind="trigonometric", c0=float(c0), harmonics=hs)

    @property
    def mean(self) -> float:
        """Exact average over one period."""
        return self.value if self.kind == "constant" else self.c0

    def evaluate(self, T: float, t):
        """Value at time(s) ``t``; accepts scalars or arrays, T-periodic."""
        if self.kind == "constant":
            if np.isscalar(t):
                return self.value
            return np.full(np.shape(t), self.value, dtype=float)
        t = np.asarray(t, dtype=float)
        omega = _TWO_PI / T
        out = np.full(t.shape, self.c0, dtype=float)
        for k, ck, sk in self.harmonics:
            phase = omega * k * t
            out += ck * np.cos(phase) + sk * np.sin(phase)
        return float(out) if out.ndim == 0 else out

    def antiderivative(self, T: float, t):
        """Exact integral from 0 to ``t``."""
        if self.kind == "constant":
            return self.value * np.asarray(t, dtype=float) if not np.isscalar(t) else self.value * t
        t = np.asarray(t, dtype=float)
        omega = _TWO_PI / T
        out = self.c0 * t
        for k, ck, sk in self.harmonics:
            wk = omega * k
            phase = wk * t
            out = out + (ck / wk) * np.sin(phase) + (sk / wk) * (1.0 - np.cos(phase))
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CoeffStats:
    """Minimum, maximum and exact mean of one coefficient over a period."""

    minimum: float
    maximum: float
    mean: float


@dataclass(frozen=True)
class SystemSpec:
    """Period T plus the six coefficients of the planar predator-prey system

        u' = u * (a - b*u - c*v),    v' = v * (d + e*u - f*v).

    b, c, e and f must be strictly positive over the whole period.
    """

    T: float
    a: PeriodicCoefficient
    b: PeriodicCoefficient
    c: PeriodicCoefficient
    d: PeriodicCoefficient
    e: PeriodicCoefficient
    f: PeriodicCoefficient

    def __post_init__(self) -> None:
        if not (math.isfinite(self.T) and self.T > 0):
            raise ValueError(f"period T must be a positive finite real, got {self.T!r}")
        for name in ("b", "c", "e", "f"):
            coef = getattr(self, name)
            if stats(coef, self.T).minimum <= 0:
                raise ValueError(f"coefficient {name} must be strictly positive on [0, T]")


def eval_coeff(coef: PeriodicCoefficient, T: float, t: float):
    """Functional form of :meth:`PeriodicCoefficient.evaluate`."""
    if T <= 0:
        raise ValueError("T must be positive")
    return coef.evaluate(T, t)


def _golden_max(fn: Callable[[float], float], a: float, b: float, tol: float) -> tuple[float, float]:
    # Golden-section maximization on [a, b]; returns (argmax, max).
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    invphi2 = (3.0 - math.sqrt(5.0)) / 2.0
    h = b - a
    if h <= tol:
        m = 0.5 * (a + b)
        return m, fn(m)
    c = a + invphi2 * h
    d = a + invphi * h
    fc, fd = fn(c), fn(d)
    n = max(1, int(math.ceil(math.log(tol / h) / math.log(invphi))))
    for _ in range(n):
        if fc > fd:
            b, d, fd = d, c, fc
            h *= invphi
            c = a + invphi2 * h
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            h *= invphi
            d = a + invphi * h
            fd = fn(d)
    if fc > fd:
        return c, fc
    return d, fd


def _refine_extrema(fn: Callable, T: float, n: int = _EXTREMA_SAMPLES) -> tuple[float, float]:
    # Dense sampling over one period, then golden-section around the best
    # bracket (with periodic wrap).  Returns (min, max).
    ts = np.linspace(0.0, T, n, endpoint=False)
    vals = np.asarray(fn(ts), dtype=float)
    h = T / n
    out = []
    for sign in (1.0, -1.0):
        i = int(np.argmax(sign * vals))
        t0 = ts[i]
        scalar = lambda t: sign * float(fn(np.asarray([t]))[0])
        _, best = _golden_max(scalar, t0 - h, t0 + h, tol=TOL_EXTREMUM * max(1.0, T))
        out.append(sign * max(best, sign * vals[i]))
    return out[1], out[0]


def stats(coef: PeriodicCoefficient, T: float) -> CoeffStats:
    """Extrema (within ``TOL_EXTREMUM``) and exact mean over one period."""
    if T <= 0:
        raise ValueError("T must be positive")
    if coef.kind == "constant":
        v = coef.value
        return CoeffStats(v, v, v)
    lo, hi = _refine_extrema(lambda t: coef.evaluate(T, t), T)
    return CoeffStats(lo, hi, coef.c0)


def _composite_gauss(fn: Callable, a: float, b: float, panels: int) -> float:
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    pts = mid[:, None] + half[:, None] * _GAUSS_NODES[None, :]
    vals = fn(pts.ravel()).reshape(pts.shape)
    return float(np.sum(half[:, None] * _GAUSS_WEIGHTS[None, :] * vals))


def gauss_integral(fn: Callable, a: float, b: float, tol: float = TOL_QUAD,
                   panels: int = 64, max_doublings: int = 6) -> float:
    """Composite 8-node Gauss-Legendre with panel doubling until the
    doubling correction falls below ``tol`` (absolute)."""
    if b <= a:
        return 0.0
    prev = _composite_gauss(fn, a, b, panels)
    for _ in range(max_doublings):
        panels *= 2
        cur = _composite_gauss(fn, a, b, panels)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    return prev


def _check_p(p: float) -> None:
    if not (p >= 1.0):
        raise ValueError(f"exponent p must lie in [1, inf], got {p!r}")


def lp_average(coef: PeriodicCoefficient, T: float, p: float, tol: float = TOL_QUAD) -> float:
    """The p-average ((1/T) * integral of coef**p) ** (1/p); max for p = inf.

    The coefficient must be non-negative on [0, T]; values inside the
    extremum tolerance band are clipped to zero before powering.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    _check_p(p)
    s = stats(coef, T)
    if s.minimum < -TOL_EXTREMUM:
        raise NegativeIntegrand(
            f"coefficient attains {s.minimum:.3e} < 0 on [0, T]; "
            "p-averages are defined for non-negative functions"
        )
    if math.isinf(p):
        return s.maximum
    if coef.kind == "constant":
        return max(coef.value, 0.0)
    fn = lambda t: np.maximum(coef.evaluate(T, t), 0.0) ** p
    integral = gauss_integral(fn, 0.0, T, tol=tol)
    return (integral / T) ** (1.0 / p)


def _sign_change_roots(fn: Callable, T: float, n: int = 4096) -> list[float]:
    # Roots located by bisection between samples of opposite sign.
    ts = np.linspace(0.0, T, n + 1)
    vals = np.asarray(fn(ts), dtype=float)
    roots = []
    for i in range(n):
        lo, hi = vals[i], vals[i + 1]
        if lo == 0.0 or lo * hi >= 0.0:
            continue
        a, b = ts[i], ts[i + 1]
        fa = lo
        for _ in range(80):
            m = 0.5 * (a + b)
            fm = float(fn(np.asarray([m]))[0])
            if fm == 0.0:
                a = b = m
                break
            if fa * fm < 0:
                b = m
            else:
                a, fa = m, fm
        roots.append(0.5 * (a + b))
    return roots


def lp_norm(coef: PeriodicCoefficient, T: float, p: float, tol: float = TOL_QUAD) -> float:
    """L^p norm over one period, (integral of |coef|**p) ** (1/p).

    Unlike :func:`lp_average` this is total: the integrand is |coef|, so
    sign-changing coefficients are allowed.  The integral is split at the
    zeros of the coefficient to keep the panels smooth.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    _check_p(p)
    if math.isinf(p):
        s = stats(coef, T)
        return max(abs(s.minimum), abs(s.maximum))
    if coef.kind == "constant":
        return abs(coef.value) * T ** (1.0 / p)
    fn = lambda t: coef.evaluate(T, t)
    cuts = [0.0] + _sign_change_roots(fn, T) + [T]
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a <= 0:
            continue
        piece = lambda t: np.abs(fn(t)) ** p
        total += gauss_integral(piece, a, b, tol=tol, panels=max(8, int(64 * (b - a) / T)))
    return total ** (1.0 / p)


def ratio_extrema(num: PeriodicCoefficient, den: PeriodicCoefficient, T: float) -> tuple[float, float]:
    """(min, max) of num(t)/den(t) over [0, T], within ``TOL_EXTREMUM``."""
    if T <= 0:
        raise ValueError("T must be positive")
    if stats(den, T).minimum <= 0:
        raise ZeroDenominator("denominator must be strictly positive on [0, T]")
    if num.kind == "constant" and den.kind == "constant":
        r = num.value / den.value
        return r, r
    fn = lambda t: num.evaluate(T, t) / den.evaluate(T, t)
    return _refine_extrema(fn, T)
