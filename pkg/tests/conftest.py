import pytest

from pplv import ConstantSystem, PeriodicCoefficient, SystemSpec
from pplv.region import RegionBounds, RegionSpec

C = PeriodicCoefficient.constant
TRIG = PeriodicCoefficient.trig


@pytest.fixture(scope="session")
def eq30():
    """The bundled demonstration constants (sign scan conclusive at p* = 2)."""
    return ConstantSystem(T=1.0, a=2.0102, b=1.0, c=0.0051, d=2.0203, e=0.9898, f=2.0)


@pytest.fixture(scope="session")
def eq30_spec(eq30):
    return eq30.to_system_spec()


@pytest.fixture(scope="session")
def eq30_spec_t01(eq30):
    return ConstantSystem(T=0.1, a=eq30.a, b=eq30.b, c=eq30.c,
                          d=eq30.d, e=eq30.e, f=eq30.f).to_system_spec()


@pytest.fixture(scope="session")
def classical_spec():
    """Prey-limited predator with negative intrinsic predator growth."""
    return SystemSpec(T=1.0, a=C(1.0), b=C(1.0), c=C(1.0),
                      d=C(-0.5), e=C(1.0), f=C(1.0))


@pytest.fixture(scope="session")
def perturbed_spec(eq30):
    """Demo constants with a small sinusoidal modulation on the prey growth."""
    a = TRIG(eq30.a, [(1, 0.0, 0.01)])
    return SystemSpec(T=1.0, a=a, b=C(eq30.b), c=C(eq30.c),
                      d=C(eq30.d), e=C(eq30.e), f=C(eq30.f))


@pytest.fixture(scope="session")
def saddle_spec():
    """Strongly forced, weakly damped system carrying an unstable
    (saddle) coexistence orbit near (0.0487, 0.4891)."""
    a = TRIG(1.0, [(1, 0.0, 0.9)])
    return SystemSpec(T=6.5, a=a, b=C(0.01), c=C(1.0),
                      d=C(-1.0), e=C(1.0), f=C(0.01))


def figure_region(p: float) -> RegionSpec:
    """Freestanding region parameters with unit spreads and U = V = 2."""
    return RegionSpec(p=p, abar=2.0, dbar=2.0,
                      b_min=1.0, b_max=2.0, c_min=1.0, c_max=2.0,
                      e_min=1.0, e_max=2.0, f_min=1.0, f_max=2.0,
                      bounds=RegionBounds(U=2.0, V=2.0))
