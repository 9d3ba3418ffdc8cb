import numpy as np
import pytest
from scipy.integrate import solve_ivp

from pplv.coeffs import PeriodicCoefficient
from pplv.logistic import NoPositiveSolution, periodic_logistic, weighted_average

C = PeriodicCoefficient.constant
TRIG = PeriodicCoefficient.trig


def test_constant_equilibrium_unit():
    orbit = periodic_logistic(C(1.0), C(1.0), 1.0)
    assert np.max(np.abs(orbit.values - 1.0)) < 1e-12


def test_constant_equilibrium_ratio():
    orbit = periodic_logistic(C(2.0102), C(1.0), 1.0)
    assert np.max(np.abs(orbit.values - 2.0102)) < 1e-12


def test_mean_forced_by_unit_damping():
    # dividing the equation by the solution and integrating over a period
    # forces avg(damping * orbit) = mean growth; with damping = 1 the orbit
    # average is the growth mean
    orbit = periodic_logistic(TRIG(1.0, [(1, 0.0, 0.5)]), C(1.0), 1.0)
    assert weighted_average(C(1.0), orbit) == pytest.approx(1.0, abs=1e-10)


def test_no_positive_solution_for_nonpositive_mean():
    with pytest.raises(NoPositiveSolution):
        periodic_logistic(C(-0.5), C(1.0), 1.0)
    with pytest.raises(NoPositiveSolution):
        periodic_logistic(TRIG(0.0, [(1, 0.0, 1.0)]), C(1.0), 1.0)


def test_positivity_and_periodicity():
    orbit = periodic_logistic(TRIG(0.8, [(1, 0.5, -0.3), (2, 0.0, 0.2)]),
                              TRIG(1.0, [(1, 0.0, 0.4)]), 2.0)
    assert orbit.minimum > 0
    assert abs(orbit.values[0] - orbit.values[-1]) <= 1e-9 * orbit.maximum


@pytest.mark.parametrize("seed", range(10))
def test_logistic_identity_randomized(seed):
    # avg(damping * orbit) must equal the growth mean
    rng = np.random.default_rng(seed)
    c0 = rng.uniform(0.2, 2.0)
    growth = TRIG(c0, [(1, rng.uniform(-1, 1) * c0, rng.uniform(-1, 1) * c0),
                       (2, 0.3 * rng.uniform(-1, 1) * c0, 0.0)])
    b0 = rng.uniform(0.5, 2.0)
    damping = TRIG(b0, [(1, rng.uniform(-0.4, 0.4) * b0, rng.uniform(-0.4, 0.4) * b0)])
    T = rng.uniform(0.4, 3.0)
    orbit = periodic_logistic(growth, damping, T)
    assert weighted_average(damping, orbit) == pytest.approx(growth.mean, abs=1e-8)


def test_against_direct_integration():
    growth = TRIG(1.1, [(1, 0.6, -0.2)])
    damping = TRIG(1.5, [(1, 0.0, 0.5)])
    T = 1.3
    orbit = periodic_logistic(growth, damping, T)

    def rhs(t, y):
        return [y[0] * (growth.evaluate(T, t) - damping.evaluate(T, t) * y[0])]

    sol = solve_ivp(rhs, (0.0, T), [orbit.values[0]], t_eval=orbit.ts,
                    rtol=1e-12, atol=1e-14)
    assert sol.success
    assert np.max(np.abs(sol.y[0] - orbit.values)) < 1e-8 * orbit.maximum


def test_weighted_average_examples():
    unit = periodic_logistic(C(1.0), C(1.0), 1.0)
    assert weighted_average(C(1.0), unit) == pytest.approx(1.0, abs=1e-12)
    big = periodic_logistic(C(2.0102), C(1.0), 1.0)
    assert weighted_average(C(0.9898), big) == pytest.approx(0.9898 * 2.0102, abs=1e-10)
    assert weighted_average(C(0.0), big) == 0.0


def test_value_at_interpolates_periodically():
    orbit = periodic_logistic(TRIG(1.0, [(1, 0.3, 0.0)]), C(1.0), 1.0)
    ts = np.array([0.1, 0.37, 0.9])
    vals = orbit.value_at(ts)
    shifted = orbit.value_at(ts + 3.0)
    assert np.allclose(vals, shifted, atol=1e-12)
    # interpolation should be far more accurate than the sample spacing
    assert abs(float(orbit.value_at(orbit.ts[5] + 0.5 * (orbit.ts[6] - orbit.ts[5])))
               - 0.5 * (orbit.values[5] + orbit.values[6])) < 1e-5
