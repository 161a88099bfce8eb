import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toral_hopf.algebra.series import PolySeries
from toral_hopf.algebra.surd import Surd
from toral_hopf.algebra.system import EulerianSystem, compile_rhs
from toral_hopf.catalog import example_5_1
from toral_hopf.errors import InputError, NumericFailure
from toral_hopf.sim import (SimConfig, Trajectory, estimate_torus, integrate,
                            invariance_diagnostics, radial_trajectory, step_halving_order)

MU51 = (0.025, 0.0, 0.0, 0.0)


def _rotation_only(n=3):
    z = PolySeries(n, {}, 7, 0)
    omega = tuple(Surd.sqrt(i) for i in range(1, n + 1))
    return EulerianSystem(n, omega, z, (z,) * n, (), 7)


def test_config_validation():
    with pytest.raises(InputError):
        SimConfig(method="euler")
    with pytest.raises(InputError):
        SimConfig(t_span=(1.0, 1.0))
    assert SimConfig(t_span=(0, -5)).direction == -1


@given(st.integers(0, 10 ** 6))
@settings(max_examples=10, deadline=None)
def test_rk4_order(seed):
    rng = np.random.default_rng(seed)
    x0 = rng.uniform(-0.15, 0.15, 6)
    order = step_halving_order(compile_rhs(example_5_1(), MU51), x0, 1.0, 0.05)
    assert 3.7 <= order <= 4.3


@given(st.lists(st.floats(0.05, 1), min_size=3, max_size=3), st.lists(st.floats(0, 2 * math.pi), min_size=3, max_size=3))
@settings(max_examples=10, deadline=None)
def test_pure_rotation_conserves_radii(rho, phase):
    # g = f = 0: only the rotation Theta remains
    x0 = [v for r, p in zip(rho, phase) for v in (r * math.cos(p), r * math.sin(p))]
    tr = integrate(_rotation_only(), x0, (), SimConfig(t_span=(0, 20), n_record=201))
    r = tr.radii
    np.testing.assert_allclose(r, np.broadcast_to(r[0], r.shape), atol=1e-9)
    # the angles advance at omega_i
    th = np.unwrap(tr.angles, axis=0)
    np.testing.assert_allclose(th[-1] - th[0], 20 * np.sqrt([1, 2, 3]), atol=1e-7)


@given(st.floats(0.01, 0.1), st.floats(1.2, 3.0), st.floats(0, 2 * math.pi))
@settings(max_examples=10, deadline=None)
def test_leaf_and_zero_pair_invariance(r1, ratio, phase):
    # c2 > c1 keeps b_1 < 0, so the orbit stays bounded near the leaf torus
    r2 = ratio * r1
    x0 = (r1 * math.cos(phase), r1 * math.sin(phase), r2, 0.0, 0.0, 0.0)
    tr = integrate(example_5_1(), x0, MU51, SimConfig(t_span=(0, 50), n_record=501))
    inv = invariance_diagnostics(tr)
    assert inv.zero_pair_max == 0.0
    assert inv.support == (1, 2)
    assert inv.leaf_defect < 1e-8


def test_backward_matches_forward():
    sys = example_5_1()
    x0 = np.array([0.05, 0.01, 0.1, 0.0, 0.0, 0.0])
    fw = integrate(sys, x0, MU51, SimConfig(t_span=(0, 5), n_record=11))
    bw = integrate(sys, fw.states[-1], MU51, SimConfig(t_span=(5, 0), n_record=11))
    assert bw.backward and bw.times[-1] == 0.0
    np.testing.assert_allclose(bw.states[-1], x0, atol=1e-9)


def test_rk4_and_dopri_agree():
    sys = example_5_1()
    x0 = (0.05, 0.0, 0.1, 0.0, 0.0, 0.0)
    a = integrate(sys, x0, MU51, SimConfig(method="rk4", t_span=(0, 2), dt=1e-3, record_stride=100))
    b = integrate(sys, x0, MU51, SimConfig(t_span=(0, 2), n_record=21))
    np.testing.assert_allclose(a.states[-1], b.states[-1], atol=1e-10)


def test_blowup_is_reported():
    with pytest.raises(NumericFailure, match="last valid state"):
        integrate(example_5_1(), (0.9, 0, 0.9, 0, 0, 0), MU51, SimConfig(t_span=(0, 100)))
    with pytest.raises(NumericFailure):
        integrate(example_5_1(), (0.9, 0, 0.9, 0, 0, 0), MU51,
                  SimConfig(method="rk4", t_span=(0, 100), dt=1e-2))


def test_torus_estimate_on_radial_flow():
    # rho' = rho (mu - rho^2): settles at sqrt(mu) with no oscillation
    mu = 0.04
    tr = radial_trajectory(lambda t, r: r * (mu - r * r), (0.01,), SimConfig(t_span=(0, 400)))
    est = estimate_torus(tr)
    assert est.converged and est.settled
    assert est.radii_mean[0] == pytest.approx(0.2, rel=1e-6)
    with pytest.raises(InputError):
        estimate_torus(tr, tail=0.001)


def test_torus_example_51_short():
    tr = integrate(example_5_1(), (0.01, 0, 0.02, 0, 0, 0), MU51, SimConfig(t_span=(0, 600), n_record=6001))
    est = estimate_torus(tr)
    want = math.sqrt(0.025 / 3)
    assert est.radii_mean[0] == pytest.approx(want, abs=5e-3)
    assert est.radii_mean[1] / est.radii_mean[0] == pytest.approx(2, abs=1e-6)


def test_integrate_rejects_bad_shapes():
    with pytest.raises(InputError):
        integrate(example_5_1(), (0.1, 0.0), MU51)
    with pytest.raises(InputError):
        integrate(example_5_1(), (0.1,) * 6, (0.1,))


def test_trajectory_leaf_coordinates():
    tr = Trajectory(np.array([0.0]), np.array([[3.0, 0.0, 0.0, 4.0]]))
    np.testing.assert_allclose(tr.leaf_coordinates(), [[0.6, 0.8]])
