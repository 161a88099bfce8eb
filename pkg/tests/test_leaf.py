import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toral_hopf.algebra.surd import Surd
from toral_hopf.algebra.system import evaluate_field
from toral_hopf.catalog import SIGMA_51, SIGMA_52, leaf_51_diagonal, leaf_52_s3
from toral_hopf.errors import InputError
from toral_hopf.leaf import LeafSpec, from_complex, leaf_reduce, to_complex


def _leaf_state(leaf, theta, rho):
    """Point of R^{2n} on the leaf with reference radius rho."""
    x = np.zeros(2 * leaf.n)
    for j, p in enumerate(leaf.sigma.selected):
        r = rho * float(leaf.ratio(p))
        x[2 * (p - 1)] = r * math.cos(theta[j])
        x[2 * (p - 1) + 1] = r * math.sin(theta[j])
    return x


def test_leaf_validation():
    with pytest.raises(InputError):
        LeafSpec(SIGMA_51, (1, 0, 0))
    with pytest.raises(InputError):
        LeafSpec(SIGMA_51, (1, 1, 1))
    with pytest.raises(InputError):
        LeafSpec(SIGMA_51, (1, 1, 0), ref=3)


def test_ratio_exact():
    leaf = leaf_52_s3()
    assert leaf.ratio(3) == Fraction(1, 2)
    assert LeafSpec.from_squares(SIGMA_52, (Fraction(1, 3), 0, Fraction(2, 3)), ref=1).ratio(3) == Surd.sqrt(2)
    assert LeafSpec(SIGMA_51, (1, 1, 0)).ref == 2


def test_example_51_reduction_terms(sys51):
    lvf = leaf_reduce(sys51, leaf_51_diagonal())
    # alpha_5 x_2^2 arrives as alpha_5 cos^2(theta_2) rho^2 at c_1 = c_2
    assert lvf.radial_terms[(2, (0, 2), (0, 0), (0, 0, 0, 0))] == -1
    assert lvf.radial_terms[(2, (0, 2), (0, 0), (0, 0, 0, 1))] == 1
    # x_3 is off the leaf, so alpha_7, alpha_8 never appear
    assert all(k[0] <= 2 for k in lvf.radial_terms)


@given(st.lists(st.floats(0, 2 * math.pi), min_size=2, max_size=2), st.floats(0.01, 0.8),
       st.lists(st.floats(-0.5, 0.5), min_size=3, max_size=3))
@settings(max_examples=40, deadline=None)
def test_leaf_field_matches_projected_flow(sys52, theta, rho, mu):
    # independent route: project the full field onto the leaf coordinates
    leaf = leaf_52_s3()
    lvf = leaf_reduce(sys52, leaf)
    G, F = lvf.evaluate(theta, rho, mu)
    x = _leaf_state(leaf, theta, rho)
    v = evaluate_field(sys52, x, mu)
    ref = leaf.ref - 1
    xr, yr = x[2 * ref], x[2 * ref + 1]
    rdot = (xr * v[2 * ref] + yr * v[2 * ref + 1]) / rho
    assert rdot == pytest.approx(rho * G, rel=1e-9, abs=1e-12)
    for j, p in enumerate(leaf.sigma.selected):
        xi, yi = x[2 * (p - 1)], x[2 * (p - 1) + 1]
        tdot = (xi * v[2 * (p - 1) + 1] - yi * v[2 * (p - 1)]) / (xi * xi + yi * yi)
        assert tdot == pytest.approx(float(lvf.omega_hat[j]) + F[j], rel=1e-9, abs=1e-12)


def test_complex_round_trip(sys51):
    lvf = leaf_reduce(sys51, leaf_51_diagonal())
    el = to_complex(lvf)
    assert el.check_reality()
    back = from_complex(el)
    th, rho, mu = (0.3, 1.1), 0.4, (0.01, 0.2, -0.1, 0.05)
    G0, F0 = lvf.evaluate(th, rho, mu)
    G1, F1 = back.evaluate(th, rho, mu)
    assert G1 == pytest.approx(G0, abs=1e-12)
    np.testing.assert_allclose(F1, F0, atol=1e-12)


def test_cosine_square_image():
    # alpha_1 rho cos -> alpha_1/2 r (z + w); alpha_3 cos^2 + alpha_4 sin^2 -> (a3+a4)/2 r^2
    # + (a3-a4)/4 r^2 (z^2 + w^2); on the diagonal the r^2 mean terms cancel against alpha_5, alpha_6
    from toral_hopf.catalog import example_5_1
    el = to_complex(leaf_reduce(example_5_1(active_mu=()), leaf_51_diagonal()))
    g = el.mode_maps()[0]
    assert g == {(1, (1, 0), ()): Fraction(1, 2), (1, (-1, 0), ()): Fraction(1, 2),
                 (2, (2, 0), ()): Fraction(-5, 2), (2, (-2, 0), ()): Fraction(-5, 2)}
