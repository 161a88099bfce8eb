import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from toral_hopf.catalog import leaf_51_generic, leaf_52_s3
from toral_hopf.errors import InputError
from toral_hopf.leafbif import (AmplitudeODE, analyze, analyze_s1, analyze_s2, analyze_s3,
                                count_positive_roots_oracle, count_positive_roots_oracle_batch,
                                count_positive_roots_rh, count_positive_roots_rh_batch, cubic_invariants)

coef = st.floats(-2, 2, allow_nan=False).filter(lambda v: abs(v) > 1e-3)
fr = st.fractions(-5, 5, max_denominator=6)


@given(coef, coef, coef, coef)
@settings(max_examples=300, deadline=None)
def test_hurwitz_matches_cardano(nu0, nu1, nu2, a3):
    inv = cubic_invariants(nu0, nu1, nu2, a3)
    assume(abs(inv["D"]) > 1e-7)
    assert count_positive_roots_rh(nu0, nu1, nu2, a3).n_positive == \
        count_positive_roots_oracle(nu0, nu1, nu2, a3).n_positive


def test_batch_routes_agree():
    rng = np.random.default_rng(3)
    nu = rng.uniform(-2, 2, (20000, 3))
    a3 = rng.uniform(0.1, 2, 20000) * rng.choice([-1, 1], 20000)
    b, c, d = nu[:, 2] / a3, nu[:, 1] / a3, nu[:, 0] / a3
    p = c - b * b / 3
    q = 2 * b ** 3 / 27 - b * c / 3 + d
    keep = np.abs((p / 3) ** 3 + (q / 2) ** 2) > 1e-7
    o = count_positive_roots_oracle_batch(nu[:, 0], nu[:, 1], nu[:, 2], a3)[keep]
    h = count_positive_roots_rh_batch(nu[:, 0], nu[:, 1], nu[:, 2], a3)[keep]
    assert np.array_equal(o, h)
    assert set(np.unique(o)) == {0, 1, 2, 3}


@given(fr, fr, fr)
@settings(max_examples=100, deadline=None)
def test_exact_roots_from_factored_cubics(r1, r2, r3):
    # -(R - r1)(R - r2)(R - r3): exact count of distinct positive roots
    e1, e2, e3 = r1 + r2 + r3, r1 * r2 + r1 * r3 + r2 * r3, r1 * r2 * r3
    assume(e3 != 0)
    rep = count_positive_roots_rh(e3, -e2, e1, -1)
    assert rep.n_positive == len({r for r in (r1, r2, r3) if r > 0})


@pytest.mark.parametrize("nu,want", [
    ((Fraction(-6), Fraction(11), Fraction(-6)), 3),  # (R-1)(R-2)(R-3), a3 = 1
    ((Fraction(-1), Fraction(3), Fraction(-3)), 1),  # (R-1)^3
    ((Fraction(-2), Fraction(5), Fraction(-4)), 2),  # (R-1)^2 (R-2): D = 0
    ((Fraction(0), Fraction(2), Fraction(-3)), 2),  # nu0 = 0: R(R-1)(R-2)
    ((Fraction(-1), Fraction(-1), Fraction(1)), 1),  # Delta2 = 0: (R+1)(R^2-1)
])
def test_singular_cases_exact(nu, want):
    assert count_positive_roots_rh(*nu, Fraction(1)).n_positive == want


def test_three_tori_alternate_stability():
    rep = analyze_s3(Fraction(6), Fraction(-11), Fraction(6), Fraction(-1))
    assert [float(t.R) for t in rep.tori] == pytest.approx([1, 2, 3])
    assert [t.stable for t in rep.tori] == [True, False, True]
    assert rep.origin_stable is False


@given(coef, coef, coef, coef)
@settings(max_examples=200, deadline=None)
def test_stability_is_slope_sign(nu0, nu1, nu2, a3):
    rep = analyze_s3(nu0, nu1, nu2, a3)
    ode = rep.ode
    for t in rep.tori:
        assert abs(ode.P(t.R)) < 1e-8
        if t.stable is not None:
            assert t.stable == (ode.dP(t.R) < 0)


def test_s1_torus_and_leaf_radii():
    leaf = leaf_51_generic()
    rep = analyze_s1(Fraction(1, 40), Fraction(-3), leaf)
    (t,) = rep.tori
    assert t.R == Fraction(1, 120)
    assert t.radius_vector == pytest.approx((math.sqrt(1 / 120), 2 * math.sqrt(1 / 120), 0.0))
    assert t.stable is True
    assert analyze_s1(Fraction(1), Fraction(3)).tori == ()
    assert analyze_s1(0, 1).on("T_Pch")


def test_s2_varieties():
    assert analyze_s2(0, -1, 1).on("T_SupP")
    assert analyze_s2(0, 1, -1).on("T_SubP")
    rep = analyze_s2(Fraction(1, 4), -1, 1)  # double root at R = 1/2
    assert rep.on("T_2SD")
    assert len(rep.tori) == 1 and rep.tori[0].stable is None
    rep = analyze_s2(Fraction(1, 8), -1, 1)
    assert [t.stable for t in rep.tori] == [True, False]


def test_s3_varieties():
    # (R-1)^2 (R-2) on the saddle-node set
    assert analyze_s3(-2, 5, -4, 1).on("T_2SN")
    assert analyze_s3(0, -1, 1, -1).on("T_Psup")
    assert analyze_s3(0, 1, 1, -1).on("T_Psub")


def test_dispatch_and_validation():
    assert analyze([1, -1], 1).s == 2
    with pytest.raises(InputError):
        analyze([1, 1, 1, 1], 1)
    with pytest.raises(InputError):
        AmplitudeODE(2, (1, 1), 0)


def test_radius_vectors_on_s3_leaf():
    rep = analyze_s3(Fraction(-6), Fraction(11), Fraction(-6), Fraction(1), leaf_52_s3())
    for t in rep.tori:
        r = math.sqrt(float(t.R))
        assert t.radius_vector == pytest.approx((r, 0.0, r / 2))
