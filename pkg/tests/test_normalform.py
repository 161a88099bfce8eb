from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toral_hopf.catalog import (SIGMA_51, SIGMA_52, example_5_1, example_5_2, leaf_51_diagonal,
                                leaf_51_generic, leaf_52_diagonal, leaf_52_s3)
from toral_hopf.leaf import LeafSpec, leaf_reduce
from toral_hopf.normalform.graded import GradedLElement, bracket, delta, euler_term, theta_term
from toral_hopf.normalform.hyper import detect_s, infinite_level_pnf
from toral_hopf.normalform.lie import first_level_nf

small = st.integers(1, 5)


def _nf(sys, leaf, grade=7, mu_degree=0):
    return first_level_nf(leaf_reduce(sys, leaf), grade=grade, mu_degree=mu_degree)


@given(small, small)
@settings(max_examples=15, deadline=None)
def test_b1_example_51(c1, c2):
    # b_1(0, C) = (c1^2 - c2^2) / c1^2
    leaf = LeafSpec(SIGMA_51, (Fraction(c1), Fraction(c2), Fraction(0)), ref=1)
    el = _nf(example_5_1(active_mu=()), leaf, grade=3)
    assert el.a(1) == Fraction(c1 * c1 - c2 * c2, c1 * c1)


@given(small, small)
@settings(max_examples=10, deadline=None)
def test_printed_leaf_polynomial_example_52(c1, c3):
    # rho^4: (7 mu3 + 13 mu4)/8 + 2(c1^2 + 3 c3^2) mu0 / c1^2 + 3(c1^2 - 4 c3^2)/(4 c1^2)
    # rho^6: 3(5 c1^2 - 34 c3^2)/(4 c1^2)
    leaf = LeafSpec(SIGMA_52, (Fraction(c1), Fraction(0), Fraction(c3)), ref=1)
    el = _nf(example_5_2(), leaf, grade=7, mu_degree=1)
    q = Fraction(c3 * c3, c1 * c1)
    p2 = el.euler_poly(2)
    assert p2.get((0, 0, 0), 0) == Fraction(3, 4) * (1 - 4 * q)
    assert p2[(1, 0, 0)] == 2 * (1 + 3 * q)
    assert p2[(0, 1, 0)] == Fraction(7, 8) and p2[(0, 0, 1)] == Fraction(13, 8)
    assert el.a(3) == Fraction(3, 4) * (5 - 34 * q)
    assert el.euler_poly(1) == {(0, 1, 0): Fraction(1, 2), (0, 0, 1): Fraction(1, 2)}


@pytest.mark.parametrize("sys,leaf,j,want", [
    (example_5_1(active_mu=()), leaf_51_diagonal(), 2, Fraction(5, 4)),
    # generic leaf: (7 c1^2 - 2 c2^2)/(4 c1^2) at C ~ (1, 2)
    (example_5_1(active_mu=()), leaf_51_generic(), 2, Fraction(-1, 4)),
    (example_5_2(active_mu=()), leaf_52_diagonal(), 2, Fraction(-9, 4)),
    (example_5_2(active_mu=()), leaf_52_s3(), 3, Fraction(-21, 8)),
])
def test_first_level_landmarks(sys, leaf, j, want):
    assert _nf(sys, leaf, grade=2 * j + 1).a(j) == want


def test_b1_carries_all_quadratic_parameters():
    el = _nf(example_5_1(), leaf_51_diagonal(), grade=5, mu_degree=1)
    assert el.euler_poly(1) == {(0, 1, 0, 0): Fraction(1, 2), (0, 0, 1, 0): Fraction(1, 2),
                                (0, 0, 0, 1): Fraction(1, 2)}


@pytest.mark.parametrize("leaf,sys,s", [
    (leaf_51_generic(), example_5_1(active_mu=()), 1),
    (leaf_51_diagonal(), example_5_1(active_mu=()), 2),
    (leaf_52_diagonal(), example_5_2(active_mu=()), 2),
    (leaf_52_s3(), example_5_2(active_mu=()), 3),
])
def test_detect_s(leaf, sys, s):
    assert detect_s(_nf(sys, leaf)) == s


def test_infinite_level_example_51():
    el = _nf(example_5_1(active_mu=(0, 3)), leaf_51_diagonal(), grade=9, mu_degree=2)
    res = infinite_level_pnf(el, 12)
    assert res.s == 2
    assert res.nu(0) == {(1, 0): 1, (1, 1): Fraction(3, 10), (2, 0): Fraction(397, 60)}
    nu1 = res.nu(1)
    assert nu1[(0, 1)] == Fraction(1, 2) and nu1[(1, 0)] == -1
    assert res.nu(2) == {(0, 0): Fraction(5, 4)}
    assert res.constraint_violations() == []


@pytest.mark.parametrize("first_grade", [9, 11])
def test_infinite_level_example_52_s2(first_grade):
    el = _nf(example_5_2(active_mu=(0, 3)), leaf_52_diagonal(), grade=first_grade, mu_degree=2)
    res = infinite_level_pnf(el, 12)
    assert res.nu(0)[(1, 1)] == Fraction(-95, 54)
    assert res.nu(1)[(1, 0)] == Fraction(-29, 3)
    assert res.nu(0)[(2, 0)] == Fraction(55, 12)  # printed 4805/162, see ledger
    assert res.nu(2) == {(0, 0): Fraction(-9, 4)}


def test_state_convention_flips_sign():
    el = _nf(example_5_2(active_mu=(0, 3)), leaf_52_diagonal(), grade=9, mu_degree=2)
    assert infinite_level_pnf(el, 12, convention="state").nu(1)[(1, 0)] == Fraction(29, 3)


def test_infinite_level_example_52_s3_stable_in_degree():
    res = []
    for g in (11, 13):
        el = _nf(example_5_2(), leaf_52_s3(), grade=g, mu_degree=1)
        res.append(infinite_level_pnf(el, 11))
    for j in range(4):
        assert res[0].nu(j) == res[1].nu(j)
    r = res[1]
    assert r.nu(0) == {(1, 0, 0): 1}
    assert r.nu(1) == {(1, 0, 0): Fraction(-965, 84), (0, 1, 0): Fraction(1, 2), (0, 0, 1): Fraction(1, 2)}
    assert r.nu(2) == {(1, 0, 0): Fraction(167245, 7056), (0, 1, 0): Fraction(-409, 84),
                       (0, 0, 1): Fraction(-173, 42)}
    assert r.nu(3) == {(0, 0, 0): Fraction(-21, 8)}
    assert all(r.is_trusted(j, (1, 0, 0)) for j in range(3))


# graded algebra

@st.composite
def elements(draw, k=2):
    e = {(draw(st.integers(0, 3)), ()): draw(st.fractions(-3, 3, max_denominator=4))
         for _ in range(draw(st.integers(0, 3)))}
    th = tuple({(draw(st.integers(0, 3)), ()): draw(st.fractions(-3, 3, max_denominator=4))
                for _ in range(draw(st.integers(0, 2)))} for _ in range(k))
    return GradedLElement(k, e, th)


def _sum(u, v):
    e = dict(u.euler_terms)
    for key, c in v.euler_terms.items():
        e[key] = e.get(key, 0) + c
    th = []
    for a, b in zip(u.theta_terms, v.theta_terms):
        d = dict(a)
        for key, c in b.items():
            d[key] = d.get(key, 0) + c
        th.append(d)
    return u.with_terms(e, th)


def _neg(u):
    return u.scale(-1)


@given(elements(), elements(), elements())
@settings(max_examples=60, deadline=None)
def test_bracket_jacobi(x, y, z):
    total = _sum(_sum(bracket(x, bracket(y, z)), bracket(y, bracket(z, x))), bracket(z, bracket(x, y)))
    assert not total.euler_terms and not any(total.theta_terms)


@given(elements(), elements())
@settings(max_examples=60, deadline=None)
def test_bracket_antisymmetric(x, y):
    assert bracket(x, y).is_equal(_neg(bracket(y, x)))


def test_structure_constants():
    u = bracket(euler_term(1, 2), euler_term(1, 1, Fraction(3)))
    assert u.euler_terms == {(3, ()): 6}
    v = bracket(euler_term(1, 1), theta_term(1, 1, 2))
    assert v.theta_terms[0] == {(3, ()): -4}
    assert delta("E", 2, (1,), 2) == 5 and delta("T", 2, (1,), 2) == 7
