import math

import pytest
from hypothesis import given, settings, strategies as st

from toral_hopf.cells import (KPermutation, SphereCell, cell_lattice, classify_point, enumerate_Skn,
                              expected_toral_cell_count, refinements, sphere_cell_closure,
                              toral_cw_over_sphere)
from toral_hopf.errors import InputError


@pytest.mark.parametrize("n,k", [(1, 0), (1, 1), (3, 2), (5, 3), (6, 6)])
def test_skn_size_and_form(n, k):
    cells = enumerate_Skn(n, k)
    assert len(cells) == math.comb(n, k)
    assert len(set(cells)) == len(cells)
    for s in cells:
        assert list(s.selected) == sorted(s.selected)
        assert list(s.discarded) == sorted(s.discarded)


def test_rejects_non_canonical():
    with pytest.raises(InputError):
        KPermutation(3, 2, (2, 1, 3))
    with pytest.raises(InputError):
        KPermutation(3, 4, (1, 2, 3))


def test_refinements_stay_inside():
    s = KPermutation.from_selected(5, (1, 3, 4))
    for l in range(4):
        for g in refinements(s, l):
            assert set(g.selected) <= {1, 3, 4}
        assert len(refinements(s, l)) == math.comb(3, l)


def test_classify_point_drops_tiny_pairs():
    cp = classify_point((0.1, 0.0, 1e-14, 0.0, 0.2, 0.1))
    assert cp.k == 2 and cp.sigma.selected == (1, 3)
    assert sum(c * c for c in cp.C) == pytest.approx(1.0)
    assert cp.rho_k == pytest.approx(math.hypot(0.2, 0.1))
    assert classify_point((0.0,) * 4).is_origin


@given(st.integers(1, 7))
@settings(max_examples=7, deadline=None)
def test_closure_and_toral_counts(k):
    cell = SphereCell(k, KPermutation.identity(k, k))
    assert len(sphere_cell_closure(cell)) == 2 ** k - 1
    d = toral_cw_over_sphere(KPermutation.identity(k, k))
    assert len(d) == expected_toral_cell_count(k) == 2 ** k - 1
    assert d.fiber_histogram() == {l: math.comb(k, l) for l in range(1, k + 1)}
    # base dim l-1 plus an l-torus fiber
    assert all(c.dim == 2 * c.fiber_dim - 1 for c in d.cells)


def test_sphere_cell_membership():
    cell = SphereCell(2, KPermutation.from_selected(3, (1, 3)))
    assert cell.dim == 1
    assert cell.contains((0.6, 0.0, 0.8))
    assert not cell.contains((0.6, 0.8, 0.0))
    assert not cell.contains((1.0, 0.0, 0.0))


def test_lattice_boundaries():
    lat = cell_lattice(3)
    assert sum(1 for c in lat if c["k"] == 2) == 3
    for c in lat:
        assert c["dim"] == 2 * c["k"]
        for b in c["boundary"]:
            assert set(b) < set(c["selected"]) or not c["selected"]
