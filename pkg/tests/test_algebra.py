import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toral_hopf.algebra.series import MultiIndex, PolySeries, series_add, series_mul
from toral_hopf.algebra.surd import Surd, as_exact
from toral_hopf.algebra.system import (check_nonresonance, compile_rhs, dump_system, evaluate_field,
                                       load_system, system_from_dict, system_to_dict)
from toral_hopf.errors import InputError

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
radicands = st.sampled_from([1, 2, 3, 5, 6, 7, 10])


@st.composite
def surds(draw):
    x = Surd(0)
    for _ in range(draw(st.integers(1, 3))):
        x = x + draw(fractions) * Surd.sqrt(draw(radicands))
    return x


class TestSurd:
    def test_sqrt_simplifies(self):
        assert Surd.sqrt(8) == 2 * Surd.sqrt(2)
        assert Surd.sqrt(Fraction(1, 2)) * 2 == Surd.sqrt(2)
        assert (Surd.sqrt(3) ** 2).to_fraction() == 3

    def test_imaginary_unit(self):
        i = Surd.i()
        assert i * i == -1
        assert Surd.sqrt(-4) == 2 * i

    def test_as_exact_collapses_rationals(self):
        assert isinstance(as_exact(Surd.sqrt(2) * Surd.sqrt(2)), Fraction)
        assert isinstance(as_exact(Surd.sqrt(2)), Surd)

    @given(surds(), surds(), surds())
    @settings(max_examples=60, deadline=None)
    def test_field_axioms(self, a, b, c):
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        if not a.is_zero():
            assert a * a.inverse() == 1

    @given(surds())
    @settings(max_examples=60, deadline=None)
    def test_float_agrees(self, a):
        assert float(a * a) == pytest.approx(float(a) ** 2, rel=1e-9, abs=1e-9)
        assert a.sign() == (float(a) > 0) - (float(a) < 0)


def _poly(n, terms, trunc=5):
    return PolySeries(n, {MultiIndex(al, be): Fraction(c) for (al, be), c in terms.items()}, trunc)


class TestPolySeries:
    def test_truncation_drops_high_degree(self):
        p = _poly(1, {((3,), (0,)): 1, ((1,), (0,)): 2}, trunc=2)
        assert len(p.terms) == 1

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            series_add(_poly(1, {}), _poly(2, {}))

    @given(st.lists(st.floats(-1, 1), min_size=4, max_size=4))
    @settings(max_examples=40, deadline=None)
    def test_product_evaluates_pointwise(self, x):
        p = _poly(2, {((1, 0), (0, 0)): 3, ((0, 1), (1, 0)): -2})
        q = _poly(2, {((0, 0), (0, 1)): 1, ((2, 0), (0, 0)): Fraction(1, 2)})
        assert series_mul(p, q).evaluate(x) == pytest.approx(p.evaluate(x) * q.evaluate(x), abs=1e-12)
        assert series_add(p, q).evaluate(x) == pytest.approx(p.evaluate(x) + q.evaluate(x), abs=1e-12)


class TestSystem:
    def test_catalog_is_nonresonant(self, sys51):
        assert not check_nonresonance(sys51.omega).resonant

    def test_resonance_detected(self):
        rep = check_nonresonance([Surd(1), Surd(2)])
        assert rep.resonant and rep.relation is not None

    def test_compiled_rhs_matches_interpreter(self, sys52):
        rhs = compile_rhs(sys52, (0.01, -0.2, 0.3))
        rng = np.random.default_rng(1)
        for _ in range(20):
            x = rng.uniform(-0.5, 0.5, 6)
            np.testing.assert_allclose(rhs(0.0, x), evaluate_field(sys52, x, (0.01, -0.2, 0.3)),
                                       rtol=1e-12, atol=1e-14)

    def test_field_shape_on_eulerian_system(self, sys51):
        # with f = 0 the field is Theta + g E_0, so d rho_i / dt = rho_i g
        x = np.array([0.3, -0.1, 0.2, 0.4, 0.1, 0.05])
        mu = (0.0, 0.0, 0.0, 0.0)
        v = evaluate_field(sys51, x, mu)
        g = sys51.g.evaluate(x, mu)
        for i in range(3):
            xi, yi = x[2 * i], x[2 * i + 1]
            rho = math.hypot(xi, yi)
            assert (xi * v[2 * i] + yi * v[2 * i + 1]) / rho == pytest.approx(rho * g, abs=1e-12)
            w = float(sys51.omega[i])
            assert (xi * v[2 * i + 1] - yi * v[2 * i]) / rho ** 2 == pytest.approx(w, abs=1e-12)

    def test_json_round_trip(self, sys52, tmp_path):
        text = dump_system(sys52)
        p = tmp_path / "s.json"
        p.write_text(text)
        back = load_system(p)
        assert system_to_dict(back) == system_to_dict(sys52)

    def test_malformed_json_reports_position(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"n": 2,,}')
        with pytest.raises(InputError, match="line 1"):
            load_system(p)

    def test_constant_term_rejected(self, sys51):
        d = system_to_dict(sys51)
        d["g_terms"].append({"alpha": [0, 0, 0], "beta": [0, 0, 0], "coeff": "1",
                             "mu_power": [0, 0, 0, 0]})
        with pytest.raises(InputError):
            system_from_dict(d)

    def test_substitute_mu_keeps_constant(self, sys51):
        s = sys51.substitute_mu((Fraction(1, 40), 0, 0, 0))
        assert s.n_params == 0
        assert s.g.evaluate([0.0] * 6) == pytest.approx(0.025)
