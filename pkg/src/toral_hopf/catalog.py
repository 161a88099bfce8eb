"""Worked example systems and leaves.

The scalar rate is
    alpha_0 + alpha_1 x1 + alpha_2 y1 + alpha_3 x1^2 + alpha_4 y1^2 + alpha_5 x2^2
            + alpha_6 y2^2 + alpha_7 x1 x3^2 + alpha_8 x1 y3^2
with alpha_i = a_i + mu_i, frequencies omega_i = sqrt(i), n = 3.
"""
from __future__ import annotations

from fractions import Fraction

from .algebra.series import MultiIndex, PolySeries
from .algebra.surd import Surd
from .algebra.system import EulerianSystem
from .cells import KPermutation
from .leaf import LeafSpec

# (alpha, beta) exponents of the nine monomials, n = 3
_MONOMIALS = {
    0: ((0, 0, 0), (0, 0, 0)),
    1: ((1, 0, 0), (0, 0, 0)),
    2: ((0, 0, 0), (1, 0, 0)),
    3: ((2, 0, 0), (0, 0, 0)),
    4: ((0, 0, 0), (2, 0, 0)),
    5: ((0, 2, 0), (0, 0, 0)),
    6: ((0, 0, 0), (0, 2, 0)),
    7: ((1, 0, 2), (0, 0, 0)),
    8: ((1, 0, 0), (0, 0, 2)),
}

EX51_A = {1: 1, 2: 0, 3: -4, 4: 6, 5: -1, 6: -1}
EX51_PARAMS = (0, 3, 4, 5)
EX52_A = {1: 2, 2: 1, 3: -1, 4: 1, 7: 3, 8: 3}
EX52_PARAMS = (0, 3, 4)


def scalar_rate_system(a: dict, active_mu=(0,), truncation: int = 7) -> EulerianSystem:
    n = 3
    params = tuple(f"mu{i}" for i in active_mu)
    terms = {}
    zero = (0,) * len(params)
    for i, (al, be) in _MONOMIALS.items():
        c = Fraction(a.get(i, 0))
        if c:
            terms[MultiIndex(al, be, zero)] = c
        if i in active_mu:
            mu = tuple(1 if p == i else 0 for p in active_mu)
            terms[MultiIndex(al, be, mu)] = Fraction(1)
    g = PolySeries(n, terms, truncation, len(params))
    f = tuple(PolySeries(n, {}, truncation, len(params)) for _ in range(n))
    omega = tuple(Surd.sqrt(i) for i in range(1, n + 1))
    return EulerianSystem(n, omega, g, f, params, truncation)


def example_5_1(active_mu=EX51_PARAMS) -> EulerianSystem:
    return scalar_rate_system(EX51_A, active_mu)


def example_5_2(active_mu=EX52_PARAMS) -> EulerianSystem:
    return scalar_rate_system(EX52_A, active_mu)


SIGMA_51 = KPermutation(3, 2, (1, 2, 3))
SIGMA_52 = KPermutation(3, 2, (1, 3, 2))


def leaf_51_generic() -> LeafSpec:
    """C = (1/sqrt5, 2/sqrt5, 0) with rho_1 as reference radius."""
    return LeafSpec(SIGMA_51, (Fraction(1), Fraction(2), Fraction(0)), ref=1)


def leaf_51_diagonal() -> LeafSpec:
    return LeafSpec.from_squares(SIGMA_51, (Fraction(1, 2), Fraction(1, 2), 0), ref=1)


def leaf_52_diagonal() -> LeafSpec:
    """c_1 = c_3 = 1/sqrt2."""
    return LeafSpec.from_squares(SIGMA_52, (Fraction(1, 2), 0, Fraction(1, 2)), ref=1)


def leaf_52_s3() -> LeafSpec:
    """c_1 = 2 c_3 = 2/sqrt5."""
    return LeafSpec(SIGMA_52, (Fraction(2), Fraction(0), Fraction(1)), ref=1)


def example_6_1():
    """n = k = 2, a_e = (1, -1), every a_{e_i+e_j} = 1."""
    from .cellbif import CellNFCoeffs
    return CellNFCoeffs(2, 2, KPermutation.identity(2, 2), (1, -1), ((1, 1), (1, 1)))


def example_6_2():
    """n = k = 3, a_e = (1, -1, 1), every a_{e_i+e_j} = 1."""
    from .cellbif import CellNFCoeffs
    return CellNFCoeffs(3, 3, KPermutation.identity(3, 3), (1, -1, 1), ((1, 1, 1),) * 3)
