"""Reduction of an Eulerian system onto a leaf M^C_{k,sigma} and the linear
isomorphism between the trigonometric form on T_k x R^+ and complex monomials.

On a leaf every supported pair radius is a fixed multiple of one reference
radius rho: rho_{sigma(j)} = (c_{sigma(j)} / c_ref) rho.  The reduced field is

    d rho / dt      = rho * G(theta, rho)
    d theta_j / dt  = omega_{sigma(j)} + F_j(theta, rho)

with G, F_j trigonometric polynomials stored as maps
(rho power, cos exponents, sin exponents, mu exponents) -> coefficient.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Sequence

import numpy as np

from .algebra.surd import Surd, as_exact
from .algebra.system import EulerianSystem
from .cells import KPermutation
from .errors import InputError

UNIT_TOL = 1e-12


def _is_exact(x) -> bool:
    return isinstance(x, (int, Rational, Surd))


@dataclass(frozen=True)
class LeafSpec:
    """A leaf (k, sigma, C).

    ``C`` may be given as any positive direction on the support; it is stored
    as given (exact entries are kept exact) and ``unit_C`` is the normalized
    float vector.  ``ref`` is the 1-based pair whose radius is the reference
    coordinate; it defaults to sigma(k).
    """

    sigma: KPermutation
    C: tuple
    ref: int | None = None

    def __post_init__(self):
        C = tuple(self.C)
        if len(C) != self.sigma.n:
            raise InputError(f"C must have {self.sigma.n} entries")
        sel = set(self.sigma.selected)
        for i, c in enumerate(C, start=1):
            if i in sel and not float(c) > 0:
                raise InputError(f"c_{i} must be positive on the leaf support")
            if i not in sel and float(c) != 0:
                raise InputError(f"c_{i} must vanish off the leaf support")
        object.__setattr__(self, "C", C)
        ref = self.sigma.selected[-1] if self.ref is None else int(self.ref)
        if ref not in sel:
            raise InputError(f"reference pair {ref} is not on the leaf support")
        object.__setattr__(self, "ref", ref)

    @classmethod
    def from_squares(cls, sigma: KPermutation, csq: Sequence, ref: int | None = None) -> "LeafSpec":
        """Build from squared entries c_i^2; exact rationals give exact surds."""
        C = []
        for v in csq:
            if _is_exact(v) and not isinstance(v, Surd):
                C.append(Surd.sqrt(Fraction(v)))
            else:
                C.append(math.sqrt(float(v)))
        return cls(sigma, tuple(C), ref)

    @property
    def n(self) -> int:
        return self.sigma.n

    @property
    def k(self) -> int:
        return self.sigma.k

    @property
    def exact(self) -> bool:
        return all(_is_exact(c) for c in self.C)

    @property
    def unit_C(self) -> np.ndarray:
        v = np.array([float(c) for c in self.C])
        return v / np.linalg.norm(v)

    def is_unit(self) -> bool:
        if self.exact:
            return sum((Surd(c) if not isinstance(c, Surd) else c) ** 2 for c in self.C) == 1
        return abs(sum(float(c) ** 2 for c in self.C) - 1) <= UNIT_TOL

    def ratio(self, i: int):
        """c_i / c_ref (1-based i), exact when C is exact."""
        ci, cr = self.C[i - 1], self.C[self.ref - 1]
        if self.exact:
            return as_exact(Surd(ci) / Surd(cr))
        return float(ci) / float(cr)

    def ref_position(self) -> int:
        return self.sigma.selected.index(self.ref)


TrigKey = tuple  # (rho_power, cos exponents, sin exponents, mu exponents)


@dataclass(frozen=True)
class LeafVectorField:
    k: int
    omega_hat: tuple
    radial_terms: dict
    angular_terms: tuple
    leaf: LeafSpec | None = None
    params: tuple = ()
    exact: bool = True

    def __post_init__(self):
        clean = lambda d: {kk: v for kk, v in d.items() if v != 0}
        object.__setattr__(self, "radial_terms", clean(self.radial_terms))
        object.__setattr__(self, "angular_terms", tuple(clean(d) for d in self.angular_terms))
        if len(self.angular_terms) != self.k or len(self.omega_hat) != self.k:
            raise InputError("leaf field components do not match k")

    @property
    def n_params(self) -> int:
        return len(self.params)

    def evaluate(self, theta, rho, mu=()):
        """Return (G, F) with d rho/dt = rho G and d theta_j/dt = omega_j + F_j."""
        theta = np.asarray(theta, dtype=float)
        c, s = np.cos(theta), np.sin(theta)

        def ev(terms):
            tot = 0.0
            for (p, a, b, m), coef in terms.items():
                v = float(coef) * rho ** p
                v *= float(np.prod(c ** np.array(a)) * np.prod(s ** np.array(b)))
                for e, mv in zip(m, mu):
                    if e:
                        v *= float(mv) ** e
                tot += v
            return tot

        return ev(self.radial_terms), np.array([ev(t) for t in self.angular_terms])

    def max_rho_power(self) -> int:
        keys = list(self.radial_terms) + [kk for t in self.angular_terms for kk in t]
        return max((kk[0] for kk in keys), default=0)


def leaf_reduce(sys: EulerianSystem, leaf: LeafSpec) -> LeafVectorField:
    if leaf.n != sys.n:
        raise InputError(f"leaf lives in n={leaf.n}, system has n={sys.n}")
    sel = leaf.sigma.selected
    exact = sys.is_exact() and leaf.exact
    ratios = {p: leaf.ratio(p) for p in sel}
    if not exact:
        ratios = {p: float(r) for p, r in ratios.items()}

    def reduce(series):
        out: dict = {}
        for mi, coef in series.terms.items():
            supp = {i + 1 for i in mi.support()}
            if not supp <= set(sel):
                continue
            scale = Fraction(1) if exact else 1.0
            for p in supp:
                e = mi.alpha[p - 1] + mi.beta[p - 1]
                scale = scale * ratios[p] ** e
            a = tuple(mi.alpha[p - 1] for p in sel)
            b = tuple(mi.beta[p - 1] for p in sel)
            key = (mi.degree, a, b, tuple(mi.mu))
            val = (coef if exact else float(coef)) * scale
            out[key] = out.get(key, 0) + val
        return {kk: as_exact(v) for kk, v in out.items()}

    omega_hat = tuple(sys.omega[p - 1] for p in sel)
    if not exact:
        omega_hat = tuple(float(w) for w in omega_hat)
    return LeafVectorField(
        k=leaf.k,
        omega_hat=omega_hat,
        radial_terms=reduce(sys.g),
        angular_terms=tuple(reduce(sys.f[p - 1]) for p in sel),
        leaf=leaf,
        params=sys.params,
        exact=exact,
    )


# --- complex form ---------------------------------------------------------------

_I = Surd.i()


def field_unit(exact: bool):
    return (Surd(1), _I) if exact else (1.0 + 0j, 1j)


@lru_cache(maxsize=None)
def _trig_modes_exact(a: int, b: int) -> tuple:
    """cos^a sin^b as sum_m coeff e^{i m theta}, with z w = 1 reduction."""
    dist = {0: Surd(1)}
    half = Fraction(1, 2)
    factors = [{1: Surd(half), -1: Surd(half)}] * a + [{1: -_I * half, -1: _I * half}] * b
    for fac in factors:
        nxt: dict = {}
        for m, c in dist.items():
            for dm, dc in fac.items():
                nxt[m + dm] = nxt.get(m + dm, Surd(0)) + c * dc
        dist = {m: c for m, c in nxt.items() if c}
    return tuple(sorted(dist.items()))


@lru_cache(maxsize=None)
def _trig_modes_float(a: int, b: int) -> tuple:
    return tuple((m, complex(c)) for m, c in _trig_modes_exact(a, b))


def _mode_to_ab(mode: tuple) -> tuple:
    return tuple(max(m, 0) for m in mode), tuple(max(-m, 0) for m in mode)


@dataclass(frozen=True)
class ComplexJElement:
    """Element of the complex Lie algebra: g and f_i as maps
    (z exponents a, w exponents b, r power, mu exponents) -> complex coefficient,
    with a_i b_i = 0 for every i (the ring restriction)."""

    k: int
    g_terms: dict
    f_terms: tuple
    exact: bool = True
    omega_hat: tuple = ()
    params: tuple = ()

    def __post_init__(self):
        for d in (self.g_terms, *self.f_terms):
            for (a, b, r, m) in d:
                if any(x and y for x, y in zip(a, b)):
                    raise InputError(f"monomial z^{a} w^{b} lies outside the ring")

    def mode_maps(self) -> list[dict]:
        """Component maps keyed (r, mode, mu) with mode = a - b."""
        out = []
        for d in (self.g_terms, *self.f_terms):
            out.append({(r, tuple(x - y for x, y in zip(a, b)), m): c for (a, b, r, m), c in d.items()})
        return out

    @classmethod
    def from_mode_maps(cls, maps, exact=True, omega_hat=(), params=()):
        comps = []
        for d in maps:
            comps.append({(*_mode_to_ab(mode), r, m): c for (r, mode, m), c in d.items() if c != 0})
        return cls(len(maps) - 1, comps[0], tuple(comps[1:]), exact, omega_hat, params)

    def check_reality(self, tol: float = 1e-12) -> bool:
        for d in (self.g_terms, *self.f_terms):
            for (a, b, r, m), c in d.items():
                conj = d.get((b, a, r, m), 0)
                if self.exact:
                    if Surd(c).conjugate() != Surd(conj):
                        return False
                elif abs(complex(c).conjugate() - complex(conj)) > tol * max(1.0, abs(complex(c))):
                    return False
        return True


def _trig_to_modes(terms: dict, exact: bool) -> dict:
    out: dict = {}
    table = _trig_modes_exact if exact else _trig_modes_float
    for (p, a, b, m), coef in terms.items():
        c0 = Surd(coef) if exact else complex(float(coef) if not isinstance(coef, complex) else coef)
        per_angle = [table(ai, bi) for ai, bi in zip(a, b)]
        partial = {(): c0}
        for lst in per_angle:
            nxt = {}
            for mode, c in partial.items():
                for dm, dc in lst:
                    key = mode + (dm,)
                    nxt[key] = nxt.get(key, 0) + c * dc
            partial = nxt
        for mode, c in partial.items():
            key = (p, mode, m)
            out[key] = out.get(key, 0) + c
    zero = (lambda v: not v) if exact else (lambda v: v == 0)
    return {kk: v for kk, v in out.items() if not zero(v)}


def to_complex(lvf: LeafVectorField) -> ComplexJElement:
    maps = [_trig_to_modes(lvf.radial_terms, lvf.exact)]
    maps += [_trig_to_modes(t, lvf.exact) for t in lvf.angular_terms]
    el = ComplexJElement.from_mode_maps(maps, lvf.exact, lvf.omega_hat, lvf.params)
    if not el.check_reality():
        raise AssertionError("complex form violates reality; internal error")
    return el


def _exp_mode_to_trig(mode: tuple, exact: bool) -> dict:
    """e^{i m.theta} = prod_i (cos + i sgn(m_i) sin)^{|m_i|} as (a, b) -> coeff."""
    one, I = field_unit(exact)
    partial = {((), ()): one}
    for mi in mode:
        p, sgn = abs(mi), (1 if mi >= 0 else -1)
        lst = []
        for t in range(p + 1):
            c = math.comb(p, t) * (I * sgn) ** t if exact else math.comb(p, t) * (I * sgn) ** t
            lst.append((p - t, t, c))
        nxt = {}
        for (a, b), c in partial.items():
            for ca, sb, cc in lst:
                key = (a + (ca,), b + (sb,))
                nxt[key] = nxt.get(key, 0) + c * cc
        partial = nxt
    return partial


def from_complex(el: ComplexJElement, tol: float = 1e-12) -> LeafVectorField:
    if not el.check_reality(tol):
        raise InputError("complex element violates the reality condition")
    comps = []
    for d in (el.g_terms, *el.f_terms):
        out: dict = {}
        for (a, b, r, m), c in d.items():
            mode = tuple(x - y for x, y in zip(a, b))
            for (ca, sb), tc in _exp_mode_to_trig(mode, el.exact).items():
                key = (r, ca, sb, m)
                out[key] = out.get(key, 0) + c * tc
        real = {}
        for key, v in out.items():
            if el.exact:
                v = Surd(v)
                if not v.imag.is_zero():
                    raise InputError("complex element violates the reality condition")
                v = as_exact(v.real)
                if v != 0:
                    real[key] = v
            else:
                v = complex(v)
                if abs(v.imag) > tol * max(1.0, abs(v)):
                    raise InputError("complex element violates the reality condition")
                if v.real != 0:
                    real[key] = v.real
        comps.append(real)
    k = el.k
    omega = el.omega_hat or (0,) * k
    return LeafVectorField(k, tuple(omega), comps[0], tuple(comps[1:]), None, el.params, el.exact)
