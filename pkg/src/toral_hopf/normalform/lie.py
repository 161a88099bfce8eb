"""First-level leaf normal form by Lie transforms in complex coordinates.

A leaf field is held as k+1 coefficient maps (A, B_1..B_k) keyed
(r power, angular mode, mu exponents); it stands for

    r A(theta, r) d/dr + sum_i B_i(theta, r) d/dtheta_i ,

with the rotation constants omega_i stored in B_i at the zero key.  A
generator Y with the same layout transforms v into exp(ad_Y) v where
ad_Y v = v(Y) - Y(v).  Against the linear rotation part a mode-m term picks
up the eigenvalue i <m, omega>, so every term with m != 0 is removed by
Y = -T / (i <m, omega>).
"""
from __future__ import annotations

from fractions import Fraction

from ..algebra.surd import Surd, as_exact
from ..errors import ResonanceError
from ..leaf import LeafVectorField, to_complex
from .graded import GradedLElement

RESONANCE_TOL = 1e-12


class _Ring:
    """Coefficient field helpers for the exact (Surd) or float (complex) tower."""

    def __init__(self, exact: bool):
        self.exact = exact
        self.I = Surd.i() if exact else 1j

    def conv(self, v):
        if self.exact:
            return v if isinstance(v, Surd) else Surd(v)
        return complex(v)

    def zero(self, v) -> bool:
        return v.is_zero() if self.exact else v == 0


def _clean(d: dict, ring: _Ring) -> dict:
    return {k: v for k, v in d.items() if not ring.zero(v)}


def _mul(F: dict, G: dict, keep, out: dict, sign: int = 1):
    """out += sign * F * G (convolution over (r, mode, mu) keys)."""
    for (r1, m1, q1), c1 in F.items():
        for (r2, m2, q2), c2 in G.items():
            r = r1 + r2
            q = tuple(a + b for a, b in zip(q1, q2))
            if not keep(r, q):
                continue
            key = (r, tuple(a + b for a, b in zip(m1, m2)), q)
            prod = c1 * c2
            if sign < 0:
                prod = -prod
            if key in out:
                out[key] = out[key] + prod
            else:
                out[key] = prod


def _rdr(F: dict) -> dict:
    return {k: v * k[0] for k, v in F.items() if k[0]}


def _dth(F: dict, i: int, I) -> dict:
    return {k: v * (I * k[1][i]) for k, v in F.items() if k[1][i]}


def bracket_D(X: list, Y: list, keep, ring: _Ring) -> list:
    """Derivation bracket X(Y) - Y(X) in (A, B) component form."""
    k = len(X) - 1
    A, B = X[0], X[1:]
    P, H = Y[0], Y[1:]
    rA, rP = _rdr(A), _rdr(P)
    dA = [_dth(A, i, ring.I) for i in range(k)]
    dP = [_dth(P, i, ring.I) for i in range(k)]
    rad: dict = {}
    _mul(A, rP, keep, rad)
    _mul(P, rA, keep, rad, -1)
    for i in range(k):
        _mul(B[i], dP[i], keep, rad)
        _mul(H[i], dA[i], keep, rad, -1)
    out = [_clean(rad, ring)]
    for j in range(k):
        th: dict = {}
        _mul(A, _rdr(H[j]), keep, th)
        _mul(P, _rdr(B[j]), keep, th, -1)
        for i in range(k):
            _mul(B[i], _dth(H[j], i, ring.I), keep, th)
            _mul(H[i], _dth(B[j], i, ring.I), keep, th, -1)
        out.append(_clean(th, ring))
    return out


def _add_fields(X: list, Y: list, ring: _Ring) -> list:
    out = []
    for a, b in zip(X, Y):
        d = dict(a)
        for k, v in b.items():
            d[k] = d[k] + v if k in d else v
        out.append(_clean(d, ring))
    return out


def exp_ad(Y: list, v: list, keep, ring: _Ring) -> list:
    """exp(ad_Y) v = v + [v,Y] + [[v,Y],Y]/2 + ... (terminates by truncation)."""
    result, term, n = v, v, 0
    while True:
        n += 1
        term = bracket_D(term, Y, keep, ring)
        if not any(term):
            return result
        inv = Fraction(1, n)
        term = [{k: c * inv if ring.exact else c / n for k, c in comp.items()} for comp in term]
        result = _add_fields(result, term, ring)


def _eigenvalue(mode, omega, ring: _Ring, tol: float):
    lam = sum((w * m for w, m in zip(omega, mode)), ring.conv(0) if ring.exact else 0.0)
    if ring.exact:
        lam = Surd(lam)
        if lam.is_zero():
            raise ResonanceError(f"resonant mode {mode}: <m, omega> = 0")
        return ring.I * lam
    if abs(lam) < tol:
        raise ResonanceError(f"near resonance for mode {mode}: |<m, omega>| = {abs(lam):.3g}")
    return ring.I * lam


def field_from_leaf(lvf: LeafVectorField, ring: _Ring) -> list:
    maps = to_complex(lvf).mode_maps()
    comps = [{k: ring.conv(v) for k, v in d.items()} for d in maps]
    zero_key = (0, (0,) * lvf.k, (0,) * lvf.n_params)
    for i, w in enumerate(lvf.omega_hat):
        comps[1 + i][zero_key] = comps[1 + i].get(zero_key, ring.conv(0)) + ring.conv(w)
    return [_clean(c, ring) for c in comps]


def normalize_field(v: list, omega, r_cap: int, mu_cap: int, ring: _Ring, tol=RESONANCE_TOL, log=None):
    """Remove every non-zero angular mode up to (r_cap, mu_cap)."""
    keep = lambda r, q: r <= r_cap and sum(q) <= mu_cap
    v = [{k: c for k, c in comp.items() if keep(k[0], k[2])} for comp in v]
    for d in range(1, r_cap + 1):
        for q in range(0, mu_cap + 1):
            Y = []
            for comp in v:
                y = {}
                for key, c in comp.items():
                    r, mode, mq = key
                    if r == d and sum(mq) == q and any(mode):
                        y[key] = -c / _eigenvalue(mode, omega, ring, tol)
                Y.append(y)
            if not any(Y):
                continue
            if log is not None:
                log.append((d, q, sum(len(y) for y in Y)))
            v = exp_ad(Y, v, keep, ring)
    return v


def _to_real(c, ring: _Ring, tol: float):
    if ring.exact:
        c = Surd(c)
        if not c.imag.is_zero():
            raise ArithmeticError(f"angle-free coefficient {c} is not real")
        return as_exact(c.real)
    if abs(c.imag) > 1e-9 * max(1.0, abs(c)):
        raise ArithmeticError(f"angle-free coefficient {c} is not real")
    return c.real


def first_level_nf(lvf: LeafVectorField, grade: int = 7, mu_degree: int = 2,
                   tol: float = RESONANCE_TOL) -> GradedLElement:
    """Angle-free first-level normal form through vector-field degree ``grade``
    (rho powers up to grade-1 in the coefficients) and mu-degree ``mu_degree``."""
    ring = _Ring(lvf.exact)
    r_cap = grade - 1
    mu_cap = mu_degree if lvf.n_params else 0
    omega = [ring.conv(w) for w in lvf.omega_hat]
    v = normalize_field(field_from_leaf(lvf, ring), omega, r_cap, mu_cap, ring, tol)
    zero_mode = (0,) * lvf.k
    zero_mu = (0,) * lvf.n_params
    euler: dict = {}
    theta = [{} for _ in range(lvf.k)]
    for ci, comp in enumerate(v):
        for (r, mode, q), c in comp.items():
            if mode != zero_mode:
                if ring.exact or abs(c) > 1e-9:
                    raise AssertionError(f"angular term survived normalization: {(r, mode, q)}")
                continue
            if ci > 0 and r == 0 and q == zero_mu:
                continue  # rotation constant omega
            val = _to_real(c, ring, tol)
            if r % 2:
                raise AssertionError("odd rho power in angle-free part")
            if ci == 0:
                euler[(r // 2, q)] = val
            else:
                theta[ci - 1][(r // 2, q)] = val
    return GradedLElement(lvf.k, euler, tuple(theta), tuple(lvf.omega_hat), lvf.params,
                          lvf.exact, rho_cap=r_cap, mu_cap=mu_cap)
