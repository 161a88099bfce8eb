"""Leaf bifurcations of the amplitude equation

    d rho / dt = rho (nu_0 + nu_1 rho^2 + ... + nu_{s-1} rho^{2(s-1)} + a_s rho^{2s}),  s = 1, 2, 3.

Invariant tori correspond to positive roots R = rho^2 of the polynomial
P(R) = nu_0 + nu_1 R + ... + a_s R^s.  A torus at a simple root is stable iff
P'(R) < 0.  For s = 3 the positive roots are counted from Hurwitz determinants
of the monic cubic with sign rules for the singular cases, and an independent
float Cardano oracle is provided for cross-checking.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from .algebra.surd import Surd
from .errors import InputError
from .leaf import LeafSpec

VARIETY_TOL = 1e-10
ORACLE_MIN_ROOT = 1e-10
ORACLE_MIN_SEP = 1e-8


def _num(x):
    """Keep rationals exact, everything else as float."""
    if isinstance(x, bool):
        raise InputError("boolean is not a scalar")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, Surd) and x.is_rational():
        return x.to_fraction()
    return float(x)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _var(seq) -> int:
    """Number of sign changes in a sequence of non-zero signs."""
    s = [_sign(v) for v in seq]
    return sum(1 for a, b in zip(s, s[1:]) if a * b < 0)


@dataclass(frozen=True)
class AmplitudeODE:
    s: int
    nu: tuple
    a_s: object

    def __post_init__(self):
        if self.s not in (1, 2, 3):
            raise InputError("leaf case s must be 1, 2 or 3")
        if len(self.nu) != self.s:
            raise InputError(f"s = {self.s} needs {self.s} unfolding parameters")
        if self.a_s == 0:
            raise InputError("leading coefficient a_s must be non-zero")

    @property
    def coefficients(self) -> tuple:
        """(nu_0, ..., nu_{s-1}, a_s), the coefficients of P(R) in increasing degree."""
        return tuple(self.nu) + (self.a_s,)

    def P(self, R):
        return sum(c * R ** i for i, c in enumerate(self.coefficients))

    def dP(self, R):
        return sum(i * c * R ** (i - 1) for i, c in enumerate(self.coefficients) if i)

    def rhs(self, rho):
        return rho * self.P(rho * rho)

    def drhs(self, rho):
        """d/d rho of the right-hand side."""
        R = rho * rho
        return self.P(R) + 2 * R * self.dP(R)


@dataclass(frozen=True)
class RootReport:
    n_positive: int
    roots_R: tuple
    method: str
    discriminant_D: object = None
    multiplicities: tuple = ()
    signs: tuple = ()

    def to_dict(self) -> dict:
        return {"n_positive": self.n_positive, "roots_R": [float(r) for r in self.roots_R],
                "method": self.method, "D": None if self.discriminant_D is None else float(self.discriminant_D),
                "multiplicities": list(self.multiplicities)}


@dataclass(frozen=True)
class VarietyFlag:
    name: str
    on_variety: bool
    signed_distance: float


@dataclass(frozen=True)
class TorusInfo:
    R: float
    radius_vector: tuple
    stable: bool | None  # None at a degenerate (multiple) root

    def to_dict(self) -> dict:
        return {"R": float(self.R), "radius_vector": [float(r) for r in self.radius_vector],
                "stable": self.stable}


@dataclass(frozen=True)
class LeafBifReport:
    s: int
    ode: AmplitudeODE
    varieties: tuple
    tori: tuple
    origin_stable: bool | None
    roots: RootReport | None = None

    def on(self, name: str) -> bool:
        return any(v.name == name and v.on_variety for v in self.varieties)

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "nu": [float(v) for v in self.ode.nu],
            "a_s": float(self.ode.a_s),
            "origin_stable": self.origin_stable,
            "varieties": [{"name": v.name, "on_variety": v.on_variety,
                           "signed_distance": float(v.signed_distance)} for v in self.varieties],
            "tori": [t.to_dict() for t in self.tori],
        }


# ---------------------------------------------------------------- cubic roots

def cubic_invariants(nu0, nu1, nu2, a3) -> dict:
    """Monic coefficients, depressed form and Hurwitz determinants of
    R^3 + (nu2/a3) R^2 + (nu1/a3) R + nu0/a3."""
    nu0, nu1, nu2, a3 = map(_num, (nu0, nu1, nu2, a3))
    if a3 == 0:
        raise InputError("a3 must be non-zero")
    b, c, d = nu2 / a3, nu1 / a3, nu0 / a3
    p = c - b * b / 3
    q = 2 * b ** 3 / 27 - b * c / 3 + d
    D = (p / 3) ** 3 + (q / 2) ** 2
    d1 = b
    d2 = b * c - d
    d3 = d * d2
    return {"b": b, "c": c, "d": d, "p": p, "q": q, "D": D, "Delta1": d1, "Delta2": d2, "Delta3": d3}


def _distinct_positive(vals, tol=0.0) -> list:
    out = []
    for v in sorted(v for v in vals if v > tol):
        if not out or v - out[-1] > tol:
            out.append(v)
    return out


def _quadratic_positive(b, c) -> int:
    """Distinct positive roots of R^2 + b R + c."""
    disc = b * b - 4 * c
    if disc < 0:
        return 0
    if disc == 0:
        return 1 if -b > 0 else 0
    if c < 0:
        return 1
    if c == 0:
        return 1 if -b > 0 else 0
    return 2 if -b > 0 else 0


def _float_cubic_roots(b: float, c: float, d: float) -> list:
    """Real roots of the monic cubic (Cardano, trigonometric form for three real roots)."""
    p = c - b * b / 3
    q = 2 * b ** 3 / 27 - b * c / 3 + d
    D = (p / 3) ** 3 + (q / 2) ** 2
    shift = -b / 3
    if D > 0:
        sd = math.sqrt(D)
        r = np.cbrt(-q / 2 + sd) + np.cbrt(-q / 2 - sd)
        return [float(r) + shift]
    if p == 0:
        return [shift] * 3
    m = 2 * math.sqrt(-p / 3)
    arg = max(-1.0, min(1.0, 3 * q / (p * m)))
    phi = math.acos(arg) / 3
    return sorted(m * math.cos(phi - 2 * math.pi * j / 3) + shift for j in range(3))


def count_positive_roots_rh(nu0, nu1, nu2, a3) -> RootReport:
    """Routh-Hurwitz sign-variation count of positive roots of the s = 3 cubic."""
    inv = cubic_invariants(nu0, nu1, nu2, a3)
    b, c, d, p, q, D = (inv[k] for k in "bcdpqD")
    d1, d2 = inv["Delta1"], inv["Delta2"]
    signs: tuple = ()
    if d == 0:
        n = _quadratic_positive(b, c)
        method = "hurwitz:nu0=0"
    elif d2 == 0:
        # (R + b)(R^2 + c)
        cand = []
        if -b > 0:
            cand.append(-b)
        if c < 0:
            cand.append(math.sqrt(-float(c)) if not isinstance(c, Fraction) else _sqrt_exact(-c))
        n = len(set(cand))
        method = "hurwitz:Delta2=0"
    else:
        if d1 == 0:
            signs = (1, 1, _sign(-d), _sign(d))
            method = "hurwitz:Delta1=0"
        else:
            signs = (1, _sign(d1), _sign(d2) * _sign(d1), _sign(d))
            method = "hurwitz"
        n_rhp = _var(signs)
        if D > 0:
            n = n_rhp % 2
        elif D < 0:
            n = n_rhp
        else:
            n = None
    if d != 0 and d2 != 0 and D == 0:
        if p == 0:
            roots = [-b / 3]
        else:
            roots = [3 * q / p - b / 3, -3 * q / (2 * p) - b / 3]
        n = len(_distinct_positive(roots))
        method += ":D=0"
    roots, mult = _report_roots(b, c, d, D, p, q, n)
    return RootReport(n, roots, method, D, mult, signs)


def _sqrt_exact(x: Fraction):
    s = Surd.sqrt(x)
    return s.to_fraction() if s.is_rational() else float(s)


def _report_roots(b, c, d, D, p, q, n) -> tuple:
    """Positive roots (exact where possible) consistent with the count n."""
    if D == 0 and isinstance(D, Fraction):
        if p == 0:
            cand = {-b / 3: 3}
        else:
            cand = {3 * q / p - b / 3: 1, -3 * q / (2 * p) - b / 3: 2}
        pos = sorted((r, m) for r, m in cand.items() if r > 0)
        return tuple(r for r, _ in pos), tuple(m for _, m in pos)
    real = _float_cubic_roots(float(b), float(c), float(d))
    pos = _distinct_positive(real, ORACLE_MIN_ROOT)
    if n is not None and len(pos) != n:
        pos = sorted(pos, reverse=True)[:n] if len(pos) > n else pos
        pos = sorted(pos)
    mult = tuple(sum(1 for r in real if abs(r - x) <= ORACLE_MIN_SEP) for x in pos)
    return tuple(pos), mult


def count_positive_roots_oracle(nu0, nu1, nu2, a3) -> RootReport:
    """Brute-force count: float Cardano roots, distinct and positive."""
    b, c, d = (float(nu2) / float(a3), float(nu1) / float(a3), float(nu0) / float(a3))
    real = _float_cubic_roots(b, c, d)
    pos = []
    for r in sorted(real):
        if r > ORACLE_MIN_ROOT and (not pos or r - pos[-1] > ORACLE_MIN_SEP):
            pos.append(r)
    p = c - b * b / 3
    q = 2 * b ** 3 / 27 - b * c / 3 + d
    D = (p / 3) ** 3 + (q / 2) ** 2
    mult = tuple(sum(1 for r in real if abs(r - x) <= ORACLE_MIN_SEP) for x in pos)
    return RootReport(len(pos), tuple(pos), "oracle", D, mult)


def count_positive_roots_oracle_batch(nu0, nu1, nu2, a3) -> np.ndarray:
    """Vectorized oracle count over arrays of parameters."""
    a3 = np.asarray(a3, dtype=float)
    b = np.asarray(nu2, dtype=float) / a3
    c = np.asarray(nu1, dtype=float) / a3
    d = np.asarray(nu0, dtype=float) / a3
    p = c - b * b / 3
    q = 2 * b ** 3 / 27 - b * c / 3 + d
    D = (p / 3) ** 3 + (q / 2) ** 2
    shift = -b / 3
    with np.errstate(invalid="ignore", divide="ignore"):
        sd = np.sqrt(np.where(D > 0, D, 0.0))
        one = np.cbrt(-q / 2 + sd) + np.cbrt(-q / 2 - sd) + shift
        m = 2 * np.sqrt(np.where(p < 0, -p / 3, 0.0))
        arg = np.clip(np.where(m > 0, 3 * q / (p * np.where(m > 0, m, 1.0)), 1.0), -1.0, 1.0)
        phi = np.arccos(arg) / 3
        three = np.stack([m * np.cos(phi - 2 * np.pi * j / 3) + shift for j in range(3)], axis=-1)
    three = np.sort(three, axis=-1)
    ok = three > ORACLE_MIN_ROOT
    gap = np.diff(three, axis=-1) > ORACLE_MIN_SEP
    cnt3 = ok[..., 0].astype(int)
    for i in (1, 2):
        cnt3 += (ok[..., i] & (~ok[..., i - 1] | gap[..., i - 1])).astype(int)
    cnt1 = (one > ORACLE_MIN_ROOT).astype(int)
    return np.where(D > 0, cnt1, cnt3)


def count_positive_roots_rh_batch(nu0, nu1, nu2, a3) -> np.ndarray:
    """Vectorized Hurwitz count for generic float samples (no singular cases)."""
    a3 = np.asarray(a3, dtype=float)
    b = np.asarray(nu2, dtype=float) / a3
    c = np.asarray(nu1, dtype=float) / a3
    d = np.asarray(nu0, dtype=float) / a3
    p = c - b * b / 3
    q = 2 * b ** 3 / 27 - b * c / 3 + d
    D = (p / 3) ** 3 + (q / 2) ** 2
    s1, s2, s3 = np.sign(b), np.sign(b * c - d) * np.sign(b), np.sign(d)
    n = (s1 < 0).astype(int) + (s1 * s2 < 0) + (s2 * s3 < 0)
    return np.where(D > 0, n % 2, n)


# ---------------------------------------------------------------- tori

def torus_radii(roots_R: Sequence, leaf: LeafSpec) -> list:
    """Pair-radius n-vectors sqrt(R) c_i / c_ref on the support, zero elsewhere."""
    out = []
    for R in roots_R:
        r = math.sqrt(float(R))
        vec = [0.0] * leaf.n
        for i in leaf.sigma.selected:
            vec[i - 1] = r * float(leaf.ratio(i))
        out.append(tuple(vec))
    return out


def _positive_roots(ode: AmplitudeODE) -> RootReport:
    coeffs = ode.coefficients
    if ode.s == 1:
        R = -coeffs[0] / coeffs[1]
        roots = (R,) if R > 0 else ()
        return RootReport(len(roots), roots, "linear", None, (1,) * len(roots))
    if ode.s == 2:
        nu0, nu1, a2 = coeffs
        disc = nu1 * nu1 - 4 * a2 * nu0
        if disc < 0:
            return RootReport(0, (), "quadratic", disc)
        if disc == 0:
            R = -nu1 / (2 * a2)
            roots = (R,) if R > 0 else ()
            return RootReport(len(roots), roots, "quadratic", disc, (2,) * len(roots))
        sq = _sqrt_exact(disc) if isinstance(disc, Fraction) else math.sqrt(disc)
        cand = [(-nu1 - sq) / (2 * a2), (-nu1 + sq) / (2 * a2)]
        roots = tuple(sorted(r for r in cand if r > 0))
        return RootReport(len(roots), roots, "quadratic", disc, (1,) * len(roots))
    return count_positive_roots_rh(*coeffs)


def _origin_stable(ode: AmplitudeODE):
    for c in ode.coefficients:
        if abs(float(c)) > VARIETY_TOL:
            return bool(c < 0)
    return None


def _tori(ode: AmplitudeODE, report: RootReport, leaf: LeafSpec | None) -> tuple:
    out = []
    mults = report.multiplicities or (1,) * len(report.roots_R)
    for R, mult in zip(report.roots_R, mults):
        slope = ode.dP(R)
        stable = None if mult > 1 or abs(float(slope)) <= VARIETY_TOL else bool(slope < 0)
        vec = torus_radii([R], leaf)[0] if leaf is not None else (math.sqrt(float(R)),)
        out.append(TorusInfo(R, vec, stable))
    return tuple(out)


def _flag(name, value, side: bool, tol=VARIETY_TOL) -> VarietyFlag:
    return VarietyFlag(name, bool(abs(float(value)) <= tol and side), float(value))


def analyze_s1(nu0, a1, leaf: LeafSpec | None = None) -> LeafBifReport:
    nu0, a1 = _num(nu0), _num(a1)
    if a1 == 0:
        raise InputError("a1 = 0: not the s = 1 case")
    ode = AmplitudeODE(1, (nu0,), a1)
    rep = _positive_roots(ode)
    varieties = (_flag("T_Pch", nu0, True),)
    return LeafBifReport(1, ode, varieties, _tori(ode, rep, leaf), _origin_stable(ode), rep)


def analyze_s2(nu0, nu1, a2, leaf: LeafSpec | None = None) -> LeafBifReport:
    nu0, nu1, a2 = map(_num, (nu0, nu1, a2))
    if a2 == 0:
        raise InputError("a2 = 0: not the s = 2 case")
    ode = AmplitudeODE(2, (nu0, nu1), a2)
    rep = _positive_roots(ode)
    sd = (nu1 / (2 * a2)) ** 2 - nu0 / a2
    varieties = (
        _flag("T_SupP", nu0, nu1 < 0),
        _flag("T_SubP", nu0, nu1 > 0),
        _flag("T_2SD", sd, a2 * nu1 < 0),
    )
    return LeafBifReport(2, ode, varieties, _tori(ode, rep, leaf), _origin_stable(ode), rep)


def analyze_s3(nu0, nu1, nu2, a3, leaf: LeafSpec | None = None) -> LeafBifReport:
    nu0, nu1, nu2, a3 = map(_num, (nu0, nu1, nu2, a3))
    if a3 == 0:
        raise InputError("a3 = 0: not the s = 3 case")
    ode = AmplitudeODE(3, (nu0, nu1, nu2), a3)
    rep = count_positive_roots_rh(nu0, nu1, nu2, a3)
    inv = cubic_invariants(nu0, nu1, nu2, a3)
    n1_zero = abs(float(nu1)) <= VARIETY_TOL
    sup = (nu1 < 0 and not n1_zero) or (n1_zero and nu2 < 0)
    sub = (nu1 > 0 and not n1_zero) or (n1_zero and nu2 > 0)
    b, c, d = inv["b"], inv["c"], inv["d"]
    sn_side = (b < 0 and c > 0) or (d > 0 and c <= 0)
    varieties = (
        _flag("T_Psup", nu0, sup),
        _flag("T_Psub", nu0, sub),
        _flag("T_2SN", inv["D"], sn_side),
    )
    return LeafBifReport(3, ode, varieties, _tori(ode, rep, leaf), _origin_stable(ode), rep)


def analyze(nu: Sequence, a_s, leaf: LeafSpec | None = None) -> LeafBifReport:
    """Dispatch on s = len(nu)."""
    s = len(nu)
    if s == 1:
        return analyze_s1(nu[0], a_s, leaf)
    if s == 2:
        return analyze_s2(nu[0], nu[1], a_s, leaf)
    if s == 3:
        return analyze_s3(nu[0], nu[1], nu[2], a_s, leaf)
    raise InputError(f"leaf case s = {s} is not supported (1, 2 or 3)")
