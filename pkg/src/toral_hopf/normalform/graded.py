"""Angle-free graded Lie algebra spanned by mu^m rho^{2j} E and mu^m rho^{2j} Theta^i.

E is the leaf Euler field rho d/drho and Theta^i the rotation d/dtheta_i.
Coefficient maps are keyed (j, m) with j the half rho-power and m the mu
exponent tuple.  Brackets follow

    [rho^{2a} E, rho^{2n} E]     = 2(a - n) rho^{2(a+n)} E
    [rho^{2a} E, rho^{2l} Theta] = -2 l rho^{2(a+l)} Theta
    [Theta, Theta]               = 0
"""
from __future__ import annotations

from dataclasses import dataclass

from ..algebra.surd import Surd, as_exact

ZERO_TOL = 1e-12


def is_zero(v, tol: float = 0.0) -> bool:
    if isinstance(v, Surd):
        return v.is_zero()
    if isinstance(v, float):
        return abs(v) <= tol
    return v == 0


def _add(d: dict, key, val):
    w = d.get(key, 0) + val
    if is_zero(w):
        d.pop(key, None)
    else:
        d[key] = as_exact(w) if isinstance(w, Surd) else w


def _madd(m1: tuple, m2: tuple) -> tuple:
    if not m1:
        return m2
    if not m2:
        return m1
    return tuple(a + b for a, b in zip(m1, m2))


@dataclass(frozen=True)
class GradedLElement:
    """sum a_{j,m} mu^m rho^{2j} E + sum_i b^i_{j,m} mu^m rho^{2j} Theta^i (rotation
    constants omega_hat kept separately)."""

    k: int
    euler_terms: dict
    theta_terms: tuple
    omega_hat: tuple = ()
    params: tuple = ()
    exact: bool = True
    rho_cap: int | None = None  # largest trustworthy 2j, None = unbounded
    mu_cap: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "euler_terms", {k: v for k, v in self.euler_terms.items() if not is_zero(v)})
        tt = tuple({k: v for k, v in d.items() if not is_zero(v)} for d in self.theta_terms)
        if len(tt) != self.k:
            raise ValueError("theta_terms must have k components")
        object.__setattr__(self, "theta_terms", tt)

    @property
    def n_params(self) -> int:
        return len(self.params)

    def zero_mu(self) -> tuple:
        return (0,) * self.n_params

    def a(self, j: int, m: tuple | None = None):
        return self.euler_terms.get((j, m if m is not None else self.zero_mu()), 0)

    def b(self, i: int, j: int, m: tuple | None = None):
        """Rotation coefficient of Theta^{sigma(i)} (1-based i)."""
        return self.theta_terms[i - 1].get((j, m if m is not None else self.zero_mu()), 0)

    def euler_poly(self, j: int) -> dict:
        """mu-polynomial coefficient of rho^{2j} E as {m: value}."""
        return {m: v for (jj, m), v in self.euler_terms.items() if jj == j}

    def evaluate_euler(self, mu) -> dict:
        """{j: float value of a_j(mu)} at numeric mu."""
        out: dict = {}
        for (j, m), v in self.euler_terms.items():
            w = float(v)
            for e, x in zip(m, mu):
                if e:
                    w *= float(x) ** e
            out[j] = out.get(j, 0.0) + w
        return out

    def is_equal(self, other: "GradedLElement") -> bool:
        return (self.euler_terms == other.euler_terms and self.theta_terms == other.theta_terms)

    def with_terms(self, euler: dict, theta) -> "GradedLElement":
        return GradedLElement(self.k, euler, tuple(theta), self.omega_hat, self.params,
                              self.exact, self.rho_cap, self.mu_cap)

    def __add__(self, other: "GradedLElement") -> "GradedLElement":
        e = dict(self.euler_terms)
        for key, v in other.euler_terms.items():
            _add(e, key, v)
        th = [dict(d) for d in self.theta_terms]
        for i, d in enumerate(other.theta_terms):
            for key, v in d.items():
                _add(th[i], key, v)
        return self.with_terms(e, th)

    def scale(self, c) -> "GradedLElement":
        return self.with_terms({k: v * c for k, v in self.euler_terms.items()},
                               [{k: v * c for k, v in d.items()} for d in self.theta_terms])

    def table(self) -> list[tuple]:
        """Rows (kind, i, j, mu, value) in deterministic order."""
        rows = [("E", 0, j, m, v) for (j, m), v in sorted(self.euler_terms.items())]
        for i, d in enumerate(self.theta_terms, start=1):
            rows += [("Theta", i, j, m, v) for (j, m), v in sorted(d.items())]
        return rows


def euler_term(k: int, j: int, coeff=1, m: tuple = (), **kw) -> GradedLElement:
    return GradedLElement(k, {(j, tuple(m)): coeff}, tuple({} for _ in range(k)), **kw)


def theta_term(k: int, i: int, j: int, coeff=1, m: tuple = (), **kw) -> GradedLElement:
    th = [{} for _ in range(k)]
    th[i - 1][(j, tuple(m))] = coeff
    return GradedLElement(k, {}, tuple(th), **kw)


def bracket(u: GradedLElement, v: GradedLElement, keep=None) -> GradedLElement:
    """Bilinear extension of the structure constants; keep(kind, j, m) filters output."""
    if u.k != v.k:
        raise ValueError("bracket of elements over different leaves")
    e: dict = {}
    th = [{} for _ in range(u.k)]
    ok = keep or (lambda kind, j, m: True)
    for (a, ma), ca in u.euler_terms.items():
        for (n, mv), cv in v.euler_terms.items():
            if a != n and ok("E", a + n, _madd(ma, mv)):
                _add(e, (a + n, _madd(ma, mv)), 2 * (a - n) * ca * cv)
        for i, d in enumerate(v.theta_terms):
            for (l, mv), cv in d.items():
                if l and ok("T", a + l, _madd(ma, mv)):
                    _add(th[i], (a + l, _madd(ma, mv)), -2 * l * ca * cv)
    for i, d in enumerate(u.theta_terms):
        for (b, mb), cb in d.items():
            if not b:
                continue
            for (n, mv), cv in v.euler_terms.items():
                if ok("T", b + n, _madd(mb, mv)):
                    _add(th[i], (b + n, _madd(mb, mv)), 2 * b * cb * cv)
    return u.with_terms(e, th)


@dataclass(frozen=True)
class TimeRescale:
    """Monomial coeff * mu^m Z_j of the time-rescaling ring."""

    j: int
    coeff: object = 1
    m: tuple = ()


def rescale_action(Z: TimeRescale, v: GradedLElement, keep=None, include_omega: bool = False) -> GradedLElement:
    """Z_j mu^m acting on v: every rho^{2n} term moves to rho^{2(n+j)}.

    With include_omega the rotation constants omega_i Theta^i are multiplied too.
    """
    ok = keep or (lambda kind, j, m: True)
    e: dict = {}
    for (n, m), c in v.euler_terms.items():
        key = (n + Z.j, _madd(m, Z.m))
        if ok("E", *key):
            _add(e, key, c * Z.coeff)
    th = [{} for _ in range(v.k)]
    for i, d in enumerate(v.theta_terms):
        for (n, m), c in d.items():
            key = (n + Z.j, _madd(m, Z.m))
            if ok("T", *key):
                _add(th[i], key, c * Z.coeff)
        if include_omega and v.omega_hat:
            key = (Z.j, Z.m or v.zero_mu())
            if ok("T", *key):
                _add(th[i], key, v.omega_hat[i] * Z.coeff)
    return v.with_terms(e, th)


def delta(kind: str, j: int, m: tuple, s: int) -> int:
    """Grading: delta(mu^m rho^{2j} E) = |m|(s+1)+j, Theta terms shifted by s."""
    base = sum(m) * (s + 1) + j
    return base if kind == "E" else base + s
