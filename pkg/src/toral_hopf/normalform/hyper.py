"""Infinite-level (hypernormalized) parametric leaf normal form.

Works on the angle-free graded algebra.  With s the leaf case, the generators
available at each delta-grade are

    time rescaling  gamma mu^m rho^{2l} (multiplies the whole field, omega included)
    state Euler     alpha mu^m rho^{2l} E
    state rotation  beta  mu^m rho^{2l} Theta^i

and against the leading term a_s rho^{2s} E they remove Euler terms
mu^m rho^{2(s+l)} E and rotation terms mu^m rho^{2(s+l)} Theta^i (l >= 1).

Two elimination conventions are offered:

``time``   every Euler target is removed by time rescaling; rotation
           corrections of Theta^{sigma(1)} below rho^{2(s+1)} are absorbed into
           the sigma(1) rotation.  This reproduces the printed worked examples.
``state``  the time rescaling is spent on Theta^{sigma(1)} and Euler targets
           are removed by alpha wherever l != s.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..algebra.surd import Surd, as_exact
from ..errors import DegenerateError, InputError
from .graded import (ZERO_TOL, GradedLElement, TimeRescale, bracket, delta, euler_term,
                     is_zero, rescale_action, theta_term)

CONVENTIONS = ("time", "state")


@dataclass(frozen=True)
class NFResult:
    s: int
    element: GradedLElement
    grade: int
    removed_log: list = field(default_factory=list, compare=False)
    convention: str = "time"

    @property
    def exact_delta(self) -> int | None:
        """Outputs of delta-grade up to this value cannot see the input truncation."""
        cap = self.element.rho_cap
        return None if cap is None else min(self.grade, cap // 2)

    def is_trusted(self, j: int, m: tuple, kind: str = "E") -> bool:
        d = delta(kind, j, m, self.s)
        return self.exact_delta is None or d <= self.exact_delta

    def nu(self, j: int) -> dict:
        """mu-polynomial {m: coeff} multiplying rho^{2j} E."""
        return self.element.euler_poly(j)

    def radial_coefficients(self, mu) -> list:
        """[nu_0(mu), ..., nu_{s-1}(mu), a_s] as floats at numeric mu."""
        vals = self.element.evaluate_euler(mu)
        return [vals.get(j, 0.0) for j in range(self.s + 1)]

    def constraint_violations(self, tol: float = ZERO_TOL) -> list:
        return check_constraints(self, tol)


def _zero(v, tol) -> bool:
    if isinstance(v, float):
        return abs(v) <= tol
    return is_zero(v)


def detect_s(el: GradedLElement, tol: float = ZERO_TOL) -> int:
    """Smallest j with a_j(0, C) != 0."""
    z = el.zero_mu()
    js = sorted(j for (j, m), v in el.euler_terms.items() if m == z and not _zero(v, tol))
    if not js:
        raise DegenerateError("all a_j(0, C) vanish up to truncation: degenerate beyond truncation")
    return js[0]


def _truncate(v: GradedLElement, keep) -> GradedLElement:
    e = {k: c for k, c in v.euler_terms.items() if keep("E", *k)}
    th = [{k: c for k, c in d.items() if keep("T", *k)} for d in v.theta_terms]
    return v.with_terms(e, th)


def _exp_ad(v: GradedLElement, Y: GradedLElement, keep) -> GradedLElement:
    """exp(ad_Y) v = v + [v, Y] + [[v, Y], Y]/2 + ..."""
    out, term, n = v, v, 0
    while True:
        n += 1
        term = bracket(term, Y, keep)
        if not term.euler_terms and not any(term.theta_terms):
            return out
        term = term.scale(as_exact(Surd(1) / n) if v.exact else 1.0 / n)
        out = out + term


def _rescale(v: GradedLElement, l: int, gamma, m: tuple, keep) -> GradedLElement:
    """(1 + gamma mu^m rho^{2l}) v."""
    return v + rescale_action(TimeRescale(l, gamma, m), v, keep, include_omega=True)


def _div(a, b):
    q = Surd(a) / Surd(b) if isinstance(a, Surd) or isinstance(b, Surd) else a / b
    return as_exact(q) if isinstance(q, Surd) else q


def infinite_level_pnf(el: GradedLElement, grade: int, convention: str = "time",
                       tol: float = ZERO_TOL) -> NFResult:
    if convention not in CONVENTIONS:
        raise InputError(f"unknown convention {convention!r}; choose from {CONVENTIONS}")
    s = detect_s(el, tol)
    if grade < s + 1:
        raise InputError(f"grade {grade} < s+1 = {s + 1}: nothing to eliminate")
    z = el.zero_mu()
    a_s = el.a(s)
    mu_cap = el.mu_cap

    def keep(kind, j, m):
        m = m or z
        if delta(kind, j, m, s) > grade:
            return False
        if mu_cap is not None and sum(m) > mu_cap:
            return False
        return el.rho_cap is None or 2 * j <= el.rho_cap

    v = _truncate(el, keep)
    log: list = []
    w1 = el.omega_hat[0] if el.omega_hat else 1
    for g in range(1, grade + 1):
        # Euler stage (time rescaling and alpha), then rotation stage (beta)
        pairs = set()
        for (J, m) in v.euler_terms:
            if J >= s and (J, m) != (s, z) and delta("E", J, m, s) == g:
                pairs.add((J - s, m))
        if convention == "state":
            for (l, m) in v.theta_terms[0]:
                if l <= s and (l, m) != (0, z) and delta("T", l, m, s) == g:
                    pairs.add((l, m))
        for (l, m) in sorted(pairs):
            e = v.euler_terms.get((s + l, m), 0)
            if convention == "time" or l == s:
                if not _zero(e, tol):
                    gam = -_div(e, a_s)
                    v = _rescale(v, l, gam, m, keep)
                    log.append(("gamma", l, m, gam, ("E", s + l, m)))
                continue
            t1 = v.theta_terms[0].get((l, m), 0)
            if l < s and not _zero(t1, tol):
                gam = -_div(t1, w1)
                v = _rescale(v, l, gam, m, keep)
                log.append(("gamma", l, m, gam, ("Theta1", l, m)))
            e = v.euler_terms.get((s + l, m), 0)
            if not _zero(e, tol):
                alpha = -_div(e, 2 * (s - l) * a_s)
                Y = euler_term(el.k, l, alpha, m, omega_hat=el.omega_hat, params=el.params, exact=el.exact)
                v = _exp_ad(v, Y, keep)
                log.append(("alpha", l, m, alpha, ("E", s + l, m)))
        for i in range(el.k):
            targets = sorted(k for k in v.theta_terms[i] if delta("T", k[0], k[1], s) == g)
            for (j, m) in targets:
                t = v.theta_terms[i].get((j, m), 0)
                if _zero(t, tol):
                    continue
                if j >= s + 1:
                    beta = _div(t, 2 * (j - s) * a_s)
                    Y = theta_term(el.k, i + 1, j - s, beta, m, omega_hat=el.omega_hat,
                                   params=el.params, exact=el.exact)
                    v = _exp_ad(v, Y, keep)
                    log.append(("beta", i + 1, j - s, m, beta, ("Theta", i + 1, j, m)))
                elif i == 0 and (convention == "time" or j < s):
                    # rotation correction absorbed into the sigma(1) rotation
                    th = [dict(d) for d in v.theta_terms]
                    th[0].pop((j, m))
                    v = v.with_terms(v.euler_terms, th)
                    log.append(("absorbed", 1, j, m, t, ("Theta", 1, j, m)))
    v = GradedLElement(v.k, v.euler_terms, v.theta_terms, v.omega_hat, v.params, v.exact,
                       v.rho_cap, v.mu_cap)
    return NFResult(s, v, grade, log, convention)


def check_constraints(res: NFResult, tol: float = ZERO_TOL) -> list:
    """Term-by-term violations of the infinite-level shape; empty when clean."""
    el, s = res.element, res.s
    z = el.zero_mu()
    bad = []
    for (j, m), c in el.euler_terms.items():
        if _zero(c, tol):
            continue
        if j < s and m == z:
            bad.append(("a_j(0,C) != 0 below s", j, m, c))
        elif j > s or (j == s and m != z):
            bad.append(("Euler term beyond rho^{2s}", j, m, c))
    for i, d in enumerate(el.theta_terms, start=1):
        for (j, m), c in d.items():
            if _zero(c, tol):
                continue
            if j == 0 and m == z:
                bad.append(("b^i_0(0,C) != 0", i, j, m, c))
            elif i == 1 and not (res.convention == "state" and j == s):
                bad.append(("b^1_j != 0", i, j, m, c))
            elif j >= s + 1:
                bad.append(("rotation term beyond rho^{2s}", i, j, m, c))
    if _zero(el.a(s), tol):
        bad.append(("a_s(0,C) vanished", s))
    return bad
