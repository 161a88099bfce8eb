"""Sparse truncated power series in (x_1, y_1, ..., x_n, y_n) with polynomial
dependence on unfolding parameters mu."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple

import numpy as np

DEFAULT_TRUNCATION = 7


class MultiIndex(NamedTuple):
    """Exponents of x^alpha y^beta mu^mu."""

    alpha: tuple
    beta: tuple
    mu: tuple = ()

    @property
    def degree(self) -> int:
        return sum(self.alpha) + sum(self.beta)

    @property
    def mu_degree(self) -> int:
        return sum(self.mu)

    def support(self) -> set:
        return {i for i, (a, b) in enumerate(zip(self.alpha, self.beta)) if a or b}


def _is_zero(c) -> bool:
    return c == 0


@dataclass(frozen=True)
class PolySeries:
    n: int
    terms: Mapping[MultiIndex, object] = field(default_factory=dict)
    truncation_degree: int = DEFAULT_TRUNCATION
    n_params: int = 0

    def __post_init__(self):
        clean = {}
        for mi, c in self.terms.items():
            mi = MultiIndex(tuple(mi[0]), tuple(mi[1]), tuple(mi[2]) if len(mi) > 2 else ())
            if len(mi.alpha) != self.n or len(mi.beta) != self.n:
                raise ValueError(f"multi-index {mi} does not match n={self.n}")
            if not mi.mu:
                mi = mi._replace(mu=(0,) * self.n_params)
            if len(mi.mu) != self.n_params:
                raise ValueError(f"mu exponent {mi.mu} does not match {self.n_params} params")
            if min(mi.alpha + mi.beta + mi.mu, default=0) < 0:
                raise ValueError("negative exponent")
            if mi.degree > self.truncation_degree or _is_zero(c):
                continue
            clean[mi] = clean.get(mi, 0) + c
        object.__setattr__(self, "terms", {k: v for k, v in clean.items() if not _is_zero(v)})

    # convenience ------------------------------------------------------------
    @classmethod
    def monomial(cls, n, alpha, beta, coeff=1, mu=None, n_params=0, truncation=DEFAULT_TRUNCATION):
        mu = tuple(mu) if mu is not None else (0,) * n_params
        return cls(n, {MultiIndex(tuple(alpha), tuple(beta), mu): coeff}, truncation, n_params)

    def zero_like(self) -> "PolySeries":
        return PolySeries(self.n, {}, self.truncation_degree, self.n_params)

    def __add__(self, other):
        return series_add(self, other)

    def __mul__(self, other):
        if isinstance(other, PolySeries):
            return series_mul(self, other)
        return PolySeries(self.n, {k: v * other for k, v in self.terms.items()},
                          self.truncation_degree, self.n_params)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return series_add(self, -other)

    def __len__(self):
        return len(self.terms)

    def has_constant_term(self) -> bool:
        return any(mi.degree == 0 and mi.mu_degree == 0 for mi in self.terms)

    def is_exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.terms.values())

    def substitute_mu(self, mu) -> "PolySeries":
        """Evaluate the parameter dependence at numeric mu, returning a series with no params."""
        mu = tuple(mu)
        if len(mu) != self.n_params:
            raise ValueError(f"expected {self.n_params} parameter values, got {len(mu)}")
        out: dict = {}
        for mi, c in self.terms.items():
            w = c
            for m, e in zip(mu, mi.mu):
                if e:
                    w = w * m ** e
            key = MultiIndex(mi.alpha, mi.beta, ())
            out[key] = out.get(key, 0) + w
        return PolySeries(self.n, out, self.truncation_degree, 0)

    def evaluate(self, x, mu=()) -> float:
        x = np.asarray(x, dtype=float)
        xs, ys = x[0::2], x[1::2]
        total = 0.0
        for mi, c in self.terms.items():
            v = float(c)
            for e, m in zip(mi.mu, mu):
                if e:
                    v *= float(m) ** e
            v *= float(np.prod(xs ** np.array(mi.alpha)) * np.prod(ys ** np.array(mi.beta)))
            total += v
        return total


def _check_compatible(a: PolySeries, b: PolySeries):
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    if a.n_params != b.n_params:
        raise ValueError(f"parameter count mismatch: {a.n_params} vs {b.n_params}")


def series_add(a: PolySeries, b: PolySeries) -> PolySeries:
    _check_compatible(a, b)
    trunc = min(a.truncation_degree, b.truncation_degree)
    out = dict(a.terms)
    for k, v in b.terms.items():
        out[k] = out.get(k, 0) + v
    return PolySeries(a.n, out, trunc, a.n_params)


def series_mul(a: PolySeries, b: PolySeries) -> PolySeries:
    _check_compatible(a, b)
    trunc = min(a.truncation_degree, b.truncation_degree)
    out: dict = {}
    for ka, va in a.terms.items():
        for kb, vb in b.terms.items():
            if ka.degree + kb.degree > trunc:
                continue
            key = MultiIndex(
                tuple(p + q for p, q in zip(ka.alpha, kb.alpha)),
                tuple(p + q for p, q in zip(ka.beta, kb.beta)),
                tuple(p + q for p, q in zip(ka.mu, kb.mu)),
            )
            out[key] = out.get(key, 0) + va * vb
    return PolySeries(a.n, out, trunc, a.n_params)
