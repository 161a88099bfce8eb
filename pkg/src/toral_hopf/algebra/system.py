"""The Eulerian system model: Theta + g E_0 + sum_i f_i Theta^i_0, plus file I/O."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import InputError
from .series import DEFAULT_TRUNCATION, MultiIndex, PolySeries
from .surd import Surd

SCHEMA_VERSION = 1
RESONANCE_BOUND = 8
RESONANCE_TOL = 1e-12


def parse_scalar(v):
    """JSON value -> Fraction (ints, 'p/q' or decimal strings) or float (JSON floats)."""
    if isinstance(v, bool):
        raise InputError(f"boolean is not a coefficient: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse coefficient {v!r}") from exc
    raise InputError(f"cannot parse coefficient {v!r}")


def format_scalar(v) -> str | float:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Surd):
        return str(v)
    return float(v)


def parse_omega(v):
    if isinstance(v, str) and v.startswith("sqrt:"):
        try:
            return Surd.sqrt(int(v[5:]))
        except ValueError as exc:
            raise InputError(f"bad frequency token {v!r}") from exc
    val = parse_scalar(v)
    return Surd(val) if isinstance(val, Fraction) else float(val)


def format_omega(w):
    if isinstance(w, Surd):
        t = w.terms()
        if len(t) == 1:
            (k, c), = t.items()
            if -1 not in k:
                rad = math.prod(k) if k else 1
                sq = c * c * rad
                if c > 0 and sq.denominator == 1 and k:
                    return f"sqrt:{sq.numerator}"
        if w.is_rational():
            return str(w.to_fraction())
        raise InputError(f"frequency {w} is not expressible as sqrt:<int>")
    return float(w)


def omega_float(w) -> float:
    return float(w)


@dataclass(frozen=True)
class ResonanceReport:
    resonant: bool
    relation: tuple | None
    bound: int
    tol: float


def check_nonresonance(omega: Sequence, bound: int = RESONANCE_BOUND, tol: float = RESONANCE_TOL) -> ResonanceReport:
    """Search for an integer relation sum m_i omega_i = 0 with 0 < max|m_i| <= bound."""
    w = np.array([float(x) for x in omega])
    n = len(w)
    if n == 0:
        return ResonanceReport(False, None, bound, tol)
    rng = np.arange(-bound, bound + 1)
    # meet in the middle over a split of the index set keeps memory modest
    h = n // 2
    left = np.array(list(itertools.product(rng, repeat=h)), dtype=np.int64).reshape(-1, h)
    right = np.array(list(itertools.product(rng, repeat=n - h)), dtype=np.int64).reshape(-1, n - h)
    lv = left @ w[:h] if h else np.zeros(1)
    rv = right @ w[h:]
    order = np.argsort(rv)
    rs = rv[order]
    for i, val in enumerate(lv):
        lo = np.searchsorted(rs, -val - tol, side="left")
        hi = np.searchsorted(rs, -val + tol, side="right")
        for j in order[lo:hi]:
            m = tuple(int(t) for t in (left[i] if h else ())) + tuple(int(t) for t in right[j])
            if any(m):
                return ResonanceReport(True, m, bound, tol)
    return ResonanceReport(False, None, bound, tol)


@dataclass(frozen=True)
class EulerianSystem:
    n: int
    omega: tuple
    g: PolySeries
    f: tuple
    params: tuple = ()
    truncation_degree: int = DEFAULT_TRUNCATION
    resonance: ResonanceReport | None = field(default=None, compare=False)
    # set by substitute_mu: a numeric mu may legitimately shift the origin rates
    mu_substituted: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise InputError("n must be >= 1")
        if len(self.omega) != self.n:
            raise InputError(f"omega has {len(self.omega)} entries, expected {self.n}")
        if any(float(w) == 0 for w in self.omega):
            raise InputError("frequencies must be nonzero")
        if len(self.f) != self.n:
            raise InputError(f"f has {len(self.f)} components, expected {self.n}")
        for s in (self.g, *self.f):
            if s.n != self.n or s.n_params != len(self.params):
                raise InputError("series dimensions do not match the system")
            if s.has_constant_term() and not self.mu_substituted:
                raise InputError("g and f_i must vanish at the origin for mu = 0")
        if self.resonance is None:
            object.__setattr__(self, "resonance", check_nonresonance(self.omega))

    @property
    def n_params(self) -> int:
        return len(self.params)

    def is_exact(self) -> bool:
        ok_w = all(isinstance(w, Surd) for w in self.omega)
        return ok_w and self.g.is_exact() and all(fi.is_exact() for fi in self.f)

    def substitute_mu(self, mu) -> "EulerianSystem":
        return EulerianSystem(self.n, self.omega, self.g.substitute_mu(mu),
                              tuple(fi.substitute_mu(mu) for fi in self.f), (),
                              self.truncation_degree, self.resonance, True)


def evaluate_field(sys: EulerianSystem, x, mu=()) -> np.ndarray:
    """Theta(x) + g(x) E_0(x) + sum f_i(x) Theta^i_0(x) at a single state."""
    x = np.asarray(x, dtype=float)
    if x.shape != (2 * sys.n,):
        raise InputError(f"state must have length {2 * sys.n}")
    if len(mu) != sys.n_params:
        raise InputError(f"mu must have length {sys.n_params}")
    gval = sys.g.evaluate(x, mu)
    out = gval * x
    for i in range(sys.n):
        rate = float(sys.omega[i]) + sys.f[i].evaluate(x, mu)
        xi, yi = x[2 * i], x[2 * i + 1]
        out[2 * i] += -rate * yi
        out[2 * i + 1] += rate * xi
    return out


def _poly_source(series: PolySeries) -> str:
    parts = []
    for mi, c in series.terms.items():
        factors = [repr(float(c))]
        for i, (a, b) in enumerate(zip(mi.alpha, mi.beta)):
            if a:
                factors.append(f"x[{2 * i}]" + (f"**{a}" if a > 1 else ""))
            if b:
                factors.append(f"x[{2 * i + 1}]" + (f"**{b}" if b > 1 else ""))
        parts.append("*".join(factors))
    return " + ".join(parts) if parts else "0.0"


def compile_rhs(sys: EulerianSystem, mu=()):
    """Return a fast callable rhs(t, x) for fixed numeric mu (generated Python source)."""
    s = sys.substitute_mu(mu) if sys.n_params else sys
    lines = ["def rhs(t, x):", f"    g = {_poly_source(s.g)}"]
    outs = []
    for i in range(s.n):
        lines.append(f"    r{i} = {float(s.omega[i])!r} + {_poly_source(s.f[i])}")
        outs += [f"g*x[{2 * i}] - r{i}*x[{2 * i + 1}]", f"g*x[{2 * i + 1}] + r{i}*x[{2 * i}]"]
    lines.append("    return _np.array([" + ", ".join(outs) + "])")
    ns = {"_np": np}
    exec(compile("\n".join(lines), "<toral_hopf.rhs>", "exec"), ns)
    return ns["rhs"]


# --- JSON I/O ---------------------------------------------------------------

def _terms_from_json(items, n, n_params, where, truncation):
    terms = {}
    if not isinstance(items, list):
        raise InputError(f"{where}: expected a list of terms")
    for idx, t in enumerate(items):
        loc = f"{where}[{idx}]"
        if not isinstance(t, dict):
            raise InputError(f"{loc}: expected an object")
        try:
            alpha = tuple(int(a) for a in t["alpha"])
            beta = tuple(int(b) for b in t["beta"])
            coeff = parse_scalar(t["coeff"])
        except KeyError as exc:
            raise InputError(f"{loc}: missing field {exc}") from exc
        except (TypeError, ValueError) as exc:
            raise InputError(f"{loc}: {exc}") from exc
        mu = tuple(int(m) for m in t.get("mu_power", [0] * n_params))
        if len(alpha) != n or len(beta) != n:
            raise InputError(f"{loc}: alpha/beta must have length {n}")
        if len(mu) != n_params:
            raise InputError(f"{loc}: mu_power must have length {n_params}")
        key = MultiIndex(alpha, beta, mu)
        terms[key] = terms.get(key, 0) + coeff
    return PolySeries(n, terms, truncation, n_params)


def system_from_dict(d: dict) -> EulerianSystem:
    if not isinstance(d, dict):
        raise InputError("system file must contain a JSON object")
    if d.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise InputError(f"unsupported schema {d.get('schema')!r}")
    try:
        n = int(d["n"])
        omega = tuple(parse_omega(w) for w in d["omega"])
    except KeyError as exc:
        raise InputError(f"missing field {exc}") from exc
    params = tuple(str(p) for p in d.get("params", []))
    trunc = int(d.get("truncation_degree", DEFAULT_TRUNCATION))
    g = _terms_from_json(d.get("g_terms", []), n, len(params), "g_terms", trunc)
    f_raw = d.get("f_terms", [[] for _ in range(n)])
    if len(f_raw) != n:
        raise InputError(f"f_terms must have {n} entries")
    f = tuple(_terms_from_json(f_raw[i], n, len(params), f"f_terms[{i}]", trunc) for i in range(n))
    return EulerianSystem(n, omega, g, f, params, trunc)


def _terms_to_json(series: PolySeries, n_params):
    out = []
    for mi in sorted(series.terms, key=lambda m: (m.degree, m.alpha, m.beta, m.mu)):
        item = {"alpha": list(mi.alpha), "beta": list(mi.beta), "coeff": format_scalar(series.terms[mi])}
        if n_params:
            item["mu_power"] = list(mi.mu)
        out.append(item)
    return out


def system_to_dict(sys: EulerianSystem) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "n": sys.n,
        "omega": [format_omega(w) for w in sys.omega],
        "params": list(sys.params),
        "truncation_degree": sys.truncation_degree,
        "g_terms": _terms_to_json(sys.g, sys.n_params),
        "f_terms": [_terms_to_json(fi, sys.n_params) for fi in sys.f],
    }


def load_system(path) -> EulerianSystem:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {p}: {exc}") from exc
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{p}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return system_from_dict(d)


def dump_system(sys: EulerianSystem) -> str:
    return json.dumps(system_to_dict(sys), indent=2)
