"""Bifurcations of invariant toral CW complexes over a closed 2k-cell.

The cell normal form truncated at degree five reads, on a leaf with ratio
vector C and reference pair sigma(l),

    d rho / dt = rho (nu_0 + a_1(C) rho^2 + a_2(C) rho^4),

with
    a_1(C) = sum_i c_i^2 a_{e_i} / c_ref^2
    a_2(C) = sum_{i<=j} c_i^2 c_j^2 a_{e_i+e_j} / c_ref^4 .

Tori are the positive roots R = rho^2 of nu_0 + a_1 R + a_2 R^2.  The sign of
a_{2e} <diag(a_e) C, C> splits the sphere into Gamma^+, Gamma^0 and Gamma^-;
on Gamma^- a leaf carries two, one (double) or no tori depending on where
nu_0 sits relative to a_1^2 / (4 a_2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from .algebra.surd import Surd, as_exact
from .cells import (KPermutation, SphereCell, ToralCell, ToralCWDescriptor, refinements,
                    sphere_cell_closure, toral_cw_over_sphere)
from .errors import DegenerateError, HypothesisError, InputError, NumericFailure

REGION_TOL = 1e-10
SIGN_TOL = 1e-12
DEFAULT_GRID_2CELL = 20000
DEFAULT_GRID_1CELL = 1000


def _exact(x):
    if isinstance(x, bool):
        raise InputError("boolean is not a scalar")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, Surd):
        return as_exact(x)
    if isinstance(x, str):
        return Fraction(x)
    return float(x)


def _sign(x, tol: float = 0.0) -> int:
    if isinstance(x, float):
        return 0 if abs(x) <= tol else (1 if x > 0 else -1)
    if isinstance(x, Surd):
        return x.sign()
    return (x > 0) - (x < 0)


def _sq(c):
    c = _exact(c)
    v = c * c
    return as_exact(v) if isinstance(v, Surd) else v


@dataclass(frozen=True)
class CellNFCoeffs:
    n: int
    k: int
    sigma: KPermutation
    a_e: tuple
    a_ee: tuple

    def __post_init__(self):
        if self.sigma.n != self.n or self.sigma.k != self.k:
            raise InputError("sigma does not match (n, k)")
        if len(self.a_e) != self.n:
            raise InputError(f"a_e needs {self.n} entries")
        if len(self.a_ee) != self.n or any(len(r) != self.n for r in self.a_ee):
            raise InputError(f"a_ee must be {self.n}x{self.n}")
        ae = tuple(_exact(v) for v in self.a_e)
        aee = tuple(tuple(_exact(v) for v in r) for r in self.a_ee)
        for i in range(self.n):
            for j in range(i):
                if aee[i][j] != aee[j][i]:
                    raise InputError(f"a_ee not symmetric at ({i + 1},{j + 1})")
        object.__setattr__(self, "a_e", ae)
        object.__setattr__(self, "a_ee", aee)

    @classmethod
    def from_dict(cls, d: dict) -> "CellNFCoeffs":
        try:
            n = int(d["n"])
            k = int(d.get("k", n))
            sel = d.get("sigma")
            sigma = (KPermutation.identity(n, k) if sel is None
                     else KPermutation.from_selected(n, list(sel)[:k]))
            return cls(n, k, sigma, tuple(d["a_e"]), tuple(tuple(r) for r in d["a_ee"]))
        except KeyError as exc:
            raise InputError(f"cell coefficients missing field {exc}") from exc

    def to_dict(self) -> dict:
        return {"schema": 1, "n": self.n, "k": self.k, "sigma": list(self.sigma.selected),
                "a_e": list(self.a_e), "a_ee": [list(r) for r in self.a_ee]}

    @property
    def support(self) -> tuple:
        return self.sigma.selected

    def ae(self, i: int):
        return self.a_e[i - 1]

    def aee(self, i: int, j: int):
        return self.a_ee[i - 1][j - 1]


def _support(C, sel=None, tol: float = SIGN_TOL) -> tuple:
    idx = range(1, len(C) + 1) if sel is None else sel
    return tuple(i for i in idx if _sign(_exact(C[i - 1]), tol) != 0)


def leaf_quadratic(coeffs: CellNFCoeffs, C: Sequence, l: int | None = None):
    """(a_1, a_2) of the leaf through C with reference pair ``l`` (1-based pair
    index; default the last pair of the support)."""
    if len(C) != coeffs.n:
        raise InputError(f"C needs {coeffs.n} components")
    sup = _support(C, coeffs.support)
    if not sup:
        raise InputError("C vanishes on the cell support")
    ref = sup[-1] if l is None else l
    cr2 = _sq(C[ref - 1])
    if _sign(cr2, SIGN_TOL) == 0:
        raise InputError(f"reference component c_{ref} is zero")
    sq = {i: _sq(C[i - 1]) for i in sup}
    a1 = sum((sq[i] * coeffs.ae(i) for i in sup), Fraction(0)) / cr2
    a2 = Fraction(0)
    for x, i in enumerate(sup):
        for j in sup[x:]:
            a2 = a2 + sq[i] * sq[j] * coeffs.aee(i, j)
    a2 = a2 / (cr2 * cr2)
    return _exact(a1), _exact(a2)


def quadratic_form(coeffs: CellNFCoeffs, C: Sequence):
    """<diag(a_e) C, C> over the cell support."""
    return sum((_sq(C[i - 1]) * coeffs.ae(i) for i in coeffs.support), Fraction(0))


def gamma_label(coeffs: CellNFCoeffs, C: Sequence, tol: float = SIGN_TOL) -> int:
    """+1, 0 or -1: sign of a_{2e_{sigma(1)}} <diag(a_e) C, C>."""
    s1 = coeffs.sigma(1)
    sa = _sign(coeffs.aee(s1, s1))
    if sa == 0:
        raise DegenerateError(f"a_2e_{s1} = 0: Gamma partition undefined")
    return sa * _sign(quadratic_form(coeffs, C), tol)


# ----------------------------------------------------------------------------
# critical parameter values


@dataclass(frozen=True)
class CriticalCandidate:
    gamma: tuple
    value: object
    direction: tuple
    admissible: bool


@dataclass(frozen=True)
class CriticalNus:
    nu_min: object
    nu_max: object
    contributors: tuple
    nu_min_unfiltered: object = None
    nu_max_unfiltered: object = None

    @property
    def filtered(self) -> list:
        return [c for c in self.contributors if c.admissible]

    @property
    def unfiltered(self) -> list:
        return list(self.contributors)

    def to_dict(self) -> dict:
        row = lambda c: {"gamma": list(c.gamma), "value": c.value, "direction": list(c.direction),
                         "admissible": c.admissible}
        return {"nu_min": self.nu_min, "nu_max": self.nu_max,
                "nu_min_unfiltered": self.nu_min_unfiltered,
                "nu_max_unfiltered": self.nu_max_unfiltered,
                "filtered": [row(c) for c in self.filtered],
                "unfiltered": [row(c) for c in self.contributors]}


def _solve(M: list, b: list) -> list:
    """Gaussian elimination; exact on Fractions, partial pivoting on floats."""
    n = len(b)
    A = [list(M[i]) + [b[i]] for i in range(n)]
    for col in range(n):
        if any(isinstance(A[r][col], float) for r in range(col, n)):
            piv = max(range(col, n), key=lambda r: abs(A[r][col]))
            if abs(A[piv][col]) < 1e-14:
                raise NumericFailure("singular M_gamma")
        else:
            piv = next((r for r in range(col, n) if A[r][col] != 0), None)
            if piv is None:
                raise NumericFailure("singular M_gamma")
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col] / p
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [A[i][n] / A[i][i] for i in range(n)]


def gamma_matrix(coeffs: CellNFCoeffs, gamma: Sequence[int]) -> list:
    """M_gamma: a_{2e} on the diagonal, a_{e_i+e_j}/2 off it."""
    half = Fraction(1, 2)
    return [[coeffs.aee(i, j) * (1 if i == j else half) for j in gamma] for i in gamma]


def critical_nus(coeffs: CellNFCoeffs) -> CriticalNus:
    """Extremes of a_1^2/(4 a_2) over the closed sphere cell.

    On a stratum gamma the squared ratios X = (c_i^2) give a_1^2/(4a_2) =
    <a, X>^2 / (4 <X, M X>), whose interior critical point is X ~ M^{-1} a with
    value <a, M^{-1} a>/4.  The point lies in Gamma^- (where the quantity is
    used) only when a_1/a_2 < 0 there, i.e. every component of M^{-1} a is
    strictly negative; other candidates are logged but not admissible.
    """
    rows = []
    for l in range(1, coeffs.k + 1):
        for g in refinements(coeffs.sigma, l):
            gam = g.selected
            a = [coeffs.ae(i) for i in gam]
            x = _solve(gamma_matrix(coeffs, gam), a)
            val = sum((ai * xi for ai, xi in zip(a, x)), Fraction(0)) / 4
            adm = all(_sign(xi, SIGN_TOL) < 0 for xi in x)
            rows.append(CriticalCandidate(gam, val, tuple(x), adm))
    adm_vals = [c.value for c in rows if c.admissible]
    all_vals = [c.value for c in rows]
    return CriticalNus(min([Fraction(0)] + adm_vals), max([Fraction(0)] + adm_vals), tuple(rows),
                       min([Fraction(0)] + all_vals), max([Fraction(0)] + all_vals))


# ----------------------------------------------------------------------------
# regions and radii

REGIONS = ("D", "Dboundary", "N")


def region_label(coeffs: CellNFCoeffs, C: Sequence, nu0, tol: float = REGION_TOL) -> str:
    if gamma_label(coeffs, C) != -1:
        raise HypothesisError("region_label is defined on Gamma^- only")
    a1, a2 = leaf_quadratic(coeffs, C)
    thr = a1 * a1 / (4 * a2)
    nu0 = _exact(nu0)
    diff = nu0 - thr
    if abs(float(diff)) <= tol:
        return "Dboundary"
    if _sign(a2) > 0:
        return "D" if 0 < nu0 < thr else "N"
    return "D" if thr < nu0 < 0 else "N"


@dataclass(frozen=True)
class QuarticTorus:
    R: object
    radius_vector: tuple
    stable: bool | None
    multiplicity: int = 1

    def to_dict(self) -> dict:
        return {"R": self.R, "radius_vector": list(self.radius_vector), "stable": self.stable,
                "multiplicity": self.multiplicity}


def _sqrt_scalar(x):
    if isinstance(x, float):
        return math.sqrt(x)
    s = Surd.sqrt(x)
    return as_exact(s)


def torus_radii_quartic(coeffs: CellNFCoeffs, C: Sequence, nu0, l: int | None = None) -> list:
    """Tori on the leaf through C, ordered by increasing R = rho_ref^2."""
    a1, a2 = leaf_quadratic(coeffs, C, l)
    nu0 = _exact(nu0)
    sup = _support(C, coeffs.support)
    ref = sup[-1] if l is None else l
    cref = _exact(C[ref - 1])
    roots = []
    if _sign(a2, SIGN_TOL) == 0:
        if _sign(a1, SIGN_TOL) != 0:
            roots = [(-nu0 / a1, 1)]
    else:
        disc = a1 * a1 - 4 * nu0 * a2
        sd = _sign(disc, SIGN_TOL if isinstance(disc, float) else 0.0)
        if sd == 0:
            roots = [(-a1 / (2 * a2), 2)]
        elif sd > 0:
            r = _sqrt_scalar(disc)
            roots = [((-a1 - r) / (2 * a2), 1), ((-a1 + r) / (2 * a2), 1)]
    out = []
    for R, mult in roots:
        R = as_exact(R) if isinstance(R, Surd) else R
        if _sign(R, SIGN_TOL) <= 0:
            continue
        rho = _sqrt_scalar(R) if not isinstance(R, Surd) else math.sqrt(float(R))
        vec = []
        for i in range(1, coeffs.n + 1):
            if i in sup:
                ci = _exact(C[i - 1])
                v = rho * ci / cref
                vec.append(as_exact(v) if isinstance(v, Surd) else v)
            else:
                vec.append(Fraction(0))
        dP = a1 + 2 * a2 * R
        stable = None if mult > 1 else _sign(dP, SIGN_TOL) < 0
        out.append(QuarticTorus(R, tuple(vec), stable, mult))
    out.sort(key=lambda t: float(t.R))
    return out


# ----------------------------------------------------------------------------
# closed-form degree-3 flow


def exact_flow(r0: Sequence, t, nu0, coeffs: CellNFCoeffs) -> np.ndarray:
    """Solution of dr_i/dt = r_i (nu_0 + sum_j a_{e_j} r_j^2) at time t.

    Ratios r_i/r_j are constant, so u = r_ref^2 obeys u' = 2u(nu_0 + A u) with
    A = sum_i a_{e_i} (r_i/r_ref)^2, a Bernoulli equation.
    """
    r0 = np.asarray([float(v) for v in r0], dtype=float)
    if r0.size != coeffs.n:
        raise InputError(f"r0 needs {coeffs.n} components")
    nz = np.flatnonzero(r0)
    if nz.size == 0:
        return r0.copy()
    ref = nz[-1]
    nu0, t = float(nu0), float(t)
    ae = np.array([float(v) for v in coeffs.a_e])
    A = float(np.sum(ae * (r0 / r0[ref]) ** 2))
    u0 = r0[ref] ** 2
    # phi(t) = (e^{2 nu0 t} - 1)/nu0, limit 2t at nu0 = 0
    phi = math.expm1(2 * nu0 * t) / nu0 if nu0 != 0 else 2 * t
    den = 1.0 - A * u0 * phi
    if den <= 0:
        if nu0 == 0:
            tb = 1.0 / (2 * A * u0)
        else:
            arg = nu0 / (A * u0)
            tb = math.log1p(arg) / (2 * nu0) if arg > -1 else math.inf
        tb = float(tb)
        raise NumericFailure(f"finite-time blowup of the radial flow at t* = {tb!r} "
                             f"(requested t = {t!r}); bracket [0, {tb!r}]")
    u = u0 * math.exp(2 * nu0 * t) / den
    return math.sqrt(u) * r0 / r0[ref]


def radial_rhs(coeffs: CellNFCoeffs, nu0, degree: int = 3):
    """dr/dt of the truncated cell normal form in pair radii (numpy callable)."""
    ae = np.array([float(v) for v in coeffs.a_e])
    aee = np.array([[float(v) for v in r] for r in coeffs.a_ee])
    iu = np.triu(np.ones_like(aee))
    nu0 = float(nu0)

    def f(t, r):
        r2 = r * r
        g = nu0 + ae @ r2
        if degree >= 5:
            g = g + r2 @ (aee * iu) @ r2
        return r * g

    return f


# ----------------------------------------------------------------------------
# sphere sampling


def fibonacci_sphere_octant(n_points: int) -> np.ndarray:
    """Points of a Fibonacci lattice on the positive octant of S^2."""
    if n_points < 1:
        raise InputError("grid size must be positive")
    # uniform in z on (0,1), golden-angle azimuth folded into (0, pi/2)
    i = np.arange(n_points) + 0.5
    z = i / n_points
    phi = (math.pi / 2) * np.mod(i * (math.sqrt(5) - 1) / 2, 1.0)
    rxy = np.sqrt(1 - z * z)
    pts = np.stack([rxy * np.cos(phi), rxy * np.sin(phi), z], axis=1)
    return pts[np.all(pts > 0, axis=1)]


def sample_sphere_cell(cell: SphereCell, n: int, n2: int = DEFAULT_GRID_2CELL,
                       n1: int = DEFAULT_GRID_1CELL, seed: int = 0) -> np.ndarray:
    """Points C (n-vectors) inside the open cell S^{l-1,gamma}_{>0}."""
    idx = np.array(cell.indices) - 1
    d = cell.l
    if d == 1:
        local = np.ones((1, 1))
    elif d == 2:
        th = (np.arange(n1) + 0.5) / n1 * (math.pi / 2)
        local = np.stack([np.cos(th), np.sin(th)], axis=1)
    elif d == 3:
        local = fibonacci_sphere_octant(n2)
    else:
        rng = np.random.default_rng(seed)
        local = np.abs(rng.standard_normal((n2, d)))
        local /= np.linalg.norm(local, axis=1, keepdims=True)
    out = np.zeros((local.shape[0], n))
    out[:, idx] = local
    return out


@dataclass
class RegionSamples:
    """Vectorised labels of sampled points."""

    C: np.ndarray
    gamma: np.ndarray
    region: np.ndarray  # "Gamma+", "Gamma0", "D", "Dboundary", "N"
    R_minus: np.ndarray
    R_plus: np.ndarray
    stable_minus: np.ndarray
    stable_plus: np.ndarray

    def rows(self):
        for i in range(self.C.shape[0]):
            yield (tuple(self.C[i]), int(self.gamma[i]), str(self.region[i]), self.R_minus[i],
                   self.R_plus[i], self.stable_minus[i], self.stable_plus[i])


def label_points(coeffs: CellNFCoeffs, Cs: np.ndarray, nu0, tol: float = REGION_TOL) -> RegionSamples:
    """Gamma and region labels plus quartic radii for many points at once."""
    Cs = np.atleast_2d(np.asarray(Cs, dtype=float))
    sel = np.array(coeffs.support) - 1
    ae = np.array([float(v) for v in coeffs.a_e])
    aee = np.array([[float(v) for v in r] for r in coeffs.a_ee])
    X = np.zeros_like(Cs)
    X[:, sel] = Cs[:, sel] ** 2
    ref = np.array([np.flatnonzero(x)[-1] if np.any(x) else -1 for x in X])
    if np.any(ref < 0):
        raise InputError("sample vanishes on the cell support")
    xr = X[np.arange(len(X)), ref]
    q = X @ ae
    upper = np.triu(aee)
    a1 = q / xr
    a2 = np.einsum("pi,ij,pj->p", X, upper, X) / xr ** 2
    s1 = coeffs.sigma(1) - 1
    sa = np.sign(float(aee[s1, s1]))
    if sa == 0:
        raise DegenerateError("a_2e_sigma(1) = 0: Gamma partition undefined")
    g = (sa * np.where(np.abs(q) <= SIGN_TOL, 0.0, np.sign(q))).astype(int)
    nu0 = float(nu0)
    region = np.where(g > 0, "Gamma+", np.where(g == 0, "Gamma0", "N")).astype(object)
    with np.errstate(divide="ignore", invalid="ignore"):
        thr = a1 * a1 / (4 * a2)
    neg = g < 0
    inside = np.where(a2 > 0, (0 < nu0) & (nu0 < thr), (thr < nu0) & (nu0 < 0))
    region[neg & inside] = "D"
    region[neg & (np.abs(nu0 - thr) <= tol)] = "Dboundary"
    disc = a1 * a1 - 4 * nu0 * a2
    with np.errstate(divide="ignore", invalid="ignore"):
        sq = np.sqrt(np.where(disc >= 0, disc, np.nan))
        r1 = (-a1 - sq) / (2 * a2)
        r2 = (-a1 + sq) / (2 * a2)
    lo, hi = np.fmin(r1, r2), np.fmax(r1, r2)
    dbl = region == "Dboundary"
    lo[dbl] = hi[dbl] = -a1[dbl] / (2 * a2[dbl])
    lo = np.where(lo > 0, lo, np.nan)
    hi = np.where(hi > 0, hi, np.nan)
    # one positive root: report it as R_plus
    only_hi = np.isnan(hi) & ~np.isnan(lo)
    hi[only_hi], lo[only_hi] = lo[only_hi], np.nan
    st_lo = np.where(np.isnan(lo), np.nan, (a1 + 2 * a2 * lo) < 0)
    st_hi = np.where(np.isnan(hi), np.nan, (a1 + 2 * a2 * hi) < 0)
    st_lo[dbl] = st_hi[dbl] = np.nan
    return RegionSamples(Cs, g, region, lo, hi, st_lo, st_hi)


# ----------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Variety:
    name: str
    nu0: object
    active: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "nu0": self.nu0, "active": self.active}


@dataclass
class CellBifReport:
    regime: str  # "uniform" or "mixed"
    nu0: object
    varieties: list
    equivalence_class: str
    manifolds: list  # ToralCWDescriptor
    bistable: ToralCWDescriptor | None
    critical: CriticalNus | None = None
    region_measure: dict = field(default_factory=dict)
    seed: int = 0

    def to_dict(self) -> dict:
        return {"regime": self.regime, "nu0": self.nu0,
                "varieties": [v.to_dict() for v in self.varieties],
                "equivalence_class": self.equivalence_class,
                "manifolds": [m.to_dict() for m in self.manifolds],
                "bistable": None if self.bistable is None else self.bistable.to_dict(),
                "critical": None if self.critical is None else self.critical.to_dict(),
                "region_measure": dict(self.region_measure), "seed": self.seed}


def regime(coeffs: CellNFCoeffs) -> str:
    sup = coeffs.support
    s_e = [_sign(coeffs.ae(i)) for i in sup]
    if 0 in s_e:
        raise DegenerateError("some a_e vanishes on the support: degenerate configuration")
    if len(set(s_e)) == 1:
        return "uniform"
    s_ee = {_sign(coeffs.aee(i, j)) for i in sup for j in sup}
    if len(s_ee) != 1 or 0 in s_ee:
        raise DegenerateError("mixed a_e signs need all a_{e_i+e_j} nonzero of one sign")
    return "mixed"


def _tagged_cells(pieces: dict, tag: str, rid: str, context: dict | None = None) -> tuple:
    """Toral cells T_l x (region piece of an (l-1)-sphere cell).

    ``context`` holds every region present on each cell; a boundary set is a
    hypersurface only when it separates other pieces there.
    """
    out = []
    for cell, regions in pieces.items():
        present = (context or pieces)[cell]
        for reg in sorted(regions):
            thin = reg in ("Gamma0", "Dboundary") and len(present) > 1
            bdim = cell.dim - (1 if thin else 0)
            if bdim < 0:
                continue
            base = f"{reg}:S^{cell.dim},{{{','.join(map(str, cell.indices))}}}"
            out.append(ToralCell(base, cell.l, f"{rid}:{tag}", bdim))
    return tuple(out)


def classify_cell_bifurcation(coeffs: CellNFCoeffs, nu0, grid: int = DEFAULT_GRID_2CELL,
                              grid1: int = DEFAULT_GRID_1CELL, seed: int = 0) -> CellBifReport:
    nu0 = _exact(nu0)
    reg = regime(coeffs)
    sk = coeffs.sigma(coeffs.k)
    if reg == "uniform":
        ak = coeffs.ae(sk)
        var = [Variety("T_Pch", Fraction(0), nu0 == 0)]
        mans = []
        if _sign(nu0 * ak) < 0:
            d = toral_cw_over_sphere(coeffs.sigma, "degree-3 leaf radius")
            mans.append(ToralCWDescriptor(d.cells, label="toral complex over closed sphere cell",
                                          stable=_sign(ak) < 0))
        cls = "nu0=0" if nu0 == 0 else ("nu0>0" if nu0 > 0 else "nu0<0")
        return CellBifReport(reg, nu0, var, cls, mans, None, None, {}, seed)

    a2e = coeffs.aee(sk, sk)
    sa = _sign(a2e)
    crit = critical_nus(coeffs)
    thr = crit.nu_max if sa > 0 else crit.nu_min
    var = [Variety("T_2Pch", Fraction(0), nu0 == 0),
           Variety("T_SN", thr, abs(float(nu0 - thr)) <= REGION_TOL)]
    top = SphereCell(coeffs.k, coeffs.sigma)
    pieces: dict = {}
    counts: dict = {}
    for cell in sphere_cell_closure(top):
        pts = sample_sphere_cell(cell, coeffs.n, grid, grid1, seed)
        lab = label_points(coeffs, pts, nu0)
        present = set(lab.region.tolist())
        if "D" in present and "N" in present:
            present.add("Dboundary")  # D and N are separated by the saddle-node set
        pieces[cell] = present
        for r in lab.region:
            counts[(cell.dim, r)] = counts.get((cell.dim, r), 0) + 1
    # area fraction of each region within the top cell
    top_total = sum(v for (d, _), v in counts.items() if d == top.dim)
    measure = {r: counts.get((top.dim, r), 0) / top_total for r in
               ("Gamma+", "Gamma0", "D", "Dboundary", "N")}
    mans, bist = [], None
    prod = nu0 * a2e
    if nu0 == 0:
        cls = "T_2Pch"
    elif abs(float(nu0 - thr)) <= REGION_TOL:
        cls = "T_SN"
    elif _sign(prod) < 0:
        cls = "region-2"
    elif crit.nu_min < nu0 < crit.nu_max:
        cls = "region-1"
    else:
        cls = "region-3"
    if _sign(prod) < 0:
        # one torus on every leaf of the closed cell
        d = toral_cw_over_sphere(coeffs.sigma, "quartic:single")
        mans.append(ToralCWDescriptor(d.cells, label="toral complex over closed sphere cell", stable=sa < 0))
    elif _sign(prod) > 0:
        sub = {c: {r for r in p if r in ("D", "Dboundary")} for c, p in pieces.items()}
        if any(sub.values()):
            mans.append(ToralCWDescriptor(_tagged_cells(sub, "outer", "quartic", pieces),
                                          label="external toral complex over closure of D", stable=sa < 0))
            mans.append(ToralCWDescriptor(_tagged_cells(sub, "inner", "quartic", pieces),
                                          label="internal toral complex over closure of D", stable=sa > 0))
            bd = {c: {"Dboundary"} for c, p in sub.items() if "Dboundary" in p}
            if bd:
                bist = ToralCWDescriptor(_tagged_cells(bd, "bistable", "quartic", pieces),
                                         label="bi-stable toral complex over boundary of D", stable=None)
    return CellBifReport(reg, nu0, var, cls, mans, bist, crit, measure, seed)
