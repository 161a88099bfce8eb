"""Command-line entry point ``toral-hopf``.

Exit codes: 0 success, 1 input error, 2 analysis rejected (hypotheses unmet or a
verify check failed), 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, catalog
from .algebra.surd import Surd
from .algebra.system import load_system
from .cellbif import (CellNFCoeffs, classify_cell_bifurcation, critical_nus, exact_flow, label_points,
                      sample_sphere_cell)
from .cells import KPermutation, SphereCell, classify_point, enumerate_Skn, sphere_cell_closure
from .errors import InputError, ToralHopfError
from .leaf import LeafSpec, leaf_reduce
from .leafbif import analyze
from .normalform.graded import GradedLElement
from .normalform.hyper import CONVENTIONS, detect_s, infinite_level_pnf
from .normalform.lie import first_level_nf
from .report import RunManifest, dumps_csv, emit_report, fmt_scalar
from .sim import METHODS, SimConfig, estimate_torus, integrate, invariance_diagnostics

REGION_HEADER_TAIL = ["gamma", "region", "R_minus", "R_plus", "stable_minus", "stable_plus"]
SYSTEM_EXAMPLES = {"5.1": catalog.example_5_1, "5.2": catalog.example_5_2}
CELL_EXAMPLES = {"6.1": catalog.example_6_1, "6.2": catalog.example_6_2}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(f"{self.prog}: {message}")


# --- argument helpers ----------------------------------------------------------


def _scalar(tok: str):
    tok = tok.strip()
    if tok.startswith("sqrt:"):
        return Surd.sqrt(Fraction(tok[5:]))
    try:
        return Fraction(tok) if "e" not in tok.lower() else float(tok)
    except ValueError as exc:
        raise InputError(f"cannot parse number {tok!r}") from exc


def _vector(text: str) -> list:
    if text is None or text.strip() == "":
        return []
    return [_scalar(t) for t in text.split(",")]


def _floats(text: str) -> list:
    return [float(v) for v in _vector(text)]


def _tspan(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 2:
        raise InputError(f"--t expects t0:t1, got {text!r}")
    return float(parts[0]), float(parts[1])


def _load_json(path, manifest: RunManifest) -> dict:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {p}: {exc}") from exc
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{p}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    manifest.add_input(p)
    return d


def _system(args, manifest: RunManifest):
    if args.system:
        manifest.add_input(args.system)
        return load_system(args.system)
    if args.example:
        if args.example not in SYSTEM_EXAMPLES:
            raise InputError(f"unknown example {args.example!r}; choose from {sorted(SYSTEM_EXAMPLES)}")
        return SYSTEM_EXAMPLES[args.example]()
    raise InputError("give --system FILE or --example 5.1|5.2")


def _leaf(args, n: int) -> LeafSpec:
    sel = [int(v) for v in args.sigma.split(",")]
    sigma = KPermutation.from_selected(n, sel)
    ref = args.ref
    if args.csq:
        return LeafSpec.from_squares(sigma, _vector(args.csq), ref)
    if args.c:
        return LeafSpec(sigma, tuple(_vector(args.c)), ref)
    raise InputError("give the leaf as --csq (squared entries) or --c (entries)")


def _coeffs(args, manifest: RunManifest) -> CellNFCoeffs:
    if args.coeffs:
        return CellNFCoeffs.from_dict(_load_json(args.coeffs, manifest))
    if args.example:
        if args.example not in CELL_EXAMPLES:
            raise InputError(f"unknown example {args.example!r}; choose from {sorted(CELL_EXAMPLES)}")
        return CELL_EXAMPLES[args.example]()
    raise InputError("give --coeffs FILE or --example 6.1|6.2")


def _out(text: str, path) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _emit(report, args, manifest: RunManifest) -> None:
    body = {"manifest": manifest, "result": report}
    _out(emit_report(body, args.format), getattr(args, "out", None))


def _mu_name(m: tuple, params: tuple) -> str:
    parts = []
    for e, p in zip(m, params):
        if e:
            parts.append(p if e == 1 else f"{p}^{e}")
    return "*".join(parts)


def nf_table(el: GradedLElement) -> list:
    """Rows named b{j}[mu] for Euler terms and w{i}_{j}[mu] for rotation terms."""
    rows = []
    for kind, i, j, m, v in el.table():
        mu = _mu_name(m, el.params)
        base = f"b{j}" if kind == "E" else f"w{i}_{j}"
        rows.append({"name": base + (f"[{mu}]" if mu else ""), "kind": kind, "pair": i, "j": j,
                     "mu": list(m), "value": v})
    return rows


# --- subcommands ---------------------------------------------------------------


def cmd_cells(args, manifest):
    cells = enumerate_Skn(args.n, args.k)
    rep = {"n": args.n, "k": args.k, "count": len(cells),
           "cells": [{"sigma": list(c.sigma), "selected": list(c.selected)} for c in cells]}
    if args.closure:
        rep["sphere_closures"] = [
            {"selected": list(c.selected),
             "closure": [list(s.indices) for s in sphere_cell_closure(SphereCell(args.k, c))]}
            for c in cells] if args.k >= 1 else []
    _emit(rep, args, manifest)


def cmd_classify(args, manifest):
    p = classify_point(_floats(args.x))
    rep = {"k": p.k, "sigma": list(p.sigma.sigma) if p.sigma else None,
           "selected": list(p.sigma.selected) if p.sigma else [], "C": list(p.C), "rho_k": p.rho_k}
    _emit(rep, args, manifest)


def cmd_leaf_reduce(args, manifest):
    sys_ = _system(args, manifest)
    leaf = _leaf(args, sys_.n)
    lvf = leaf_reduce(sys_, leaf)
    manifest.tower = "exact" if lvf.exact else "float"

    def terms(d):
        return [{"rho_power": p, "cos": list(a), "sin": list(b), "mu": list(m), "coeff": v}
                for (p, a, b, m), v in sorted(d.items())]

    rep = {"k": lvf.k, "omega_hat": list(lvf.omega_hat), "params": list(lvf.params),
           "radial": terms(lvf.radial_terms), "angular": [terms(t) for t in lvf.angular_terms]}
    _emit(rep, args, manifest)


def _nf(args, manifest):
    sys_ = _system(args, manifest)
    if args.params is not None:
        want = [p.strip() for p in args.params.split(",") if p.strip()]
        idx = []
        for p in want:
            if p not in sys_.params:
                raise InputError(f"unknown parameter {p!r}; system has {list(sys_.params)}")
            idx.append(sys_.params.index(p))
        keep = set(idx)
        sys_ = _restrict_params(sys_, keep)
    leaf = _leaf(args, sys_.n)
    lvf = leaf_reduce(sys_, leaf)
    manifest.tower = "exact" if lvf.exact else "float"
    el = first_level_nf(lvf, grade=args.first_grade, mu_degree=args.mu_degree)
    return el


def _restrict_params(sys_, keep: set):
    """Drop parameters not in keep (set them to zero)."""
    from .algebra.series import MultiIndex, PolySeries
    from .algebra.system import EulerianSystem

    order = [i for i in range(sys_.n_params) if i in keep]

    def cut(s):
        terms = {}
        for mi, c in s.terms.items():
            if any(mi.mu[i] for i in range(sys_.n_params) if i not in keep):
                continue
            key = MultiIndex(mi.alpha, mi.beta, tuple(mi.mu[i] for i in order))
            terms[key] = c
        return PolySeries(s.n, terms, s.truncation_degree, len(order))

    return EulerianSystem(sys_.n, sys_.omega, cut(sys_.g), tuple(cut(f) for f in sys_.f),
                          tuple(sys_.params[i] for i in order), sys_.truncation_degree)


def cmd_normal_form(args, manifest):
    el = _nf(args, manifest)
    manifest.tolerances = {"zero": 1e-12, "resonance": 1e-12}
    rep = {"level": args.level, "first_grade": args.first_grade, "mu_degree": args.mu_degree,
           "params": list(el.params)}
    if args.level == "first":
        rep["s"] = detect_s(el)
        rep["coefficients"] = nf_table(el)
    else:
        res = infinite_level_pnf(el, args.grade, convention=args.convention)
        rep.update({"s": res.s, "grade": res.grade, "convention": res.convention,
                    "exact_delta": res.exact_delta, "coefficients": nf_table(res.element),
                    "constraint_violations": [list(map(str, v)) for v in res.constraint_violations()]})
    if args.format == "pretty":
        lines = [f"{r['name']} = {fmt_scalar(r['value'])}" for r in rep["coefficients"]]
        head = f"level = {args.level}\ns = {rep['s']}\n"
        _out(head + "\n".join(lines) + "\n", args.out)
        return
    _emit(rep, args, manifest)


def cmd_leaf_bif(args, manifest):
    nu = _vector(args.nu)
    leaf = None
    if args.sigma:
        leaf = _leaf(args, args.n)
    rep = analyze(nu, _scalar(args.a_s), leaf)
    manifest.tower = "exact" if all(isinstance(v, Fraction) for v in nu) else "float"
    _emit(rep, args, manifest)


def _region_rows(co: CellNFCoeffs, nu0, grid: int, grid1: int, seed: int):
    rows = []
    for cell in sphere_cell_closure(SphereCell(co.k, co.sigma)):
        pts = sample_sphere_cell(cell, co.n, grid, grid1, seed)
        lab = label_points(co, pts, nu0)
        for c, g, r, rm, rp, sm, sp in lab.rows():
            st = lambda v: "" if v != v else ("true" if v else "false")
            rad = lambda v: "" if v != v else v
            rows.append([*c, g, r, rad(rm), rad(rp), st(sm), st(sp)])
    return rows


def cmd_cell_bif(args, manifest):
    co = _coeffs(args, manifest)
    manifest.seed = args.seed
    manifest.tower = "float"
    manifest.tolerances = {"region": 1e-10, "sign": 1e-12}
    nu0 = _scalar(args.nu0)
    rep = classify_cell_bifurcation(co, nu0, grid=args.grid, grid1=args.grid1, seed=args.seed)
    if args.samples:
        header = [f"c{i}" for i in range(1, co.n + 1)] + REGION_HEADER_TAIL
        Path(args.samples).write_text(dumps_csv(header, _region_rows(co, nu0, args.grid, args.grid1, args.seed)))
    _emit(rep, args, manifest)


def cmd_regions(args, manifest):
    co = _coeffs(args, manifest)
    manifest.seed = args.seed
    manifest.tower = "float"
    nu0 = _scalar(args.nu0)
    header = [f"c{i}" for i in range(1, co.n + 1)] + REGION_HEADER_TAIL
    _out(dumps_csv(header, _region_rows(co, nu0, args.grid, args.grid1, args.seed)), args.out)
    sys.stderr.write(f"seed = {args.seed}\n")


def cmd_critical(args, manifest):
    co = _coeffs(args, manifest)
    _emit(critical_nus(co), args, manifest)


def cmd_flow_exact(args, manifest):
    co = _coeffs(args, manifest)
    manifest.tower = "float"
    r0 = _floats(args.r0)
    ts = _floats(args.t)
    rows = [{"t": t, "r": exact_flow(r0, t, _scalar(args.nu0), co).tolist()} for t in ts]
    _emit({"nu0": _scalar(args.nu0), "r0": r0, "samples": rows}, args, manifest)


def cmd_simulate(args, manifest):
    sys_ = _system(args, manifest)
    cfg = SimConfig(method=args.method, t_span=_tspan(args.t), dt=args.dt, rel_tol=args.rtol,
                    abs_tol=args.atol, record_stride=args.stride, n_record=args.n_record)
    manifest.tower = "float"
    manifest.tolerances = {"rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol, "dt": cfg.dt}
    mu = _floats(args.mu) if args.mu else []
    tr = integrate(sys_, _floats(args.x0), mu, cfg)
    n = sys_.n
    header = ["t"] + [f"{c}{i}" for i in range(1, n + 1) for c in ("x", "y")] + [f"rho{i}" for i in range(1, n + 1)]
    rows = [[t, *x, *r] for t, x, r in zip(tr.times, tr.states, tr.radii)]
    text = dumps_csv(header, rows)
    _out(text, args.out)
    if args.diagnostics:
        diag = {"invariance": invariance_diagnostics(tr)}
        try:
            diag["torus"] = estimate_torus(tr, args.tail)
        except InputError as exc:
            diag["torus"] = {"error": str(exc)}
        target = Path(args.out + ".diagnostics.json") if args.out else None
        body = emit_report({"manifest": manifest, "diagnostics": diag}, "json")
        if target:
            target.write_text(body)
        else:
            sys.stderr.write(body)


def cmd_verify(args, manifest):
    from . import checks

    if args.suite != "paper-examples":
        raise InputError(f"unknown suite {args.suite!r}")
    only = set(int(v) for v in args.only.split(",")) if args.only else None
    results = []
    for idx, fn in enumerate(checks.CHECKS, start=1):
        if only and idx not in only:
            continue
        r = checks.run_check(fn)
        print(r.line(), flush=True)
        results.append(r)
    if args.out:
        Path(args.out).write_text(emit_report({"manifest": manifest, "checks": results}, "json"))
    ok = all(r.passed for r in results if r.gating)
    return 0 if ok else 2


# --- parser ------------------------------------------------------------------------


def _add_fmt(p, default="json"):
    p.add_argument("--format", choices=("json", "pretty"), default=default)
    p.add_argument("--out", help="write the report here instead of stdout")


def _add_system(p):
    p.add_argument("--system", help="system JSON file (schema 1)")
    p.add_argument("--example", help="built-in system: 5.1 or 5.2")


def _add_leaf(p, required=True):
    p.add_argument("--sigma", required=required, help="selected pairs, e.g. 1,3")
    p.add_argument("--csq", help="squared leaf entries c_i^2 (exact rationals allowed)")
    p.add_argument("--c", help="leaf entries c_i (ratios suffice)")
    p.add_argument("--ref", type=int, help="reference pair for the leaf radius (default sigma(k))")


def _add_cells(p):
    p.add_argument("--coeffs", help="cell normal-form coefficients JSON")
    p.add_argument("--example", help="built-in coefficients: 6.1 or 6.2")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="toral-hopf", description="Invariant hypertori of multiple Hopf Eulerian flows.")
    ap.add_argument("--version", action="version", version=f"toral-hopf {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cells", help="list the open 2k-cells S^k_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--closure", action="store_true", help="also list sphere-cell closures")
    _add_fmt(p)
    p.set_defaults(fn=cmd_cells)

    p = sub.add_parser("classify", help="cell, sigma and leaf coordinate of a state")
    p.add_argument("--x", required=True, help="state x1,y1,...,xn,yn")
    _add_fmt(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("leaf-reduce", help="restrict a system to a leaf")
    _add_system(p)
    _add_leaf(p)
    _add_fmt(p)
    p.set_defaults(fn=cmd_leaf_reduce)

    p = sub.add_parser("normal-form", help="first-level or infinite-level leaf normal form")
    _add_system(p)
    _add_leaf(p)
    p.add_argument("--level", choices=("first", "infinite"), default="first")
    p.add_argument("--first-grade", type=int, default=7, help="vector-field degree of the first level")
    p.add_argument("--mu-degree", type=int, default=1)
    p.add_argument("--grade", type=int, default=8, help="delta-grade of the infinite level")
    p.add_argument("--convention", choices=CONVENTIONS, default="time")
    p.add_argument("--params", help="keep only these parameters (others set to zero), e.g. mu0,mu3")
    _add_fmt(p)
    p.set_defaults(fn=cmd_normal_form)

    p = sub.add_parser("leaf-bif", help="tori and transition varieties of a leaf amplitude equation")
    p.add_argument("--nu", required=True, help="nu_0,...,nu_{s-1}")
    p.add_argument("--a-s", required=True, dest="a_s")
    p.add_argument("--n", type=int, default=0, help="system size when a leaf is given")
    _add_leaf(p, required=False)
    _add_fmt(p)
    p.set_defaults(fn=cmd_leaf_bif)

    for name, fn, hlp in (("cell-bif", cmd_cell_bif, "toral CW complex bifurcation report"),
                          ("regions", cmd_regions, "region-labelled sphere samples as CSV")):
        p = sub.add_parser(name, help=hlp)
        _add_cells(p)
        p.add_argument("--nu0", required=True)
        p.add_argument("--grid", type=int, default=20000, help="points per 2-sphere cell")
        p.add_argument("--grid1", type=int, default=1000, help="points per 1-sphere cell")
        p.add_argument("--seed", type=int, default=0)
        if name == "cell-bif":
            p.add_argument("--samples", help="also write region samples CSV here")
            _add_fmt(p)
        else:
            p.add_argument("--out")
        p.set_defaults(fn=fn)

    p = sub.add_parser("critical-nus", help="nu_min / nu_max with all candidates")
    _add_cells(p)
    _add_fmt(p)
    p.set_defaults(fn=cmd_critical)

    p = sub.add_parser("flow-exact", help="closed-form degree-3 radial flow")
    _add_cells(p)
    p.add_argument("--nu0", required=True)
    p.add_argument("--r0", required=True)
    p.add_argument("--t", required=True, help="comma separated times")
    _add_fmt(p)
    p.set_defaults(fn=cmd_flow_exact)

    p = sub.add_parser("simulate", help="integrate a system, CSV t,x_i,y_i,rho_i")
    _add_system(p)
    p.add_argument("--x0", required=True)
    p.add_argument("--mu", default="")
    p.add_argument("--t", default="0:100", help="t0:t1 (t1 < t0 integrates backward)")
    p.add_argument("--method", choices=METHODS, default="dopri-adaptive")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--rtol", type=float, default=1e-10)
    p.add_argument("--atol", type=float, default=1e-12)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--n-record", type=int, default=4001, dest="n_record")
    p.add_argument("--tail", type=float, default=0.2)
    p.add_argument("--diagnostics", action="store_true", help="write OUT.diagnostics.json")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("verify", help="run the worked-example landmark checks")
    p.add_argument("--suite", default="paper-examples")
    p.add_argument("--only", help="comma separated criterion numbers")
    p.add_argument("--out", help="JSON report path")
    p.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if getattr(args, "fn", None) is cmd_leaf_bif and args.sigma and not args.n:
            raise InputError("leaf-bif with --sigma needs --n")
        manifest = RunManifest(args.command)
        rc = args.fn(args, manifest)
        return 0 if rc is None else rc
    except ToralHopfError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
