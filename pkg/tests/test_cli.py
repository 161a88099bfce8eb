import csv
import io
import json
from fractions import Fraction

import numpy as np
import pytest

from toral_hopf.algebra.system import dump_system
from toral_hopf.catalog import example_5_1
from toral_hopf.cli import main
from toral_hopf.report import RunManifest, dumps_csv, dumps_json, dumps_pretty, fmt_scalar


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_fmt_scalar():
    assert fmt_scalar(Fraction(-9, 4)) == "-9/4"
    assert fmt_scalar(Fraction(3)) == "3"
    assert fmt_scalar(0.1) == "0.10000000000000001"
    assert fmt_scalar(np.float64(2.0)) == "2"
    assert fmt_scalar(True) == "true"


def test_json_and_pretty_are_deterministic():
    obj = {"b": Fraction(5, 4), "a": [1.5, None], "nested": {"x": np.array([1, 2])}}
    text = dumps_json(obj)
    assert json.loads(text) == {"b": "5/4", "a": [1.5, None], "nested": {"x": [1, 2]}}
    assert dumps_json(obj) == text
    assert "b = 5/4" in dumps_pretty(obj)
    assert dumps_csv(["u", "v"], [[Fraction(1, 3), 0.5]]) == "u,v\n1/3,0.5\n"


def test_manifest_hashes_inputs(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{}")
    m = RunManifest("cells")
    m.add_input(p)
    assert m.to_dict()["inputs"][str(p)].startswith("sha256:44136fa3")


def test_cells(capsys):
    rc, out, _ = run(capsys, "cells", "--n", "3", "--k", "2")
    assert rc == 0
    res = json.loads(out)["result"]
    assert res["count"] == 3
    assert [c["selected"] for c in res["cells"]] == [[1, 2], [1, 3], [2, 3]]


def test_classify(capsys):
    rc, out, _ = run(capsys, "classify", "--x", "0.1,0,0,0,0.2,0.1")
    res = json.loads(out)["result"]
    assert rc == 0 and res["selected"] == [1, 3]


def test_normal_form_landmark(capsys):
    rc, out, _ = run(capsys, "normal-form", "--example", "5.1", "--sigma", "1,2", "--csq", "1/2,1/2,0",
                     "--ref", "1", "--mu-degree", "0", "--first-grade", "5", "--format", "pretty")
    assert rc == 0
    assert "b2 = 5/4" in out and "s = 2" in out


def test_normal_form_from_file(capsys, tmp_path):
    p = tmp_path / "sys.json"
    p.write_text(dump_system(example_5_1(active_mu=())))
    rc, out, _ = run(capsys, "normal-form", "--system", str(p), "--sigma", "1,2", "--c", "1,2,0",
                     "--ref", "1", "--mu-degree", "0", "--first-grade", "3")
    doc = json.loads(out)
    assert rc == 0
    assert list(doc["manifest"]["inputs"].values())[0].startswith("sha256:")


def test_leaf_bif(capsys):
    rc, out, _ = run(capsys, "leaf-bif", "--nu=6,-11,6", "--a-s", "-1")
    res = json.loads(out)["result"]
    assert rc == 0
    assert [t["stable"] for t in res["tori"]] == [True, False, True]


def test_critical_nus(capsys):
    rc, out, _ = run(capsys, "critical-nus", "--example", "6.2")
    res = json.loads(out)["result"]
    assert rc == 0 and res["nu_max"] == "1/4" and res["nu_max_unfiltered"] == "11/8"


def test_cell_bif_and_regions(capsys, tmp_path):
    samples = tmp_path / "r.csv"
    rc, out, _ = run(capsys, "cell-bif", "--example", "6.1", "--nu0", "1/13", "--grid1", "50",
                     "--samples", str(samples))
    res = json.loads(out)["result"]
    assert rc == 0 and res["equivalence_class"] == "region-1"
    rows = list(csv.DictReader(io.StringIO(samples.read_text())))
    assert list(rows[0]) == ["c1", "c2", "gamma", "region", "R_minus", "R_plus", "stable_minus", "stable_plus"]
    assert {r["region"] for r in rows} <= {"Gamma+", "Gamma0", "D", "Dboundary", "N"}
    for r in rows:
        if r["region"] == "D":
            assert r["R_minus"] and r["R_plus"]
    rc, out, err = run(capsys, "regions", "--example", "6.1", "--nu0", "1/13", "--grid1", "50")
    assert rc == 0 and out == samples.read_text() and "seed = 0" in err


def test_flow_exact_and_blowup(capsys):
    rc, out, _ = run(capsys, "flow-exact", "--example", "6.1", "--nu0=-1", "--r0", "0.5,0.2", "--t", "0,1")
    assert rc == 0
    assert json.loads(out)["result"]["samples"][0]["r"] == pytest.approx([0.5, 0.2])
    rc, _, err = run(capsys, "flow-exact", "--example", "6.1", "--nu0", "0", "--r0", "2,0.1", "--t", "5")
    assert rc == 3 and "t*" in err


def test_simulate(capsys, tmp_path):
    out = tmp_path / "traj.csv"
    rc, _, _ = run(capsys, "simulate", "--example", "5.1", "--x0", "0.01,0,0.02,0,0,0",
                   "--mu", "0.025,0,0,0", "--t", "0:50", "--n-record", "501", "--out", str(out), "--diagnostics")
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,x1,y1,x2,y2,x3,y3,rho1,rho2,rho3"
    assert len(lines) == 502
    diag = json.loads((tmp_path / "traj.csv.diagnostics.json").read_text())
    assert "torus" in json.dumps(diag) or "radii_mean" in json.dumps(diag)


@pytest.mark.parametrize("argv,code", [
    (["cells", "--n", "2"], 1),
    (["cells", "--n", "2", "--k", "3"], 1),
    (["normal-form", "--example", "9.9", "--sigma", "1"], 1),
    (["bogus"], 1),
    (["simulate", "--example", "5.1", "--x0", "0.9,0,0.9,0,0,0", "--mu", "0.025,0,0,0", "--t", "0:100"], 3),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_malformed_system_file(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{ not json")
    rc, _, err = run(capsys, "normal-form", "--system", str(p), "--sigma", "1", "--c", "1,0,0")
    assert rc == 1 and "line 1" in err


def test_verify_subset(capsys):
    rc, out, _ = run(capsys, "verify", "--only", "2,9")
    assert rc == 0
    assert "[PASS] criterion 2" in out and "[PASS] criterion 9" in out


def test_version(capsys):
    assert run(capsys, "--version")[0] == 0
