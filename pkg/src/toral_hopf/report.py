"""Deterministic serialization: rationals as "p/q", floats with 17 significant digits."""
from __future__ import annotations

import dataclasses
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .algebra.surd import Surd

FORMATS = ("json", "pretty", "csv")


def fmt_scalar(v) -> str:
    """Text form of one scalar (no JSON quoting)."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, Surd):
        return str(v)
    if isinstance(v, (float, np.floating)):
        x = float(v)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    return str(v)


def to_plain(obj):
    """Recursively turn reports into dict/list/scalar trees."""
    if hasattr(obj, "to_dict") and not isinstance(obj, type):
        return to_plain(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {fmt_scalar(k) if not isinstance(k, str) else k: to_plain(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _json(v, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json(x, indent, level + 1)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, list):
        if not v:
            return "[]"
        if all(not isinstance(x, (dict, list)) for x in v):
            return "[" + ", ".join(_json(x, indent, level + 1) for x in v) + "]"
        return "[\n" + ",\n".join(pad + _json(x, indent, level + 1) for x in v) + "\n" + end + "]"
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return "null" if not math.isfinite(v) else fmt_scalar(v)
    if isinstance(v, (Fraction, Surd)):
        return json.dumps(fmt_scalar(v))
    return json.dumps(str(v))


def dumps_json(obj, indent: int = 2) -> str:
    return _json(to_plain(obj), indent, 0) + "\n"


def _pretty(v, level: int, out: list, key: str = ""):
    pad = "  " * level
    head = f"{pad}{key}" if key else pad.rstrip()
    if isinstance(v, dict):
        if key:
            out.append(f"{head}:" + (" {}" if not v else ""))
        for k, x in v.items():
            _pretty(x, level + (1 if key else 0), out, str(k))
    elif isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v):
        out.append(f"{head}:")
        for i, x in enumerate(v):
            _pretty(x, level + 1, out, f"- [{i}]")
    elif isinstance(v, list):
        out.append(f"{head} = [" + ", ".join(fmt_scalar(x) for x in v) + "]")
    else:
        out.append(f"{head} = {fmt_scalar(v)}")


def dumps_pretty(obj) -> str:
    out: list = []
    _pretty(to_plain(obj), 0, out)
    return "\n".join(out) + "\n"


def dumps_csv(header: list, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join(fmt_scalar(v) for v in r) + "\n")
    return buf.getvalue()


def emit_report(report, fmt: str = "json", stream=None, csv_header=None, csv_rows=None) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    if fmt == "csv":
        if csv_header is None:
            raise ValueError("this report has no CSV form")
        text = dumps_csv(csv_header, csv_rows)
    elif fmt == "json":
        text = dumps_json(report)
    else:
        text = dumps_pretty(report)
    if stream is not None:
        stream.write(text)
    return text


@dataclass
class RunManifest:
    command: str
    inputs: dict = field(default_factory=dict)
    tower: str = "exact"
    tolerances: dict = field(default_factory=dict)
    seed: int = 0
    version: str = __version__

    def add_input(self, path) -> None:
        p = Path(path)
        self.inputs[str(p)] = "sha256:" + hashlib.sha256(p.read_bytes()).hexdigest()

    def to_dict(self) -> dict:
        return {"command": self.command, "inputs": dict(sorted(self.inputs.items())),
                "tower": self.tower, "tolerances": dict(self.tolerances), "seed": self.seed,
                "version": self.version}
