"""JSON report bundles and CSV plot data.

Exact rationals travel as {"num": "<int>", "den": "<int>"} so that arbitrary
precision survives JSON. Output is deterministic: keys are sorted and the
layout is fixed, so equal bundles serialize to identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .chain import ChainSpec, eigenstate_wronskian, extended_potential
from .exact import GaugedFunction, Poly
from .isotonic import potential
from .numeric import GridSpec

__all__ = [
    "FORMAT_VERSION", "ReportBundle", "encode", "decode", "dumps", "loads",
    "poly_json", "gauged_json", "plot_points", "plot_rows", "write_plot_csv",
]

FORMAT_VERSION = "1.0"


def encode(obj: Any) -> Any:
    """Replace Fractions (and exact containers) by JSON-safe structures."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return {"num": str(obj.numerator), "den": str(obj.denominator)}
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return encode(obj.tolist())
    if isinstance(obj, Poly):
        return poly_json(obj)
    if isinstance(obj, GaugedFunction):
        return gauged_json(obj)
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


_INT = re.compile(r"-?[0-9]+")


def _is_rational(d: dict) -> bool:
    if set(d) != {"num", "den"} or not all(isinstance(v, str) for v in d.values()):
        return False
    return bool(_INT.fullmatch(d["num"]) and _INT.fullmatch(d["den"])) and int(d["den"]) > 0


def decode(obj: Any) -> Any:
    if isinstance(obj, dict):
        if _is_rational(obj):
            return Fraction(int(obj["num"]), int(obj["den"]))
        return {k: decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [decode(v) for v in obj]
    return obj


def poly_json(p: Poly) -> list:
    return [encode(c) for c in p.to_list()]


def gauged_json(f: GaugedFunction) -> dict:
    return {
        "x_power": encode(f.x_power),
        "exp_coeff": encode(f.exp_coeff),
        "numerator": poly_json(f.body.num),
        "denominator": poly_json(f.body.den),
        "omega": encode(f.omega),
        "variable": "z = omega x^2 / 2",
    }


def dumps(obj: Any) -> str:
    return json.dumps(encode(obj), sort_keys=True, indent=2, allow_nan=True) + "\n"


def loads(text: str) -> Any:
    return decode(json.loads(text))


@dataclass
class ReportBundle:
    """Everything one CLI run produced, echoing its inputs."""

    inputs: dict
    admissibility: dict | None = None
    potential: dict | None = None
    eigenstates: list = field(default_factory=list)
    shape_invariance: dict | None = None
    spectrum: dict | None = None
    orthogonality: dict | None = None
    tables: dict | None = None
    checks: dict = field(default_factory=dict)
    format_version: str = FORMAT_VERSION

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "inputs": self.inputs,
            "admissibility": self.admissibility,
            "potential": self.potential,
            "eigenstates": self.eigenstates,
            "shape_invariance": self.shape_invariance,
            "spectrum": self.spectrum,
            "orthogonality": self.orthogonality,
            "tables": self.tables,
            "checks": self.checks,
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ReportBundle":
        d = loads(text)
        version = d.pop("format_version", None)
        if version != FORMAT_VERSION:
            raise ValueError(f"unsupported report format {version!r}")
        return cls(format_version=version, **d)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReportBundle):
            return NotImplemented
        return encode(self.to_dict()) == encode(other.to_dict())


def plot_points(grid: GridSpec, n_log: int = 60, n_lin: int = 240) -> np.ndarray:
    """Log-spaced points from x_min to the switch point, then linear points to x_max.

    The switch point is 5% of the interval; both declared endpoints are
    included exactly.
    """
    x_switch = grid.x_min + 0.05 * (grid.x_max - grid.x_min)
    head = np.geomspace(grid.x_min, x_switch, n_log, endpoint=False)
    tail = np.linspace(x_switch, grid.x_max, n_lin)
    x = np.concatenate([head, tail])
    x[0], x[-1] = grid.x_min, grid.x_max
    return x


def plot_rows(chain: ChainSpec, levels: int, grid: GridSpec) -> tuple[list[str], np.ndarray]:
    """Columns x, V(x), psi_0(x), ..., psi_{levels-1}(x); each psi scaled to max |psi| = 1."""
    x = plot_points(grid)
    V = extended_potential(chain) if chain.m else potential(chain.params)
    cols = [x, np.asarray(V(x), dtype=float)]
    for k in range(levels):
        f = eigenstate_wronskian(chain, k).fn
        vals = np.asarray(f.evaluate(x), dtype=float)
        peak = np.max(np.abs(vals[np.isfinite(vals)])) if np.any(np.isfinite(vals)) else 1.0
        cols.append(vals / peak if peak else vals)
    header = ["x", "V"] + [f"psi_{k}" for k in range(levels)]
    return header, np.column_stack(cols)


def write_plot_csv(chain: ChainSpec, levels: int, grid: GridSpec, stream=None) -> str:
    header, rows = plot_rows(chain, levels, grid)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) for v in row])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text

