"""Command-line entry point: ``isodbt {build,verify,spectrum,table}``.

Exit codes: 0 every check passed, 2 the chain was rejected as inadmissible,
3 a verification check failed, 4 the input could not be parsed. Diagnostics
go to stderr as one JSON object; reports go to stdout or to --out DIR.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .admissibility import admissible
from .chain import (ChainSpec, DegenerateChain, crum_krein_delta, eigenstate_determinant,
                    eigenstate_iterated, eigenstate_wronskian, elp_one_step, extended_potential,
                    weight_function)
from .exact import GaugedFunction, Poly, schrodinger_numerator
from .isotonic import ConstraintViolation, IsotonicParams, potential, sign_symbol
from .numeric import DEFAULT_TOL, GridSpec, chain_spectrum, default_grid, orthogonality_matrix
from .serialize import ReportBundle, dumps, encode, gauged_json, poly_json, write_plot_csv
from .shape_invariance import si_check

__all__ = ["ChainInputError", "parse_chain", "parse_rational", "parse_grid", "run", "main",
           "EXIT_OK", "EXIT_INADMISSIBLE", "EXIT_VERIFY", "EXIT_INPUT"]

EXIT_OK, EXIT_INADMISSIBLE, EXIT_VERIFY, EXIT_INPUT = 0, 2, 3, 4
SUBCOMMANDS = ("build", "verify", "spectrum", "table")

_STEP = re.compile(r"^([0-9]+)([+-])$")
# seed degrees beyond this make the exact Wronskians impractically large
MAX_SEED_INDEX = 40


class ChainInputError(ValueError):
    """Structured rejection of a chain or parameter string.

    ``kind`` is one of malformed_step, malformed_rational, duplicate_step,
    constraint, degenerate, too_large, bad_option. Constraint and duplicate errors are
    admissibility rejections (exit 2); the rest are input errors (exit 4).
    """

    ADMISSIBILITY_KINDS = ("duplicate_step", "constraint", "degenerate")

    def __init__(self, kind: str, message: str, token: str | None = None,
                 position: int | None = None):
        super().__init__(message)
        self.kind, self.message, self.token, self.position = kind, message, token, position

    @property
    def exit_code(self) -> int:
        return EXIT_INADMISSIBLE if self.kind in self.ADMISSIBILITY_KINDS else EXIT_INPUT

    def as_dict(self) -> dict:
        return {"kind": self.kind, "message": self.message, "token": self.token,
                "position": self.position, "exit_code": self.exit_code}


def parse_rational(text, name: str = "value") -> Fraction:
    """'p/q', an integer or a finite decimal, as an exact Fraction."""
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    s = str(text).strip()
    try:
        if not s or s.lower().lstrip("+-") in ("inf", "infinity", "nan"):
            raise ValueError
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ChainInputError("malformed_rational", f"{name} {text!r} is not a rational p/q",
                              str(text)) from None


def _tokens(text: str):
    pos = 0
    for raw in text.split(","):
        lead = len(raw) - len(raw.lstrip())
        yield raw.strip(), pos + lead
        pos += len(raw) + 1


def parse_steps(text: str) -> list[tuple[int, int]]:
    """Syntax only: 'n1s1,n2s2,...' with s in {+,-}; '' or '(empty)' is the empty chain."""
    if not isinstance(text, str):
        raise ChainInputError("malformed_step", f"chain must be a string, got {type(text).__name__}")
    if text.strip() in ("", "(empty)"):
        return []
    steps, seen = [], {}
    for tok, pos in _tokens(text):
        m = _STEP.match(tok)
        if not m:
            reason = "empty step" if not tok else f"step {tok!r} is not of the form <n><+|->"
            raise ChainInputError("malformed_step", reason, tok, pos)
        n, i = int(m.group(1)), 1 if m.group(2) == "+" else -1
        if n > MAX_SEED_INDEX:
            raise ChainInputError("too_large", f"seed index {n} exceeds the limit {MAX_SEED_INDEX}",
                                  tok, pos)
        if (n, i) in seen:
            raise ChainInputError(
                "duplicate_step",
                f"same-sign duplicate {tok!r} (first at {seen[(n, i)]}): the Wronskian vanishes",
                tok, pos)
        seen[(n, i)] = pos
        steps.append((n, i))
    return steps


def parse_chain(text: str, omega="1", a="2") -> ChainSpec:
    """Validated ChainSpec, or ChainInputError naming the offending token."""
    w = parse_rational(omega, "omega")
    av = parse_rational(a, "a")
    try:
        params = IsotonicParams(w, av)
    except ValueError as exc:
        raise ChainInputError("bad_option", str(exc)) from None
    steps = parse_steps(text)
    positions = dict(zip(steps, (p for _, p in _tokens(text)))) if steps else {}
    for n, i in steps:
        if i == -1 and not params.alpha > n:
            tok = f"{n}{sign_symbol(i)}"
            raise ChainInputError("constraint",
                                  f"'-' step {tok} needs alpha = a - 1/2 > n; alpha = {params.alpha}",
                                  tok, positions[(n, i)])
    try:
        return ChainSpec(tuple(steps), params)
    except (ConstraintViolation, DegenerateChain) as exc:
        raise ChainInputError("constraint", str(exc)) from None


def parse_grid(text: str | None) -> GridSpec | None:
    """'N:xmin:xmax' or 'N:xmin:xmax:order'."""
    if text is None:
        return None
    parts = str(text).split(":")
    try:
        if len(parts) not in (3, 4):
            raise ValueError("expected N:xmin:xmax[:order]")
        order = int(parts[3]) if len(parts) == 4 else 4
        return GridSpec(int(parts[0]), float(parts[1]), float(parts[2]), order)
    except ValueError as exc:
        raise ChainInputError("bad_option", f"grid {text!r}: {exc}", str(text)) from None


@dataclass(frozen=True)
class Options:
    omega: str = "1"
    a: str = "2"
    levels: int = 5
    grid: str | None = None
    tol: float = DEFAULT_TOL
    fmt: str = "json"


def _inputs(subcommand: str, chain_text: str, opts: Options) -> dict:
    return {"subcommand": subcommand, "chain": chain_text, "omega": str(opts.omega),
            "a": str(opts.a), "levels": opts.levels, "grid": opts.grid, "tol": opts.tol,
            "format": opts.fmt, "version": __version__}


def _potential_section(chain: ChainSpec) -> dict:
    if not chain.m:
        return {"kind": "isotonic", "omega": chain.omega, "a": chain.params.a,
                "V0": chain.params.V0}
    ext = extended_potential(chain)
    zr = ext.correction_z()
    return {
        "kind": "extension",
        "wronskian": gauged_json(ext.W),
        "D": poly_json(ext.D),
        "correction_z": {"numerator": poly_json(zr.num), "denominator": poly_json(zr.den)},
        "formula": "V(x) - 2 (log W)'' with z = omega x^2 / 2",
    }


def _eigen_section(chain: ChainSpec, levels: int) -> list:
    out = []
    for k in range(levels):
        st = eigenstate_wronskian(chain, k)
        out.append({"k": k, "energy": st.energy, "x_power": st.fn.x_power,
                    "exp_coeff": st.fn.exp_coeff, "numerator": poly_json(st.numerator_poly),
                    "denominator": poly_json(st.denominator),
                    "degree": st.numerator_poly.degree})
    return out


def _ratio(p: Poly, q: Poly) -> Fraction | None:
    """c with p = c q, or None."""
    if q.is_zero() or p.degree != q.degree:
        return None
    c = p.lc / q.lc
    return c if p == q * c else None


def _elp_table(chain: ChainSpec, levels: int) -> list:
    n, i = chain.steps[0]
    rows = []
    for k in range(levels):
        explicit = elp_one_step(i, n, k, chain.params.alpha)
        num = eigenstate_wronskian(chain, k).numerator_poly
        rows.append({"k": k, "explicit": poly_json(explicit), "ratio": _ratio(num, explicit),
                     "degree": explicit.degree, "expected_degree": n + k})
    return rows


def _float_check(value: float, tol: float) -> dict:
    return {"value": value, "tol": tol, "passed": bool(value <= tol)}


def _verify_checks(chain: ChainSpec, opts: Options, grid: GridSpec | None) -> tuple[dict, dict, dict, dict]:
    checks: dict = {}
    V = extended_potential(chain) if chain.m else None
    if V is not None:
        checks["potential_forms_agree"] = V.forms_agree
        prod = GaugedFunction.constant(1, chain.omega)
        for s in chain.seeds:
            prod = prod * s.fn
        checks["crum_krein"] = (crum_krein_delta(chain) * prod - V.W).is_zero()
    for k in range(opts.levels):
        st = eigenstate_wronskian(chain, k)
        checks[f"schrodinger_k{k}"] = (st.satisfies_schrodinger(V) if V is not None
                                       else _base_residual_zero(chain, k))
        if chain.m:
            checks[f"determinant_path_k{k}"] = st.is_proportional_to(eigenstate_determinant(chain, k))
            checks[f"iterated_path_k{k}"] = st.is_proportional_to(eigenstate_iterated(chain, k))
    if chain.m == 1:
        checks["elp_one_step"] = all(r["ratio"] is not None and r["degree"] == r["expected_degree"]
                                     for r in _elp_table(chain, opts.levels))
    si = si_check(chain).as_dict() if chain.m else None
    if si is not None:
        checks["shape_invariance"] = si["passed"]
    spec = chain_spectrum(chain, opts.levels, grid)
    spectrum = spec.as_dict() | {"tol": opts.tol, "max_abs_delta": spec.max_abs_delta}
    checks["spectrum"] = _float_check(spec.max_abs_delta, opts.tol)
    gram = orthogonality_matrix(chain, opts.levels)
    ortho = gram.as_dict() | {"tol": opts.tol}
    checks["orthogonality"] = _float_check(gram.max_offdiag, opts.tol)
    return checks, si, spectrum, ortho


def _base_residual_zero(chain: ChainSpec, k: int) -> bool:
    st = eigenstate_wronskian(chain, k)
    return schrodinger_numerator(st.fn, st.energy, potential(chain.params).as_gauged()).is_zero()


def _all_passed(checks: dict) -> bool:
    return all(v["passed"] if isinstance(v, dict) else bool(v) for v in checks.values())


def run(subcommand: str, chain_text: str, opts: Options | None = None) -> tuple[ReportBundle, int]:
    """Run one subcommand on one chain. Never raises for bad chains or options."""
    opts = opts or Options()
    bundle = ReportBundle(inputs=_inputs(subcommand, chain_text, opts))
    try:
        if subcommand not in SUBCOMMANDS:
            raise ChainInputError("bad_option", f"unknown subcommand {subcommand!r}", subcommand)
        if opts.levels < 1:
            raise ChainInputError("bad_option", f"levels must be >= 1, got {opts.levels}")
        if not opts.tol > 0:
            raise ChainInputError("bad_option", f"tol must be positive, got {opts.tol}")
        grid = parse_grid(opts.grid)
        chain = parse_chain(chain_text, opts.omega, opts.a)
    except ChainInputError as exc:
        bundle.checks = {"input": exc.as_dict()}
        if exc.exit_code == EXIT_INADMISSIBLE:
            try:
                steps = parse_steps(chain_text)
                params = IsotonicParams(parse_rational(opts.omega), parse_rational(opts.a))
                bundle.admissibility = admissible(steps, params).as_dict()
            except (ChainInputError, ValueError):
                pass
        return bundle, exc.exit_code

    report = admissible(chain)
    bundle.admissibility = report.as_dict()
    if chain.m and not report.admissible:
        return bundle, EXIT_INADMISSIBLE
    try:
        if subcommand == "build":
            bundle.potential = _potential_section(chain)
            bundle.eigenstates = _eigen_section(chain, opts.levels)
            if chain.m:
                bundle.checks["potential_forms_agree"] = extended_potential(chain).forms_agree
        elif subcommand == "verify":
            bundle.potential = _potential_section(chain)
            bundle.checks, bundle.shape_invariance, bundle.spectrum, bundle.orthogonality = \
                _verify_checks(chain, opts, grid)
        elif subcommand == "spectrum":
            spec = chain_spectrum(chain, opts.levels, grid or default_grid(chain.params, opts.levels))
            bundle.spectrum = spec.as_dict() | {"tol": opts.tol, "max_abs_delta": spec.max_abs_delta}
            bundle.checks["spectrum"] = _float_check(spec.max_abs_delta, opts.tol)
        else:
            bundle.eigenstates = _eigen_section(chain, opts.levels)
            w = weight_function(chain)
            bundle.tables = {"weight": {"exponent": w.exponent, "denominator": poly_json(w.denominator),
                                        "form": "z^exponent e^(-z) / denominator(z)^2"}}
            if chain.m == 1:
                rows = _elp_table(chain, opts.levels)
                bundle.tables["elp_one_step"] = rows
                bundle.checks["elp_one_step"] = all(
                    r["ratio"] is not None and r["degree"] == r["expected_degree"] for r in rows)
    except (ValueError, RuntimeError, ArithmeticError) as exc:
        bundle.checks["error"] = {"kind": "numerical", "message": str(exc), "passed": False}
        return bundle, EXIT_VERIFY
    return bundle, EXIT_OK if _all_passed(bundle.checks) else EXIT_VERIFY


def _safe_name(label: str) -> str:
    return (label.replace("+", "p").replace("-", "m").replace(",", "_")
            .replace("(", "").replace(")", "") or "empty")


def _job(args) -> tuple[str, int, str | None]:
    subcommand, chain_text, opts = args
    bundle, code = run(subcommand, chain_text, opts)
    csv_text = None
    if opts.fmt == "csv" and code in (EXIT_OK, EXIT_VERIFY):
        try:
            chain = parse_chain(chain_text, opts.omega, opts.a)
            grid = parse_grid(opts.grid) or default_grid(chain.params, opts.levels)
            csv_text = write_plot_csv(chain, opts.levels, grid)
        except (ValueError, ArithmeticError) as exc:
            bundle.checks["csv"] = {"kind": "export", "message": str(exc), "passed": False}
            code = EXIT_VERIFY
    return bundle.to_json(), code, csv_text


def _threads() -> int:
    env = os.environ.get("ISODBT_THREADS")
    if env is None:
        return max(1, os.cpu_count() or 1)
    try:
        return max(1, int(env))
    except ValueError:
        raise ChainInputError("bad_option", f"ISODBT_THREADS={env!r} is not an integer", env) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ChainInputError("bad_option", message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="isodbt", description="Rational extensions of the isotonic oscillator.")
    p.add_argument("--version", action="version", version=f"isodbt {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    helps = {"build": "potential and eigenstates", "verify": "full exact and numeric check suite",
             "spectrum": "finite-difference spectrum against 2 k omega",
             "table": "eigenstate polynomial tables and weight"}
    for name in SUBCOMMANDS:
        s = sub.add_parser(name, help=helps[name])
        src = s.add_mutually_exclusive_group(required=True)
        src.add_argument("--chain", help="steps like '1+,2-'; '' is the bare oscillator")
        src.add_argument("--batch", type=Path, help="file with one chain per line")
        s.add_argument("--omega", default="1", help="exact rational p/q (default 1)")
        s.add_argument("--a", default="2", help="exact rational p/q, a >= 1 (default 2)")
        s.add_argument("--levels", type=int, default=5, help="number of levels k = 0..levels-1")
        s.add_argument("--grid", help="N:xmin:xmax[:order] for the eigensolver")
        s.add_argument("--tol", type=float, default=DEFAULT_TOL, help="float tolerance")
        s.add_argument("--out", type=Path, help="write reports into this directory")
        s.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    return p


def _diagnose(exc: ChainInputError, stream=None) -> int:
    (stream or sys.stderr).write(dumps({"error": exc.as_dict()}))
    return exc.exit_code


def _summary(bundle_text: str, code: int) -> str:
    """One-line machine-readable reason for a nonzero exit."""
    d = ReportBundle.from_json(bundle_text)
    reasons = []
    if "input" in d.checks:
        reasons.append(d.checks["input"]["message"])
    if d.admissibility:
        reasons.extend(d.admissibility["reasons"])
    failed = sorted(k for k, v in d.checks.items() if k != "input"
                    and not (v["passed"] if isinstance(v, dict) else v))
    diag = {"chain": d.inputs["chain"], "exit_code": code, "reasons": reasons, "failed_checks": failed}
    if "input" in d.checks:
        diag["input"] = d.checks["input"]
    return json.dumps(encode({"error": diag}), sort_keys=True) + "\n"


def _batch_lines(path: Path) -> list[str]:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ChainInputError("bad_option", f"cannot read batch file: {exc}", str(path)) from None
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def main(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        opts = Options(ns.omega, ns.a, ns.levels, ns.grid, ns.tol, ns.fmt)
        chains = _batch_lines(ns.batch) if ns.batch is not None else [ns.chain]
        jobs = [(ns.subcommand, c, opts) for c in chains]
        workers = min(_threads(), len(jobs))
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_job, jobs))
        else:
            results = [_job(j) for j in jobs]
    except ChainInputError as exc:
        return _diagnose(exc)

    codes = [code for _, code, _ in results]
    for text, code, _ in results:
        if code != EXIT_OK:
            sys.stderr.write(_summary(text, code))
    if ns.out is not None:
        try:
            ns.out.mkdir(parents=True, exist_ok=True)
            for (text, _, csv_text), chain_text in zip(results, chains):
                stem = f"{ns.subcommand}_{_safe_name(chain_text.replace(' ', ''))}"
                (ns.out / f"{stem}.json").write_text(text)
                if csv_text is not None:
                    (ns.out / f"{stem}.csv").write_text(csv_text)
        except OSError as exc:
            return _diagnose(ChainInputError("bad_option", f"cannot write output: {exc}", str(ns.out)))
    elif ns.fmt == "csv":
        for _, _, csv_text in results:
            if csv_text is not None:
                sys.stdout.write(csv_text)
    elif ns.batch is not None:
        sys.stdout.write("[\n" + ",\n".join(t.rstrip("\n") for t, _, _ in results) + "\n]\n")
    else:
        sys.stdout.write(results[0][0])
    return max(codes)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
