"""Command-line entry point: expand / eval / scan / kh / poles / oracle / sample.

Exit status: 0 on success, 2 on invalid input (bad flags, files or
off-shell processes), 3 on numerical failure (undamped pole, unstable or
nonperturbative oracle run).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import OracleError, SingularityError, SpecFormatError, ValidationError
from .evaluator import EvalParams, eval_chi, eval_s
from .process import load_process
from .sampling import random_system
from .spectra import kh_pair, pole_report_to_dict, pole_table, scan
from .system import load_system, system_to_dict
from .tdoracle import OracleParams, oracle_chi
from .termgen import expand, term_to_text, termlist_to_dict

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


@dataclass
class RunConfig:
    subcommand: str
    inputs: dict = field(default_factory=dict)
    eps: float = 0.0
    on_shell_tol: float | None = None
    out: str | None = None
    seed: int = 0


def _fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return "null"
    if x == 0:
        return "0.0"
    return format(x, ".17g")


def dumps(obj, indent=0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps([obj.real, obj.imag], indent)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


def _result_dict(res, per_term):
    out = {"kind": res.kind, "total": res.total, "prefactor": res.prefactor}
    if per_term:
        out["per_term"] = [{"id": i, "value": v} for i, v in res.per_term]
    return out


def _grid(args):
    if args.grid_values:
        return [float(x) for x in args.grid_values.split(",")]
    lo, hi, count = args.grid.split(":")
    return list(np.linspace(float(lo), float(hi), int(count)))


def cmd_expand(args):
    tl = expand(args.kind, args.order)
    if args.format == "text":
        return "".join(term_to_text(t) + "\n" for t in tl.terms)
    return dumps(termlist_to_dict(tl)) + "\n"


def cmd_eval(args):
    system = load_system(_read(args.system))
    proc = load_process(_read(args.process))
    params = EvalParams(args.eps, args.on_shell_tol)
    out = {}
    if args.kind in ("chi", "both"):
        out["chi"] = _result_dict(eval_chi(system, proc, params), args.per_term)
    if args.kind in ("s", "both"):
        out["s"] = _result_dict(eval_s(system, proc, params), args.per_term)
    if args.kind != "both":
        out = next(iter(out.values()))
    return dumps(out) + "\n"


def cmd_scan(args):
    system = load_system(_read(args.system))
    proc = load_process(_read(args.process))
    records = scan(system, proc, args.vary, _grid(args), EvalParams(args.eps, args.on_shell_tol),
                   solve_for=args.solve_for)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["grid", "chi_re", "chi_im", "s_re", "s_im", "diff_re", "diff_im", "flag"])
    for r in records:
        cells = [r.grid, r.chi.real, r.chi.imag, r.s.real, r.s.imag, r.diff.real, r.diff.imag]
        writer.writerow([format(float(c), ".17g") for c in cells] + [r.flag])
    return buf.getvalue()


def cmd_kh(args):
    system = load_system(_read(args.system))
    s_value, chi_value = kh_pair(system, args.omega, args.eps)
    return dumps({"omega": args.omega, "eps": args.eps, "s": s_value, "chi": chi_value}) + "\n"


def cmd_poles(args):
    system = load_system(_read(args.system))
    proc = load_process(_read(args.process))
    report = pole_table(args.kind, proc.order, system, proc, EvalParams(args.eps), varied=args.vary)
    return dumps(pole_report_to_dict(report)) + "\n"


def cmd_oracle(args):
    system = load_system(_read(args.system))
    proc = load_process(_read(args.process))
    amps = [float(a) for a in args.amps.split(",")]
    params = OracleParams(args.dt, args.transient, args.window)
    result = oracle_chi(system, proc, amps, params, certify=not args.no_certify)
    reference = eval_chi(system, proc, EvalParams(0.0)).total
    out = {
        "estimate": result.estimate,
        "reference": reference,
        "rel_err": abs(result.estimate - reference) / abs(reference),
    }
    if result.halved_estimate is not None:
        out["amplitude_change"] = result.amplitude_change
    return dumps(out) + "\n"


def cmd_sample(args):
    rng = np.random.default_rng(args.seed)
    return dumps(system_to_dict(random_system(rng, args.levels))) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wavemix", description=__doc__.splitlines()[0])
    parser.add_argument("--out", help="write output to FILE instead of stdout")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized helpers")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("expand", help="list the sum-over-states terms of chi^(n) or S^(n+1)")
    p.add_argument("--kind", choices=["chi", "s"], required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_expand)

    def add_inputs(p, process=True):
        p.add_argument("--system", required=True, help="system spec JSON file")
        if process:
            p.add_argument("--process", required=True, help="process spec JSON file")

    def add_eps(p):
        p.add_argument("--eps", type=float, default=0.0, help="global broadening")
        p.add_argument("--on-shell-tol", type=float, default=None)

    p = sub.add_parser("eval", help="evaluate chi^(n) and/or S^(n+1)")
    add_inputs(p)
    add_eps(p)
    p.add_argument("--kind", choices=["chi", "s", "both"], default="both")
    p.add_argument("--per-term", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scan", help="sweep one mode frequency, CSV out")
    add_inputs(p)
    add_eps(p)
    p.add_argument("--vary", type=int, default=0, help="index of the swept mode")
    p.add_argument("--solve-for", type=int, default=None,
                   help="mode re-solved to stay on shell (default: the signal)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--grid", help="LO:HI:COUNT")
    g.add_argument("--grid-values", help="comma-separated values")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("kh", help="two-level constant-sign / opposite-sign pair")
    add_inputs(p, process=False)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.0)
    p.set_defaults(func=cmd_kh)

    p = sub.add_parser("poles", help="pole half-plane table")
    add_inputs(p)
    p.add_argument("--kind", choices=["chi", "s"], required=True)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--vary", type=int, default=0)
    p.set_defaults(func=cmd_poles)

    p = sub.add_parser("oracle", help="time-domain estimate of chi^(n)")
    add_inputs(p)
    p.add_argument("--amps", required=True, help="comma-separated field amplitudes")
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--window", type=float, required=True)
    p.add_argument("--transient", type=float, default=300.0)
    p.add_argument("--no-certify", action="store_true", help="skip the amplitude-halving rerun")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("sample", help="emit a seeded random system spec")
    p.add_argument("--levels", type=int, default=3)
    p.set_defaults(func=cmd_sample)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        text = args.func(args)
    except (SpecFormatError, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    except (SingularityError, OracleError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_NUMERICAL
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
