"""Command-line entry point.

Exit codes: 0 on success, 1 on usage or input errors, 2 when a pass/fail
check (``counterexample``, ``verify-lb``) fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import bounds, mechanism, optimizer
from .copula import CLAYTON, INDEPENDENT, CopulaSpec, sample
from .marginals import DomainError, LuYuTranscendental, PaperPiecewise, marginal_from_dict
from .ratio import LUYU_CLAIMED_BOUND, LUYU_COUNTEREXAMPLE, eval_theta_luyu, phi_details

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _flatten(obj, prefix: str = "") -> dict:
    if isinstance(obj, dict):
        items = obj.items()
    elif isinstance(obj, (list, tuple)):
        items = enumerate(obj)
    else:
        return {prefix: obj}
    out = {}
    for k, v in items:
        out.update(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
    return out


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return str(v)


def _to_csv(payload) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(payload, list):
        rows = [_flatten(r) for r in payload]
        header = list(rows[0]) if rows else []
        w.writerow(header)
        for r in rows:
            w.writerow([_cell(r.get(k)) for k in header])
    else:
        flat = _flatten(payload)
        w.writerow(list(flat))
        w.writerow([_cell(v) for v in flat.values()])
    return buf.getvalue()


def _emit(payload, args) -> None:
    if args.format == "csv":
        text = _to_csv(payload)
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from exc
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def _marginal(args):
    if args.marginal_json:
        try:
            return marginal_from_dict(json.loads(Path(args.marginal_json).read_text()))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad marginal file {args.marginal_json}: {exc}") from exc
    if args.marginal == "luyu":
        return LuYuTranscendental()
    return PaperPiecewise(args.a, args.b)


def _copula(args, n=None) -> CopulaSpec:
    n = n if n is not None else args.n
    marginal = _marginal(args)
    if args.copula == INDEPENDENT:
        return CopulaSpec(INDEPENDENT, n if n is not None else 2, marginal)
    if n is None:
        raise UsageError("--copula clayton needs --n")
    return CopulaSpec(CLAYTON, n, marginal)


def _grid(text: str) -> list[float]:
    """``lo:hi:count`` or a comma-separated list."""
    try:
        if ":" in text:
            lo, hi, count = text.split(":")
            lo, hi, count = float(lo), float(hi), int(count)
            if count < 1:
                raise ValueError
            if count == 1:
                return [lo]
            return [lo + (hi - lo) * i / (count - 1) for i in range(count)]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}; use lo:hi:count or a,b,c") from exc


def _n_list(text: str) -> list:
    out = []
    for tok in text.split(","):
        tok = tok.strip().lower()
        if not tok:
            continue
        if tok in ("inf", "infinity", "independent"):
            out.append(None)
            continue
        try:
            out.append(int(float(tok)))
        except ValueError as exc:
            raise UsageError(f"bad n value {tok!r}") from exc
    return out


def _instance(path):
    if not path:
        raise UsageError("--instance is required")
    return mechanism.read_instance(path)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_phi_eval(args) -> int:
    spec = _copula(args)
    y = math.inf if args.y == "inf" else float(args.y)
    x = math.inf if args.x == "inf" else float(args.x)
    _emit(phi_details(spec, x, y), args)
    return EXIT_OK


def cmd_maximize(args) -> int:
    spec = _copula(args)
    rep = optimizer.maximize_phi(spec, runs=args.runs, seed=args.seed)
    _emit(rep.to_dict(cells=not args.no_cells), args)
    return EXIT_OK


def cmd_tune_ab(args) -> int:
    n = None if args.copula == INDEPENDENT else args.n
    if args.copula == CLAYTON and n is None:
        raise UsageError("--copula clayton needs --n")
    a, b, rep = optimizer.tune_ab(n, _grid(args.a_grid), _grid(args.b_grid), runs=args.runs, seed=args.seed)
    payload = {"a": a, "b": b}
    payload.update(rep.to_dict(cells=False))
    _emit(payload, args)
    return EXIT_OK


def cmd_curve(args) -> int:
    rows = optimizer.ratio_curve(_n_list(args.n_list), runs=args.runs, seed=args.seed, workers=args.threads)
    _emit(rows, args)
    return EXIT_OK


def cmd_simulate(args) -> int:
    inst = _instance(args.instance)
    spec = _copula(args, n=inst.n)
    mean, se = mechanism.estimate_ratio(inst, spec, args.samples, args.seed)
    _emit({"mean_ratio": mean, "std_err": se, "samples": args.samples, "seed": args.seed}, args)
    return EXIT_OK


def cmd_check_mono(args) -> int:
    inst = _instance(args.instance)
    spec = _copula(args, n=inst.n)
    rep = mechanism.check_monotonicity(inst, spec, args.perturbations, args.seed)
    payload = rep.to_dict()
    payload["seed"] = args.seed
    _emit(payload, args)
    return EXIT_OK


def cmd_counterexample(args) -> int:
    a1, a2 = LUYU_COUNTEREXAMPLE
    theta = eval_theta_luyu(a1, a2)
    ok = theta > LUYU_CLAIMED_BOUND
    _emit({"alpha1": a1, "alpha2": a2, "theta": theta, "claimed_bound": LUYU_CLAIMED_BOUND, "exceeds": ok}, args)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_verify_lb(args) -> int:
    rep = bounds.verify_lower_bound(args.resolution, args.threshold)
    payload = rep.to_dict()
    payload.pop("wall_time", None)
    _emit(payload, args)
    return EXIT_OK if rep.passed else EXIT_CHECK_FAILED


def cmd_sample(args) -> int:
    spec = _copula(args)
    batch = sample(spec, args.count, args.seed)
    if args.format == "csv":
        rows = [{f"X{j + 1}": float(v) for j, v in enumerate(r)} for r in batch.draws]
        _emit(rows, args)
    else:
        _emit({"seed": args.seed, "draws": batch.draws.tolist()}, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--marginal", choices=["piecewise", "luyu"], default="piecewise")
    common.add_argument("--marginal-json", help="marginal description as a JSON file (any kind, incl. tabulated)")
    common.add_argument("--a", type=float, default=1.715)
    common.add_argument("--b", type=float, default=0.76)
    common.add_argument("--copula", choices=[CLAYTON, INDEPENDENT], default=INDEPENDENT)
    common.add_argument("--n", type=int, default=None, help="number of tasks (Clayton regime)")
    common.add_argument("--runs", type=int, default=10)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=["json", "csv"], default=None,
                        help="output format (default: csv for curve, json otherwise)")
    common.add_argument("--threads", type=int, default=1, help="worker cap for parallel subcommands")

    parser = _Parser(prog="copulasched", description="Copula-based truthful scheduling toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("phi-eval", parents=[common], help="evaluate phi(x, y)")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=cmd_phi_eval)

    p = sub.add_parser("maximize", parents=[common], help="global maximum of phi")
    p.add_argument("--no-cells", action="store_true", help="omit per-cell diagnostics")
    p.set_defaults(func=cmd_maximize)

    p = sub.add_parser("tune-ab", parents=[common], help="choose (a, b) minimizing max phi")
    p.add_argument("--a-grid", default="1.70:1.73:4")
    p.add_argument("--b-grid", default="0.75:0.77:3")
    p.set_defaults(func=cmd_tune_ab)

    p = sub.add_parser("curve", parents=[common], help="max phi for a list of n")
    p.add_argument("--n-list", default="2,3,4,5,6,7,8,9,10,15,20,30,45,70,100,200,500,1000,inf")
    p.set_defaults(func=cmd_curve, default_format="csv")

    p = sub.add_parser("simulate", parents=[common], help="Monte-Carlo ratio of the mechanism")
    p.add_argument("--instance", help="CSV (2 rows) or JSON {\"t\": ...}")
    p.add_argument("--samples", type=int, default=100_000)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("check-mono", parents=[common], help="monotonicity check")
    p.add_argument("--instance")
    p.add_argument("--perturbations", type=int, default=1000)
    p.set_defaults(func=cmd_check_mono)

    p = sub.add_parser("counterexample", parents=[common], help="Lu-Yu theta at the counterexample")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("verify-lb", parents=[common], help="lower-bound certificate")
    p.add_argument("--resolution", type=float, default=1e-3)
    p.add_argument("--threshold", type=float, default=bounds.THRESHOLD)
    p.set_defaults(func=cmd_verify_lb)

    p = sub.add_parser("sample", parents=[common], help="draw threshold vectors")
    p.add_argument("--count", type=int, default=1000)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.format is None:
            args.format = getattr(args, "default_format", "json")
        return args.func(args)
    except UsageError as exc:
        print(f"copulasched: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ValueError, OSError) as exc:
        print(f"copulasched: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
