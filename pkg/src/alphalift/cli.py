"""Command-line entry point: ``alphalift <subcommand> ...``."""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

import numpy as np

from . import experiments as ex
from .io import InputError, read_joint, write_joint_json, write_mechanism_json
from .lift import Alpha, lift_profile, max_sibson_mi, sibson_mi
from .oracle import ViolationFound, verify_strict_tradeoff, verify_x_invariant_optimality
from .probability import random_joint
from .relaxation import REMOVAL_ORDERS, RelaxationConfig
from .watchdog import (
    apply_mechanism,
    attainable,
    optimal_leakage,
    partition,
    partition_from_set,
    x_invariant_mechanism,
)


def _alpha(text: str) -> Alpha:
    try:
        return Alpha.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.12g}"
    return value


def _dump_json(obj, out) -> None:
    """JSON with nan written as null."""
    def clean(v):
        if isinstance(v, float) and v != v:
            return None
        if isinstance(v, dict):
            return {k: clean(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [clean(x) for x in v]
        return v
    json.dump(clean(obj), out, indent=2, default=str)
    out.write("\n")


def _emit_tables(tables: dict[str, list[dict]], fmt: str, out) -> None:
    if fmt == "json":
        payload = dict(tables)
        _dump_json(payload if len(payload) > 1 else next(iter(payload.values())), out)
        return
    first = True
    for name, rows in tables.items():
        if not rows:
            continue
        if fmt == "text" and len(tables) > 1:
            out.write(("" if first else "\n") + f"# {name}\n")
        elif not first:
            out.write("\n")
        first = False
        columns = list(rows[0])
        if fmt == "csv":
            ex.write_csv(rows, columns, out)
        else:
            cells = [[str(_fmt(r[c])) for c in columns] for r in rows]
            widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(columns)]
            out.write("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
            for row in cells:
                out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")


def _open_out(path):
    if path in (None, "-"):
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", newline="")


def _load(args):
    return read_joint(args.input, renormalize=args.renormalize)


def cmd_analyze(args) -> int:
    joint = _load(args)
    per_x, summary = [], []
    for alpha in args.alpha:
        prof = lift_profile(joint, alpha)
        for j, label in enumerate(joint.x_labels):
            per_x.append({
                "alpha": str(alpha),
                "x": label,
                "alpha_lift": float(prof.alpha_lift[j]),
                "log_alpha_lift": float(prof.log_alpha_lift[j]),
            })
        summary.append({
            "alpha": str(alpha),
            "argmax_x": joint.x_labels[prof.argmax()],
            "sibson_mi": sibson_mi(joint, alpha),
            "max_sibson_mi": max_sibson_mi(joint, alpha),
            "max_log_lift": prof.max_log_lift,
        })
    with _open_out(args.output) as out:
        _emit_tables({"alpha_lift": per_x, "summary": summary}, args.format, out)
    return 0


def _partition_report(joint, part) -> dict:
    return {
        "alpha": str(part.alpha),
        "epsilon": part.epsilon,
        "low_risk": [joint.x_labels[i] for i in part.low_risk],
        "high_risk": part.high_risk_labels(),
        "merged_lift": part.merged_lift,
        "high_risk_mass": part.high_risk_mass,
    }


def cmd_partition(args) -> int:
    joint = _load(args)
    rows = [_partition_report(joint, partition(joint, a, args.epsilon)) for a in args.alpha]
    with _open_out(args.output) as out:
        _dump_json(rows if len(rows) > 1 else rows[0], out)
    return 0


def cmd_sanitize(args) -> int:
    joint = _load(args)
    alpha = args.alpha[0]
    part = partition(joint, alpha, args.epsilon)
    mech = x_invariant_mechanism(part, args.R)
    write_mechanism_json(mech, args.mechanism_out)
    write_joint_json(apply_mechanism(joint, mech), args.joint_out)
    leak = optimal_leakage(joint, part)
    if not part.high_risk:
        print("no high-risk symbols: mechanism is the identity")
    else:
        print(f"high-risk symbols: {', '.join(part.high_risk_labels())}")
        print(f"merged lift: {part.merged_lift:.12g}")
        if args.eps_prime is not None:
            verdict = "attainable" if attainable(part, args.eps_prime) else "not attainable"
            print(f"epsilon' = {args.eps_prime:g}: {verdict}")
    print(f"min max Sibson MI: {leak.min_max_sibson:.12g}")
    print(f"min Sibson MI: {leak.min_sibson:.12g}")
    return 0


def _resolve_high_risk(joint, args, alpha):
    if args.high_risk:
        try:
            idx = [joint.x_index(lab) for lab in args.high_risk]
        except ValueError:
            raise InputError(f"unknown high-risk label in {args.high_risk}") from None
        return partition_from_set(joint, alpha, idx)
    return partition(joint, alpha, args.epsilon)


def cmd_verify(args) -> int:
    joint = _load(args)
    reports, status = [], 0
    for alpha in args.alpha:
        part = _resolve_high_risk(joint, args, alpha)
        if not part.high_risk:
            raise InputError(f"alpha={alpha}: the high-risk set is empty")
        try:
            rep = verify_x_invariant_optimality(joint, part, args.samples, args.seed).to_dict()
            if len(part.high_risk) >= 2:
                rep["strict_tradeoff_premises"] = verify_strict_tradeoff(joint, part, args.samples, args.seed)
        except ViolationFound as exc:
            rep = exc.report.to_dict() if exc.report else {"alpha": str(alpha), "error": str(exc)}
            if exc.mechanism is not None:
                rep["offending_mechanism"] = exc.mechanism.to_dict()
            status = 1
        rep["high_risk"] = part.high_risk_labels()
        reports.append(rep)
    with _open_out(args.output) as out:
        _dump_json(reports, out)
    return status


def cmd_put_sweep(args) -> int:
    joint = random_joint(args.random[0], args.random[1], args.seed) if args.random else _load(args)
    rows = ex.put_rows(ex.put_sweep(joint, args.alpha))
    with _open_out(args.output) as out:
        if args.format == "json":
            _dump_json(rows, out)
        else:
            ex.write_csv(rows, ex.PUT_COLUMNS, out)
    return 0


def cmd_compare_relax(args) -> int:
    config = RelaxationConfig(
        eps_bar=args.eps_bar,
        alpha=args.alpha[0],
        epsilon=args.epsilon,
        delta=args.delta,
        eps_max=args.eps_max,
        removal_order=args.order,
    )
    records = ex.cdf_trials(args.trials, args.num_s, args.num_x, config, args.seed, jobs=args.jobs)
    rows = ex.cdf_rows(records)
    with _open_out(args.output) as out:
        if args.format == "json":
            _dump_json(rows, out)
        else:
            ex.write_csv(rows, ex.CDF_COLUMNS, out)
    for method in (ex.DELTA_REFINEMENT, ex.ALPHA_LIFT_RELAXATION):
        recs = ex.records_by_method(records, method)
        vals = [r.nmil for r in recs]
        q99 = float(np.quantile([r.realized_delta for r in recs], 0.99))
        print(
            f"{method}: P(NMIL <= 0.2) = {ex.empirical_cdf(vals, 0.2):.4f}, "
            f"median NMIL = {float(np.median(vals)):.4f}, 99th pct realized delta = {q99:.4f}",
            file=sys.stderr,
        )
    return 0


def cmd_example_surface(args) -> int:
    n = args.rho_steps
    rhos = (np.arange(n) + 0.5) / n
    rows = []
    for alpha in args.alpha:
        surf = ex.example_surface(alpha, rhos)
        for rho, vals in zip(rhos, surf):
            rows.append({"alpha": str(alpha), "rho": float(rho),
                         **{lab: float(v) for lab, v in zip(ex.TOY_X_LABELS, vals)}})
    with _open_out(args.output) as out:
        if args.format == "json":
            _dump_json(rows, out)
        else:
            ex.write_csv(rows, ["alpha", "rho", *ex.TOY_X_LABELS], out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alphalift", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True, fmt_default="text", formats=("text", "csv", "json")):
        if needs_input:
            p.add_argument("input", nargs="?", help="joint distribution (.json or .csv)")
            p.add_argument("--renormalize", action="store_true", help="rescale the pmf to sum 1")
        p.add_argument("--alpha", action="append", type=_alpha, default=None,
                       help="order > 1 or 'inf' (repeatable)")
        p.add_argument("--output", "-o", default=None, help="output path (default: stdout)")
        p.add_argument("--format", choices=formats, default=fmt_default)

    p = sub.add_parser("analyze", help="alpha-lift table and Sibson metrics")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("partition", help="watchdog high-risk set")
    common(p, formats=("json",), fmt_default="json")
    p.add_argument("--epsilon", type=float)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("sanitize", help="X-invariant mechanism and sanitized joint")
    common(p)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--eps-prime", type=float, default=None)
    p.add_argument("--R", type=float, nargs="+", default=None,
                   help="distribution over the high-risk symbols (default uniform)")
    p.add_argument("--mechanism-out", default="mechanism.json")
    p.add_argument("--joint-out", default="sanitized_joint.json")
    p.set_defaults(func=cmd_sanitize)

    p = sub.add_parser("verify", help="Monte-Carlo check of X-invariant optimality")
    common(p, formats=("json",), fmt_default="json")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--high-risk", nargs="+", default=None, help="explicit high-risk labels")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("put-sweep", help="privacy-utility tradeoff along the alpha-lift ordering")
    common(p, formats=("csv", "json"), fmt_default="csv")
    p.add_argument("--random", type=int, nargs=2, metavar=("NUM_S", "NUM_X"), default=None,
                   help="use a random joint instead of an input file (needs --seed)")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_put_sweep)

    p = sub.add_parser("compare-relax", help="Monte-Carlo comparison of the two relaxations")
    common(p, needs_input=False, formats=("csv", "json"), fmt_default="csv")
    p.add_argument("--trials", type=int, default=5000)
    p.add_argument("--num-s", type=int, default=15)
    p.add_argument("--num-x", type=int, default=20)
    p.add_argument("--eps-bar", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, default=0.45)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--eps-max", type=float, default=4.0)
    p.add_argument("--order", choices=REMOVAL_ORDERS, default="min_mass")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_compare_relax)

    p = sub.add_parser("example-surface", help="toy-example alpha-lift over p(S = 1)")
    common(p, needs_input=False, formats=("csv", "json"), fmt_default="csv")
    p.add_argument("--rho-steps", type=int, default=10000)
    p.set_defaults(func=cmd_example_surface)
    return parser


_DEFAULT_ALPHA = {
    "analyze": ["1.5", "inf"],
    "put-sweep": ["1.5", "10", "inf"],
    "compare-relax": ["10"],
    "example-surface": ["2"],
}


def _validate(args) -> list[str]:
    errors = []
    cmd = args.command
    if args.alpha is None:
        if cmd in _DEFAULT_ALPHA:
            args.alpha = [Alpha.parse(a) for a in _DEFAULT_ALPHA[cmd]]
        else:
            errors.append("--alpha is required")
    if hasattr(args, "input") and args.input is None and not getattr(args, "random", None):
        errors.append("an input file is required")
    if getattr(args, "random", None) and args.input is not None:
        errors.append("give either an input file or --random, not both")
    if cmd in ("partition", "sanitize") and args.epsilon is None:
        errors.append("--epsilon is required")
    if cmd == "sanitize" and args.alpha and len(args.alpha) > 1:
        errors.append("sanitize takes a single --alpha")
    if cmd == "verify":
        if (args.epsilon is None) == (args.high_risk is None):
            errors.append("give exactly one of --epsilon or --high-risk")
        if args.samples < 1:
            errors.append("--samples must be >= 1")
    if getattr(args, "epsilon", None) is not None and args.epsilon <= 0:
        errors.append("--epsilon must be > 0")
    needs_seed = cmd in ("verify", "compare-relax") or (cmd == "put-sweep" and args.random)
    if needs_seed and args.seed is None:
        errors.append("--seed is required for randomized commands")
    if cmd == "compare-relax":
        if args.trials < 1:
            errors.append("--trials must be >= 1")
        if args.jobs < 1:
            errors.append("--jobs must be >= 1")
        if args.alpha and len(args.alpha) > 1:
            errors.append("compare-relax takes a single --alpha")
        if args.eps_bar <= 0:
            errors.append("--eps-bar must be > 0")
        if not 0 <= args.delta <= 1:
            errors.append("--delta must lie in [0, 1]")
        if args.eps_max < args.eps_bar:
            errors.append("--eps-max must be >= --eps-bar")
    if cmd == "example-surface" and args.rho_steps < 2:
        errors.append("--rho-steps must be >= 2")
    return errors


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    errors = _validate(args)
    if errors:
        parser.error("; ".join(errors))
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
