"""Command-line interface.

Commands: scan-ch, scan-b, optimize, verify, mixture, finite-t, simulate.
Output is CSV (floats at 17 significant digits, deterministic row order,
trailing newline) or JSON (fixed key order, non-finite values rejected).
Exit codes: 0 success, 1 verification failure, 2 argument errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .analytic import BellSettings
from .bell import chsh_combination, optimize_violation, scan
from .fock import FockCutoff, unitary_block_dim
from .measurements import ApparatusSetting, DisplacementSetting, finite_t_noclick_povm, noclick_povm
from .montecarlo import (
    B_OUTCOME_LABELS,
    CH_OUTCOME_LABELS,
    SETTING_PAIR_LABELS,
    estimate,
    sample_counts,
)
from .states import singlet_state
from .verification import run_battery

HALF_PI = math.pi / 2.0


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _emit_csv(header: list[str], rows: list[list], path: str | None) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    _write(text, path)


def _check_finite_tree(obj) -> None:
    if isinstance(obj, float) and not math.isfinite(obj):
        raise ValueError(f"non-finite value {obj!r} in JSON output")
    if isinstance(obj, dict):
        for v in obj.values():
            _check_finite_tree(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _check_finite_tree(v)


def _emit_json(obj: dict, path: str | None) -> None:
    _check_finite_tree(obj)
    _write(json.dumps(obj, indent=2) + "\n", path)


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _add_output_args(p: argparse.ArgumentParser, default_format: str = "csv") -> None:
    p.add_argument("--output", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=default_format)


def _add_scan_args(p: argparse.ArgumentParser, j_max: float, steps: int) -> None:
    p.add_argument("--j-min", type=float, default=0.0)
    p.add_argument("--j-max", type=float, default=j_max)
    p.add_argument("--steps", type=int, default=steps)
    p.add_argument("--phi", type=float, default=HALF_PI)
    p.add_argument("--model", choices=("analytic", "numeric"), default="analytic")
    p.add_argument("--cutoff", type=int, default=32)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phasebell", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan-ch", help="CH combination over a J grid at fixed phi")
    _add_scan_args(p, j_max=1.2, steps=121)
    _add_output_args(p)

    p = sub.add_parser("scan-b", help="B combination over a J grid at fixed phi")
    _add_scan_args(p, j_max=1.0, steps=101)
    _add_output_args(p)

    p = sub.add_parser("optimize", help="locate the strongest violation over J at phi = pi/2")
    p.add_argument("--target", choices=("ch", "b"), required=True)
    p.add_argument("--j-min", type=float, default=0.0)
    p.add_argument("--j-max", type=float, default=None, help="default: 1.2 for ch, 0.6 for b")
    p.add_argument("--model", choices=("analytic", "numeric"), default="analytic")
    p.add_argument("--cutoff", type=int, default=32)
    p.add_argument("--grid-resolution", type=float, default=1e-4)
    _add_output_args(p, default_format="json")

    p = sub.add_parser("verify", help="run the oracle and invariant battery")
    p.add_argument("--cutoff", type=int, default=32)

    p = sub.add_parser("mixture", help="B for the entangled state vs the incoherent mixture")
    p.add_argument("--j-min", type=float, default=0.0)
    p.add_argument("--j-max", type=float, default=2.0)
    p.add_argument("--j-steps", type=int, default=201)
    p.add_argument("--phi-min", type=float, default=0.0)
    p.add_argument("--phi-max", type=float, default=math.pi)
    p.add_argument("--phi-steps", type=int, default=64)
    _add_output_args(p)

    p = sub.add_parser("finite-t", help="apparatus POVM deviation from the ideal displaced vacuum")
    p.add_argument("--alpha", type=float, default=1.0, help="target displacement amplitude")
    p.add_argument("--t", type=float, nargs="+", default=[0.9, 0.99, 0.999],
                   help="beam-splitter power transmissions, each in (0, 1)")
    p.add_argument("--cutoff", type=int, default=64)
    _add_output_args(p)

    p = sub.add_parser("simulate", help="Monte Carlo counting runs with CH/B estimates")
    p.add_argument("--target", choices=("ch", "b"), default="ch")
    p.add_argument("--j", type=float, default=None, help="default: the target's optimal intensity")
    p.add_argument("--phi", type=float, default=HALF_PI)
    p.add_argument("--shots", type=int, default=100000)
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--cutoff", type=int, default=32)
    p.add_argument("--eta-a", type=float, default=1.0)
    p.add_argument("--eta-b", type=float, default=1.0)
    p.add_argument("--threads", type=int, default=1)
    _add_output_args(p)

    return parser


def _cmd_scan(args, target: str) -> int:
    if args.j_max < args.j_min or args.steps < (1 if args.j_max == args.j_min else 2):
        print("error: invalid J range or steps", file=sys.stderr)
        return 2
    rows = scan(
        target,
        (args.j_min, args.j_max),
        (args.phi, args.phi),
        (args.steps, 1),
        model=args.model,
        cutoff=FockCutoff(args.cutoff),
    )
    name = "CH" if target == "ch" else "B"
    if args.format == "csv":
        _emit_csv(["J", name], [[j, v] for j, _, v in rows], args.output)
    else:
        _emit_json(
            {
                "target": target,
                "phi": args.phi,
                "model": args.model,
                "rows": [{"J": j, "value": v} for j, _, v in rows],
            },
            args.output,
        )
    return 0


def _cmd_optimize(args) -> int:
    j_max = args.j_max if args.j_max is not None else (1.2 if args.target == "ch" else 0.6)
    if j_max < args.j_min or args.j_min < 0:
        print("error: invalid J bounds", file=sys.stderr)
        return 2
    report = optimize_violation(
        args.target,
        (args.j_min, j_max),
        model=args.model,
        cutoff=FockCutoff(args.cutoff),
        grid_resolution=args.grid_resolution,
    )
    payload = {
        "target": report.target,
        "J_star": report.j_star,
        "phi_star": report.phi_star,
        "value": report.value_star,
        "evaluations": report.evaluations,
        "grid_resolution": report.grid_resolution,
    }
    if args.format == "json":
        _emit_json(payload, args.output)
    else:
        _emit_csv(list(payload.keys()), [list(payload.values())], args.output)
    return 0


def _cmd_verify(args) -> int:
    results = run_battery(FockCutoff(args.cutoff))
    width = max(len(r.name) for r in results)
    failures = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name:<{width}}  {r.detail}")
        failures += 0 if r.passed else 1
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 0 if failures == 0 else 1


def _cmd_mixture(args) -> int:
    if args.j_max < args.j_min or args.phi_max < args.phi_min:
        print("error: invalid ranges", file=sys.stderr)
        return 2
    singlet_rows = scan(
        "b", (args.j_min, args.j_max), (args.phi_min, args.phi_max),
        (args.j_steps, args.phi_steps),
    )
    mixture_rows = scan(
        "b", (args.j_min, args.j_max), (args.phi_min, args.phi_max),
        (args.j_steps, args.phi_steps), source="mixture",
    )
    rows = [
        [j, phi, vs, vm]
        for (j, phi, vs), (_, _, vm) in zip(singlet_rows, mixture_rows)
    ]
    if args.format == "csv":
        _emit_csv(["J", "phi", "B_singlet", "B_mixture"], rows, args.output)
    else:
        _emit_json(
            {"rows": [dict(zip(("J", "phi", "B_singlet", "B_mixture"), r)) for r in rows]},
            args.output,
        )
    return 0


def _cmd_finite_t(args) -> int:
    for t in args.t:
        if not (0.0 < t < 1.0):
            print(f"error: transmission {t} must lie in (0, 1)", file=sys.stderr)
            return 2
    cut = FockCutoff(args.cutoff)
    q_ref = noclick_povm(DisplacementSetting(args.alpha), cut).matrix
    k = unitary_block_dim(cut, args.alpha * 1.1)
    rows = []
    for t in args.t:
        gamma = args.alpha / math.sqrt(1.0 - t)
        app = ApparatusSetting(t, gamma)
        e0 = finite_t_noclick_povm(app, cut).matrix
        dev = float(abs(e0[:k, :k] - q_ref[:k, :k]).max())
        rows.append([t, gamma, dev])
    if args.format == "csv":
        _emit_csv(["T", "gamma", "max_deviation"], rows, args.output)
    else:
        _emit_json(
            {"alpha": args.alpha, "rows": [dict(zip(("T", "gamma", "max_deviation"), r)) for r in rows]},
            args.output,
        )
    return 0


# Frozen optima of the closed forms at phi = pi/2 (dense-grid + root refinement).
CH_OPTIMAL_J = 0.2600741892814
B_OPTIMAL_J = 0.10014818262288075


def _cmd_simulate(args) -> int:
    if args.shots < 1 or args.threads < 1:
        print("error: shots and threads must be >= 1", file=sys.stderr)
        return 2
    if not (0.0 <= args.eta_a <= 1.0 and 0.0 <= args.eta_b <= 1.0):
        print("error: detection efficiencies must lie in [0, 1]", file=sys.stderr)
        return 2
    j = args.j if args.j is not None else (CH_OPTIMAL_J if args.target == "ch" else B_OPTIMAL_J)
    if j < 0:
        print("error: J must be >= 0", file=sys.stderr)
        return 2
    cut = FockCutoff(args.cutoff)
    settings = BellSettings.from_intensity_phase(j, args.phi)
    eta = None if args.eta_a == 1.0 and args.eta_b == 1.0 else (args.eta_a, args.eta_b)
    counts = sample_counts(
        singlet_state(cut), settings, args.target, args.shots, args.seed, cut,
        eta=eta, threads=args.threads,
    )
    report = estimate(counts)
    outcome_labels = CH_OUTCOME_LABELS if args.target == "ch" else B_OUTCOME_LABELS
    if args.format == "csv":
        header = ["pair", *(f"n_{o}" for o in outcome_labels), "shots", "estimate", "std_error"]
        rows = [
            [SETTING_PAIR_LABELS[i], *counts.tallies[i].tolist(), args.shots,
             report.value, report.std_error]
            for i in range(4)
        ]
        _emit_csv(header, rows, args.output)
    else:
        _emit_json(
            {
                "mode": args.target,
                "J": j,
                "phi": args.phi,
                "shots": args.shots,
                "seed": args.seed,
                "eta": list(eta) if eta else [1.0, 1.0],
                "pairs": [
                    {"pair": SETTING_PAIR_LABELS[i],
                     "counts": dict(zip(outcome_labels, counts.tallies[i].tolist()))}
                    for i in range(4)
                ],
                "estimate": report.value,
                "std_error": report.std_error,
            },
            args.output,
        )
    return 0


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        if args.command == "scan-ch":
            return _cmd_scan(args, "ch")
        if args.command == "scan-b":
            return _cmd_scan(args, "b")
        if args.command == "optimize":
            return _cmd_optimize(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "mixture":
            return _cmd_mixture(args)
        if args.command == "finite-t":
            return _cmd_finite_t(args)
        if args.command == "simulate":
            return _cmd_simulate(args)
        print(f"error: unknown command {args.command!r}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
