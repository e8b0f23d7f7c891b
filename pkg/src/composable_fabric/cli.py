"""Batch experiment runner.

Subcommands::

    validate    --scenario PATH
    place       --scenario PATH --workloads PATH|table1 [--allow-heuristic]
    throughput  --demand PATH --design targeted|generic
    cost-sweep  --n A..B --y A..B
    scenarios   --out DIR

Results go to ``--out`` (stdout when omitted).  Failures exit nonzero and
print one JSON error record on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .composer import EXACT_MAX_APPS, EXACT_MAX_COMPONENTS, place_all
from .cost import CostParams, sweep, sweep_csv
from .fabric import (
    DemandError,
    GenericFabric,
    PlanError,
    TargetedFabric,
    WavelengthPlan,
    load_demand,
    max_throughput_generic,
    max_throughput_targeted,
)
from .scenarios import emit_builtin_scenarios
from .topology import ConfigurationError, DisaggregationConfig, load_scenario, validate_dc
from .workload import WorkloadError, load_workloads

EXIT_INVALID = 1
EXIT_INPUT = 2
EXIT_BOUND = 3


class CliError(Exception):
    def __init__(self, kind: str, message: str, status: int = EXIT_INPUT):
        super().__init__(message)
        self.kind = kind
        self.status = status


def parse_range(text: str) -> list[int]:
    """``"2..64"`` (inclusive), ``"1,5,9"`` or a single integer."""
    items = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError(f"empty range {part!r}")
            items.extend(range(lo, hi + 1))
        else:
            items.append(int(part))
    return items


def _int_set(text: str) -> frozenset[int]:
    return frozenset(int(x) for x in text.split(",") if x.strip())


def _write(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


def _sibling(out: str, suffix: str) -> Path:
    p = Path(out)
    return p.with_name(p.stem + suffix)


def _load_scenario(args) -> tuple:
    if not args.scenario:
        raise CliError("usage", "--scenario is required")
    try:
        dc, cfg = load_scenario(args.scenario)
    except FileNotFoundError:
        raise CliError("io", f"scenario file not found: {args.scenario}") from None
    except ValueError as exc:
        raise CliError("parse", f"{args.scenario}: {exc}") from None
    cfg = DisaggregationConfig(args.mode or cfg.mode, args.physical_scale or cfg.physical_scale)
    return dc, cfg


def cmd_validate(args) -> int:
    dc, cfg = _load_scenario(args)
    result = validate_dc(dc, cfg)
    _write(args.out, json.dumps(result.to_dict(), indent=2) + "\n")
    return 0 if result.ok else EXIT_INVALID


def cmd_place(args) -> int:
    dc, cfg = _load_scenario(args)
    try:
        ws = load_workloads(args.workloads)
    except FileNotFoundError:
        raise CliError("io", f"workload file not found: {args.workloads}") from None
    except WorkloadError as exc:
        raise CliError("parse", f"{args.workloads}: {exc}") from None
    result = validate_dc(dc, cfg)
    if not result.ok:
        raise CliError("invariant", "; ".join(f"{v.entity}: {v.message}" for v in result.violations),
                       EXIT_INVALID)
    n_comp = dc.n_components
    if (n_comp > EXACT_MAX_COMPONENTS or len(ws) > EXACT_MAX_APPS) and not args.allow_heuristic:
        raise CliError("bound", f"{n_comp} components / {len(ws)} apps exceeds the exact solver "
                                f"bound ({EXACT_MAX_COMPONENTS} / {EXACT_MAX_APPS}); "
                                "pass --allow-heuristic", EXIT_BOUND)
    report = place_all(ws, dc, cfg)
    _write(args.out, report.to_json())
    if args.out:
        _sibling(args.out, ".csv").write_text(report.to_csv(ws.names))
    return 0


def cmd_throughput(args) -> int:
    if not args.demand:
        raise CliError("usage", "--demand is required")
    try:
        d = load_demand(args.demand)
    except FileNotFoundError:
        raise CliError("io", f"demand file not found: {args.demand}") from None
    except DemandError as exc:
        raise CliError("parse", f"{args.demand}: {exc}") from None
    try:
        if args.design == "generic":
            report = max_throughput_generic(GenericFabric(d.n_nodes, args.cap), d)
        else:
            plan = None
            if args.lambda_a or args.lambda_b:
                default = WavelengthPlan.default(args.t)
                plan = WavelengthPlan(_int_set(args.lambda_a) if args.lambda_a else default.lambda_a,
                                      _int_set(args.lambda_b) if args.lambda_b else default.lambda_b)
            fabric = TargetedFabric(d.n_nodes, args.t, args.rate, plan)
            report = max_throughput_targeted(fabric, d, strategy=args.strategy)
    except PlanError as exc:
        raise CliError("invariant", f"wavelength plan: {exc}", EXIT_INVALID) from None
    except (DemandError, ValueError) as exc:
        raise CliError("input", str(exc)) from None
    _write(args.out, report.to_json())
    if args.out and args.design == "targeted":
        _sibling(args.out, "_schedule.csv").write_text(report.schedule_csv())
    return 0


def cmd_cost_sweep(args) -> int:
    try:
        ns, ys = parse_range(args.n), parse_range(args.y)
        base = CostParams(n_nodes=max(2, min(ns, default=2)), generic_cap_gbps=args.cap,
                          targeted_t=args.t, targeted_rate_gbps=args.rate)
        if any(n < 2 for n in ns) or any(y <= 0 for y in ys):
            raise ValueError("node counts must be >= 2 and prices positive")
    except ValueError as exc:
        raise CliError("input", str(exc)) from None
    _write(args.out, sweep_csv(sweep(ns, ys, base)))
    return 0


def cmd_scenarios(args) -> int:
    out = args.out or "scenarios"
    try:
        paths = emit_builtin_scenarios(out)
    except OSError as exc:
        raise CliError("io", str(exc)) from None
    for p in paths:
        print(p)
    return 0


def _number(text: str):
    value = float(text)
    return int(value) if value.is_integer() else value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="composable-fabric", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output path (stdout when omitted)")
        p.add_argument("--allow-heuristic", action="store_true",
                       help="fall back to first-fit decreasing above the exact bound")

    def scenario_flags(p):
        p.add_argument("--scenario", help="scenario JSON file")
        p.add_argument("--mode", choices=["physical", "logical", "hybrid", "none"],
                       help="override the scenario's disaggregation mode")
        p.add_argument("--physical-scale", choices=["rack", "pod", "dc"],
                       help="override the scenario's physical scale")

    p = sub.add_parser("validate", help="check a scenario file")
    scenario_flags(p)
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("place", help="place workloads on a scenario")
    scenario_flags(p)
    p.add_argument("--workloads", default="table1", help="workload CSV or 'table1'")
    common(p)
    p.set_defaults(func=cmd_place)

    p = sub.add_parser("throughput", help="maximum carried traffic for a demand matrix")
    p.add_argument("--demand", help="demand matrix CSV")
    p.add_argument("--design", choices=["targeted", "generic"], default="targeted")
    p.add_argument("--t", type=int, default=4, help="transceivers per interface")
    p.add_argument("--rate", type=_number, default=100, help="Gbps per wavelength")
    p.add_argument("--cap", type=_number, default=800, help="generic link capacity, Gbps")
    p.add_argument("--lambda-a", help="comma-separated wavelength ids of interface 1")
    p.add_argument("--lambda-b", help="comma-separated wavelength ids of interface 2")
    p.add_argument("--strategy", choices=["exact", "greedy"], default="exact")
    common(p)
    p.set_defaults(func=cmd_throughput)

    p = sub.add_parser("cost-sweep", help="CAPEX and cost ratio over N and Y")
    p.add_argument("--n", default="2..64", help="node counts, e.g. 2..64")
    p.add_argument("--y", default="1..40", help="targeted $/Gbps values, e.g. 1..40")
    p.add_argument("--t", type=int, default=4)
    p.add_argument("--rate", type=_number, default=100)
    p.add_argument("--cap", type=_number, default=800)
    common(p)
    p.set_defaults(func=cmd_cost_sweep)

    p = sub.add_parser("scenarios", help="write the built-in scenario files")
    common(p)
    p.set_defaults(func=cmd_scenarios)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        record = {"error": exc.kind, "message": str(exc), "command": args.command}
        print(json.dumps(record), file=sys.stderr)
        return exc.status
    except ConfigurationError as exc:
        print(json.dumps({"error": "invariant", "message": str(exc), "command": args.command}),
              file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
