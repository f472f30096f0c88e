"""Command-line front end.

Exit status: 0 on success, 1 when the instance (or reduced model) has no
solution, 2 on usage, input or validation errors.  Report rows go to stdout
as CSV (or to ``--csv``); messages go to stderr.  Defaults for the common
flags can be set through ``GSPP_*`` environment variables; flags win.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .core import Instance, format_cost, parse_cost, validate_instance
from .errors import GSPPError, InfeasibleError
from .exact import INFEASIBLE, NO_INCUMBENT_TIMEOUT, export_lp, solve
from .formats import SolutionRecord, dumps_solution, read_instance, write_instance
from .matheuristic import RankingParams, matheuristic_solve, rank_variables
from .reduction import reduce
from .relaxation import bound_report
from .report import RunReport, plot_bounds, plot_sweep, reports_to_csv

EXIT_OK, EXIT_NO_SOLUTION, EXIT_USAGE = 0, 1, 2


class _Usage(Exception):
    pass


def _env(name: str, default: str) -> str:
    return os.environ.get(f"GSPP_{name}", default)


def _env_float(name: str, default: float | None) -> float | None:
    v = os.environ.get(f"GSPP_{name}")
    if v is None or v == "":
        return default
    try:
        return float(v)
    except ValueError:
        raise _Usage(f"GSPP_{name}={v!r} is not a number") from None


def _env_int(name: str, default: int) -> int:
    v = os.environ.get(f"GSPP_{name}")
    if v is None or v == "":
        return default
    try:
        return int(v)
    except ValueError:
        raise _Usage(f"GSPP_{name}={v!r} is not an integer") from None


def _csv_list(kind):
    def conv(text: str):
        try:
            return [kind(x) for x in text.split(",") if x.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None

    return conv


def _load(path: str) -> Instance:
    try:
        inst = read_instance(path)
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None
    rep = validate_instance(inst)
    if not rep.ok:
        raise _Usage(f"{path}: invalid instance\n{rep}")
    return inst


def _emit(args, reports: list[RunReport]) -> None:
    if not args.timings:
        for r in reports:
            r.t_rank = r.t_total = None
    text = reports_to_csv(reports)
    if args.csv:
        Path(args.csv).write_text(text)
    else:
        sys.stdout.write(text)


def _solution_file(path: str | None, inst: Instance, status: str, sol) -> None:
    if not path:
        return
    chosen = {} if sol is None else dict(sol.chosen)
    rec = SolutionRecord(
        inst.name,
        status,
        None if sol is None else sol.cost,
        sol is not None,
        chosen,
        {t: inst.assignments[j].source for t, j in chosen.items()},
    )
    Path(path).write_text(dumps_solution(rec))


def _base_report(inst: Instance, command: str, seed: int) -> RunReport:
    return RunReport(inst.name, command, inst.n_tasks, inst.n_assignments, inst.scale, seed=seed)


# ------------------------------------------------------------------ commands


def cmd_validate(args) -> int:
    try:
        inst = read_instance(args.instance)
    except OSError as exc:
        raise _Usage(f"cannot read {args.instance}: {exc.strerror}") from None
    rep = validate_instance(inst)
    print(f"{args.instance}: {rep}", file=sys.stderr if not rep.ok else sys.stdout)
    return EXIT_OK if rep.ok else EXIT_USAGE


def cmd_bounds(args) -> int:
    reports = []
    infeasible = False
    for path in args.instances:
        inst = _load(path)
        b = bound_report(inst, engine=args.engine)
        r = _base_report(inst, "bounds", args.seed)
        r.trivial, r.lb1, r.lb2 = b.trivial, b.lb1, b.lb2
        r.status = "infeasible" if b.infeasible else "ok"
        r.t_total = sum(b.timings.values())
        infeasible |= b.infeasible
        reports.append(r)
    _emit(args, reports)
    if args.plot:
        plot_bounds(reports, args.plot)
    return EXIT_NO_SOLUTION if infeasible else EXIT_OK


def cmd_reduce(args) -> int:
    inst = _load(args.instance)
    try:
        ub = parse_cost(args.ub, inst.scale)
    except GSPPError as exc:
        raise _Usage(str(exc)) from None
    try:
        res = reduce(inst, ub, fixpoint=args.fixpoint, engine=args.engine)
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    if args.output:
        write_instance(res.reduced, args.output)
    r = _base_report(inst, "reduce", args.seed)
    r.kept_pct = 100.0 * res.kept_fraction
    r.status = f"removed-{len(res.removed)}"
    r.t_total = res.stats["time"]
    print(
        f"{inst.name}: {inst.n_assignments} -> {res.reduced.n_assignments} assignments "
        f"(kept {r.kept_pct:.2f}%) with ub {format_cost(ub, inst.scale)}",
        file=sys.stderr,
    )
    _emit(args, [r])
    return EXIT_OK


def _mh_report(inst, res, params, seed, optimum) -> RunReport:
    r = _base_report(inst, "matheuristic", seed)
    r.lb2 = None if res.lb2 is None or res.lb2 == float("inf") else res.lb2
    r.z = optimum
    r.z_bar = res.ub
    r.kept_pct = 100.0 * res.kept_fraction
    r.sigma, r.mu = params.sigma, params.mu
    r.status = res.status
    r.nodes = res.nodes
    r.t_rank = res.timings.get("rank")
    r.t_total = sum(res.timings.values())
    r.set_gap()
    return r


def cmd_matheuristic(args) -> int:
    inst = _load(args.instance)
    params = RankingParams(args.sigma, args.mu, args.time_limit)
    res = matheuristic_solve(inst, params, engine=args.engine)
    optimum = None if args.optimum is None else parse_cost(args.optimum, inst.scale)
    _solution_file(args.output, inst, res.status, res.solution)
    _emit(args, [_mh_report(inst, res, params, args.seed, optimum)])
    return EXIT_NO_SOLUTION if res.solution is None else EXIT_OK


def cmd_solve(args) -> int:
    inst = _load(args.instance)
    res = solve(inst, args.time_limit, warm_start=not args.no_warm_start, engine=args.engine)
    _solution_file(args.output, inst, res.status, res.solution)
    r = _base_report(inst, "solve", args.seed)
    if res.status == "optimal":
        r.z = res.cost
    r.z_bar = res.cost
    r.status = res.status
    r.nodes = res.nodes
    r.t_total = res.wall_time
    r.set_gap()
    _emit(args, [r])
    return EXIT_NO_SOLUTION if res.status in (INFEASIBLE, NO_INCUMBENT_TIMEOUT) else EXIT_OK


def _write_generated(args, inst: Instance, params_text: str) -> int:
    write_instance(inst, args.output)
    if args.params_out:
        Path(args.params_out).write_text(params_text)
    rep = validate_instance(inst)
    print(f"{args.output}: {inst.n_tasks} tasks, {inst.n_assignments} assignments", file=sys.stderr)
    if not rep.ok:
        print(str(rep), file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def _read_params(path):
    from .apps import read_params

    try:
        return read_params(path)
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


def cmd_gen_sched(args) -> int:
    from .apps import SchedParams, enumerate_scheduling, random_sched_params

    if args.params:
        p = SchedParams.from_mapping(_read_params(args.params))
        name = args.name or Path(args.params).stem
    else:
        if args.jobs is None:
            raise _Usage("give a parameter file or --jobs")
        p = random_sched_params(args.jobs, args.machines, args.horizon, args.seed)
        name = args.name or f"sched-n{args.jobs}-s{args.seed}"
    return _write_generated(args, enumerate_scheduling(p, name), p.to_text())


def cmd_gen_bacap(args) -> int:
    from .apps import BacapParams, enumerate_bacap, random_bacap_params

    if args.params:
        p = BacapParams.from_mapping(_read_params(args.params))
        name = args.name or Path(args.params).stem
    else:
        if args.vessels is None:
            raise _Usage("give a parameter file or --vessels")
        kw = {
            k: getattr(args, k)
            for k in ("positions", "slots", "cranes", "berth_window", "start_window")
            if getattr(args, k) is not None
        }
        p = random_bacap_params(args.vessels, args.seed, **kw)
        name = args.name or f"bacap-v{args.vessels}-s{args.seed}"
    return _write_generated(args, enumerate_bacap(p, name), p.to_text())


def cmd_crew_lb2(args) -> int:
    from .apps import CrewInstance, crew_lb2

    ci = CrewInstance.from_mapping(_read_params(args.params))
    try:
        bound = crew_lb2(ci)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    print(f"{bound.numerator}/{bound.denominator}" if bound.denominator != 1 else str(bound.numerator))
    return EXIT_OK


def cmd_export_lp(args) -> int:
    inst = _load(args.instance)
    if args.output:
        export_lp(inst, args.output)
    else:
        export_lp(inst, sys.stdout)
    return EXIT_OK


def cmd_sweep(args) -> int:
    root = Path(args.directory)
    if not root.is_dir():
        raise _Usage(f"{root} is not a directory")
    files = sorted(root.glob("*.gspp"))
    if not files:
        raise _Usage(f"no .gspp files in {root}")
    reports = []
    for path in files:
        inst = _load(str(path))
        delta = rank_variables(inst, engine=args.engine)
        b = bound_report(inst, engine=args.engine)
        optimum = None
        if args.reference == "exact":
            ref = solve(inst, args.reference_time_limit, engine=args.engine)
            optimum = ref.cost if ref.status == "optimal" else None
        for sigma in sorted(args.sigma):
            for mu in sorted(args.mu):
                params = RankingParams(sigma, mu, args.time_limit)
                res = matheuristic_solve(inst, params, engine=args.engine, delta=delta)
                r = _mh_report(inst, res, params, args.seed, optimum)
                r.trivial, r.lb1, r.lb2 = b.trivial, b.lb1, b.lb2
                r.set_gap()
                reports.append(r)
        print(f"{path.name}: done", file=sys.stderr)
    reports.sort(key=lambda r: (r.instance, r.sigma, r.mu))
    _emit(args, reports)
    if args.plot:
        plot_sweep(reports, args.plot)
    return EXIT_OK


# -------------------------------------------------------------------- parser


def _show_defaults(parser: argparse.ArgumentParser) -> None:
    """Give every option without help text a line showing its default."""
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for child in action.choices.values():
                _show_defaults(child)
        elif action.option_strings and action.help is None and action.nargs != 0:
            action.help = "(default: %(default)s)"


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="gspp",
        description="Bounds, reduction, matheuristic and exact solving for set partitioning with packing rows.",
        formatter_class=fmt,
    )
    parser.add_argument("--version", action="version", version=f"gspp {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--engine", choices=("auto", "python", "compiled"), default=_env("ENGINE", "auto"))
    common.add_argument("--seed", type=int, default=_env_int("SEED", 0), help="recorded in every report row")
    common.add_argument("--csv", help="write report rows here instead of stdout")
    common.add_argument(
        "--timings",
        action="store_true",
        default=_env("TIMINGS", "") not in ("", "0"),
        help="fill the wall-clock columns (rows are then no longer reproducible)",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text, formatter_class=fmt)
        p.set_defaults(func=fn)
        return p

    p = add("validate", cmd_validate, "check an instance file")
    p.add_argument("instance")

    p = add("bounds", cmd_bounds, "trivial, conflict-graph and pair-graph bounds")
    p.add_argument("instances", nargs="+")
    p.add_argument("--plot", help="also render a bar chart (PNG) here")

    p = add("reduce", cmd_reduce, "drop assignments whose probe bound exceeds an upper bound")
    p.add_argument("instance")
    p.add_argument("--ub", required=True, help="cost of a known feasible solution")
    p.add_argument("--fixpoint", action="store_true", help="repeat passes until nothing is removed")
    p.add_argument("-o", "--output", help="write the reduced instance here")

    tl = _env_float("TIME_LIMIT", None)
    p = add("matheuristic", cmd_matheuristic, "rank, select and solve a reduced model")
    p.add_argument("instance")
    p.add_argument("--sigma", type=float, default=_env_float("SIGMA", 0.1))
    p.add_argument("--mu", type=int, default=_env_int("MU", 2000))
    p.add_argument("--time-limit", type=float, default=tl, help="seconds for the reduced solve")
    p.add_argument("--optimum", help="known optimum, for the gap column")
    p.add_argument("-o", "--output", help="write the solution file here")

    p = add("solve", cmd_solve, "solve exactly by branch-and-bound")
    p.add_argument("instance")
    p.add_argument("--time-limit", type=float, default=tl)
    p.add_argument("--no-warm-start", action="store_true", help="skip the heuristic incumbent")
    p.add_argument("-o", "--output", help="write the solution file here")

    p = add("gen-sched", cmd_gen_sched, "build a machine scheduling instance")
    p.add_argument("params", nargs="?", help="parameter file (otherwise random from --seed)")
    p.add_argument("--jobs", type=int, help="number of jobs (required without a parameter file)")
    p.add_argument("--machines", type=int, default=2)
    p.add_argument("--horizon", type=int, default=8)
    p.add_argument("--name", help="instance name (derived from the size and seed when omitted)")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--params-out", help="also write the parameters used")

    p = add("gen-bacap", cmd_gen_bacap, "build a berth and crane allocation instance")
    p.add_argument("params", nargs="?", help="parameter file (otherwise random from --seed)")
    p.add_argument("--vessels", type=int, help="number of vessels (required without a parameter file)")
    p.add_argument("--positions", type=int, help="berth positions (generator default 20)")
    p.add_argument("--slots", type=int, help="time slots (generator default 8 per vessel + 16)")
    p.add_argument("--cranes", type=int, help="crane pool size (generator default 8)")
    p.add_argument("--berth-window", type=int, help="positions either side of the preferred berth, -1 for all (generator default 3)")
    p.add_argument("--start-window", type=int, help="slots after arrival a vessel may start, -1 for all (generator default 8)")
    p.add_argument("--name", help="instance name (derived from the size and seed when omitted)")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--params-out", help="also write the parameters used")

    p = add("crew-lb2", cmd_crew_lb2, "matching bound for a crew recovery parameter file")
    p.add_argument("params")

    p = add("export-lp", cmd_export_lp, "write the binary program in LP format")
    p.add_argument("instance")
    p.add_argument("-o", "--output", help="destination (stdout when omitted)")

    p = add("sweep", cmd_sweep, "run a sigma x mu grid over every .gspp file in a directory")
    p.add_argument("directory")
    p.add_argument("--sigma", type=_csv_list(float), default=_csv_list(float)(_env("SWEEP_SIGMA", "0.0,0.1,0.2,0.3")))
    p.add_argument("--mu", type=_csv_list(int), default=_csv_list(int)(_env("SWEEP_MU", "5,10,20")))
    p.add_argument("--time-limit", type=float, default=tl, help="seconds per reduced solve")
    p.add_argument("--reference", choices=("exact", "lb2"), default=_env("REFERENCE", "exact"))
    p.add_argument("--reference-time-limit", type=float, default=_env_float("REFERENCE_TIME_LIMIT", None))
    p.add_argument("--plot", help="also render the gap / kept heatmaps (PNG) here")
    _show_defaults(parser)
    return parser


def run(argv: list[str] | None = None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except (_Usage, GSPPError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
