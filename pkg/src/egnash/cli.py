"""Command-line front end.

Exit status: 0 on success, 1 for usage errors, 2 for bad input data
(malformed files, out-of-range vertices, enumeration guard violations).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import dynamics, equilibria, sweep
from .equilibria import PureProfile
from .game import EgnInstance, InstanceError, load_instance
from .graph import Graph, GraphError, enumerate_independent_dominating_sets, parse_edge_list
from .report import bundled_path, to_dot

JOBS_ENV = "EGNASH_JOBS"

PROFILE_HELP = (
    "pure profile as a 0/1 string read left to right as players 1..N "
    "(1 = cooperate), e.g. 110 for players 1, 2 cooperating and 3 defecting"
)
SOURCE_HELP = (
    "instance JSON or edge-list file; 'bundled:NAME' selects a bundled file "
    "(caterpillar.json, er8.json, er8.edges)"
)


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _resolve(source: str) -> Path:
    if source.startswith("bundled:"):
        try:
            return bundled_path(source.split(":", 1)[1])
        except FileNotFoundError as exc:
            raise DataError(str(exc)) from None
    path = Path(source)
    if not path.is_file():
        raise DataError(f"{source}: no such file")
    return path


def _load_instance(source: str) -> EgnInstance:
    path = _resolve(source)
    if path.suffix != ".json":
        raise DataError(f"{source}: expected an instance JSON file")
    return load_instance(path)


def _load_graph(source: str) -> Graph:
    path = _resolve(source)
    if path.suffix == ".json":
        return load_instance(path).graph
    try:
        return parse_edge_list(path.read_text())
    except GraphError as exc:
        raise DataError(f"{source}: {exc}") from None


def _profile(text: str, n: int) -> PureProfile:
    try:
        p = PureProfile.from_bitstring(text)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    if p.n != n:
        raise DataError(f"profile {text!r} has {p.n} entries, instance has {n} players")
    return p


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{JOBS_ENV}={raw!r} is not an integer") from None


def cmd_classify(args) -> None:
    inst = _load_instance(args.instance)
    c = equilibria.classify_pure(inst, _profile(args.profile, inst.n))
    if args.json:
        _emit(json.dumps(c.to_dict(), indent=2) + "\n", args.output)
        return
    lines = [f"profile {c.profile.bitstring}: {c.verdict.value}"]
    for r in c.vertices:
        lines.append(
            f"  v{r.vertex:<3} {'C' if r.strategy else 'D'}  lambda={r.lam:+.6g}  "
            f"{r.status:<8} {r.condition}: {r.inequality}"
        )
    _emit("\n".join(lines) + "\n", args.output)


def cmd_enumerate(args) -> None:
    inst = _load_instance(args.instance)
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    rows = equilibria.enumerate_classified(inst, args.filter, prune=args.prune, jobs=jobs)
    if args.format == "json":
        text = json.dumps([c.to_dict() for _, c in rows], indent=2) + "\n"
    else:
        text = equilibria.classifications_csv(rows)
    _emit(text, args.output)
    print(f"{len(rows)} profile(s) matching filter '{args.filter}'", file=sys.stderr)


def cmd_sweep(args) -> None:
    g = _load_graph(args.graph)
    mode = {"exact": "exact-thresholds", "degree-ratios": "degree-ratios"}[args.mode]
    report = sweep.sweep_sne_counts(g, args.game, sweep.breakpoints(g, mode))
    _emit(sweep.render_sweep(report, args.format), args.output)


def cmd_ids(args) -> None:
    g = _load_graph(args.graph)
    sets = enumerate_independent_dominating_sets(g)
    _emit("".join(" ".join(map(str, sorted(s))) + "\n" for s in sets), args.output)
    print(f"{len(sets)} independent dominating set(s)", file=sys.stderr)


def cmd_simulate(args) -> None:
    inst = _load_instance(args.instance)
    try:
        cfg = dynamics.TrajectoryConfig(args.dt, args.t_end, args.tol, args.stride)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.basin is not None:
        if args.basin <= 0:
            raise UsageError("--basin needs a positive sample count")
        report = dynamics.basin_probe(inst, args.basin, args.seed, cfg)
        _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.output)
        return
    if args.x0 is not None:
        try:
            x0 = np.array([float(t) for t in args.x0.split(",")])
        except ValueError:
            raise DataError(f"--x0 {args.x0!r}: expected comma-separated numbers") from None
        if x0.shape != (inst.n,) or np.any(x0 < 0) or np.any(x0 > 1):
            raise DataError(f"--x0 must list {inst.n} values in [0, 1]")
    elif args.profile is not None:
        p = _profile(args.profile, inst.n)
        coords = None
        if args.coords:
            try:
                coords = [int(t) for t in args.coords.split(",")]
            except ValueError:
                raise DataError(f"--coords {args.coords!r}: expected comma-separated vertices") from None
            if any(not 1 <= v <= inst.n for v in coords):
                raise DataError(f"--coords must name vertices in 1..{inst.n}")
        x0 = dynamics.perturb_inward(p, args.delta, coords)
    else:
        raise UsageError("simulate needs --profile, --x0 or --basin")
    traj = dynamics.integrate(inst, x0, cfg)
    _emit(traj.to_csv(), args.output)
    if traj.converged_to is not None:
        print(f"converged to {traj.converged_to.bitstring}", file=sys.stderr)
    else:
        print("did not converge to a pure profile", file=sys.stderr)


def cmd_export_dot(args) -> None:
    g = _load_graph(args.source)
    _emit(to_dot(g, _profile(args.profile, g.n)), args.output)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="egnash",
        description="Pure (strict) Nash equilibria of evolutionary games on networks.",
        epilog=f"Profile bitstrings: {PROFILE_HELP}.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="classify one pure profile")
    p.add_argument("instance", help=SOURCE_HELP)
    p.add_argument("profile", help=PROFILE_HELP)
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("enumerate", help="list all pure profiles matching a filter")
    p.add_argument("instance", help=SOURCE_HELP)
    p.add_argument("--filter", choices=("sne", "ne", "all"), default="sne")
    p.add_argument("--prune", action="store_true", help="skip profiles failing necessary conditions")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=int, help=f"worker processes (default ${JOBS_ENV} or 1)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sweep", help="SNE/NE counts over the common ratio R")
    p.add_argument("graph", help=SOURCE_HELP)
    p.add_argument("--game", choices=sweep.GAME_CLASSES, default="anti-coordination")
    p.add_argument("--mode", choices=("exact", "degree-ratios"), default="exact")
    p.add_argument("--format", choices=("csv", "text"), default="csv")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("ids", help="list independent dominating sets")
    p.add_argument("graph", help=SOURCE_HELP)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_ids)

    p = sub.add_parser("simulate", help="integrate the replicator flow (RK4)")
    p.add_argument("instance", help=SOURCE_HELP)
    p.add_argument("--profile", help="start near this pure profile; " + PROFILE_HELP)
    p.add_argument("--delta", type=float, default=1e-3, help="inward perturbation of --profile")
    p.add_argument("--coords", help="comma-separated vertices to perturb (default all)")
    p.add_argument("--x0", help="explicit comma-separated initial state")
    p.add_argument("--basin", type=int, metavar="SAMPLES", help="basin probe instead of one trajectory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--t-end", type=float, default=200.0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--stride", type=int, default=100, help="record every STRIDE steps")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("export-dot", help="DOT graph coloured by a profile")
    p.add_argument("source", help=SOURCE_HELP)
    p.add_argument("profile", help=PROFILE_HELP)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"egnash: error: {exc}", file=sys.stderr)
        return 1
    except (DataError, InstanceError, GraphError, equilibria.EnumerationGuardError, OSError) as exc:
        print(f"egnash: error: {exc}", file=sys.stderr)
        return 2
    except dynamics.IntegrationError as exc:
        print(f"egnash: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
