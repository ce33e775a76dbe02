"""Command-line front end.

Exit codes: 0 ok, 1 usage error, 2 invalid state, 3 oracle gap too large,
4 ordering violation found, 5 empty level set, 6 selftest failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import channels, geometry, io, measures, ordering, qstate
from .selftest import SelftestConfig, run_selftest

EXIT_OK, EXIT_USAGE, EXIT_STATE, EXIT_GAP, EXIT_ORDER, EXIT_EMPTY, EXIT_SELFTEST = range(7)

ORACLE_TOLERANCE = {"c_l1": 1e-12, "c_re": 1e-10, "discord": 2e-3, "geo_discord": 1e-3}
DEFAULT_N = {"pairs": 10_000, "sequence": 500, "ray": 64}
CHANNELS = {"depolarizing": "depolarizing_A", "phaseflip": "phase_flip_both"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


FORMATS = {"evolve": "csv", "contour": "csv", "isosurface": "mesh"}


@dataclass
class RunConfig:
    subcommand: str
    options: dict = field(default_factory=dict)
    output_path: str | None = None
    format: str = "json"
    seed: int = 0


def parse_config(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    options = vars(args).copy()
    sub = options.pop("subcommand")
    return RunConfig(
        subcommand=sub,
        options=options,
        output_path=options.get("out"),
        format=FORMATS.get(sub, "json"),
        seed=options.get("seed") or 0,
    )


def _triple(text: str) -> tuple:
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated numbers")
    return tuple(parts)


def _dims(text: str) -> tuple:
    parts = [int(x) for x in text.split(",")]
    if len(parts) == 1:
        parts = parts * 3
    if len(parts) != 3 or min(parts) < 2:
        raise argparse.ArgumentTypeError("dims must be N or NX,NY,NZ with each >= 2")
    return tuple(parts)


def _add_state(p):
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, required=True)
    p.add_argument("--c3", type=float, required=True)


def build_parser() -> _Parser:
    parser = _Parser(prog="belltet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("measure", help="closed-form measures of one state")
    _add_state(p)

    p = sub.add_parser("oracle", help="closed form vs definition-based oracle")
    _add_state(p)
    p.add_argument("--measure", required=True)
    p.add_argument("--grid-n", type=int, default=96)

    p = sub.add_parser("evolve", help="channel trajectory as CSV")
    _add_state(p)
    p.add_argument("--channel", choices=sorted(CHANNELS), required=True)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--t-max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--out")

    p = sub.add_parser("ordering", help="compare the orderings of two measures")
    p.add_argument("--measure-a", required=True)
    p.add_argument("--measure-b", required=True)
    p.add_argument("--mode", choices=("pairs", "sequence", "ray"), default="pairs")
    p.add_argument("--n", type=int, help="samples (defaults: pairs 10000, sequence 500, ray 64)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--direction", type=_triple, help="ray direction c1,c2,c3")
    p.add_argument("--csv", help="write the sorted sequence (sequence mode)")

    p = sub.add_parser("contour", help="contour polylines on a c3 slice")
    p.add_argument("--measure", required=True)
    p.add_argument("--level", type=float, default=0.03)
    p.add_argument("--c3", type=float, default=0.0)
    p.add_argument("--dims", type=int, default=201)
    p.add_argument("--out")

    p = sub.add_parser("isosurface", help="level-surface mesh")
    p.add_argument("--measure", required=True)
    p.add_argument("--level", type=float, default=0.03)
    p.add_argument("--dims", type=_dims, default=(81, 81, 81))
    p.add_argument("--out")

    p = sub.add_parser("selftest", help="run the invariant suite at reduced size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--literal-depolarizing", action="store_true",
                   help="use the non-trace-preserving depolarizing weights")
    p.add_argument("--out")
    return parser


def _state(args) -> qstate.BellDiagonalState:
    return qstate.BellDiagonalState(args.c1, args.c2, args.c3)


def _measure_name(name: str) -> str:
    if name not in measures.MEASURES:
        raise UsageError(f"unknown measure {name!r}; choose from {', '.join(sorted(measures.MEASURES))}")
    return name


def _emit(obj, out) -> None:
    out.write(io.dumps(obj))


def cmd_measure(args, out) -> int:
    _emit(measures.measure_all(_state(args)).to_dict(), out)
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    name = _measure_name(args.measure)
    if args.grid_n < 2:
        raise UsageError("--grid-n must be at least 2")
    s = _state(args)
    rho = qstate.density_matrix(s)
    closed = float(measures.evaluate(name, s.c))
    oracle = {
        "c_l1": lambda: measures.coherence_l1_oracle(rho),
        "c_re": lambda: measures.coherence_rel_entropy_oracle(rho),
        "discord": lambda: measures.discord_oracle(rho, args.grid_n),
        "geo_discord": lambda: measures.geometric_discord_oracle(rho),
    }[name]()
    gap = abs(closed - oracle)
    _emit({"measure": name, "state": s.to_dict(), "closed_form": closed, "oracle": oracle,
           "gap": gap, "tolerance": ORACLE_TOLERANCE[name]}, out)
    return EXIT_OK if gap < ORACLE_TOLERANCE[name] else EXIT_GAP


def cmd_evolve(args, out) -> int:
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    if args.gamma <= 0 or args.t_max <= 0:
        raise UsageError("--gamma and --t-max must be positive")
    s0 = _state(args)
    schedule = channels.NoiseSchedule.linspace(args.gamma, args.t_max, args.steps)
    traj = channels.trajectory(s0, CHANNELS[args.channel], schedule)
    text = io.trajectory_to_csv(traj)
    if args.out:
        io.atomic_write(args.out, text)
        _emit({"out": args.out, "rows": len(traj.samples)}, out)
    else:
        out.write(text)
    return EXIT_OK


def cmd_ordering(args, out) -> int:
    a, b = _measure_name(args.measure_a), _measure_name(args.measure_b)
    n = args.n if args.n is not None else DEFAULT_N[args.mode]
    if n < 2 or (args.mode == "ray" and n < 3):
        raise UsageError("--n is too small")
    result: dict = {"mode": args.mode}
    if args.mode == "pairs":
        ray = geometry.Ray.through(args.direction) if args.direction else None
        verdict = ordering.find_counterexample(a, b, n, args.seed, ray=ray)
        result.update(verdict.to_dict())
        same = verdict.same_ordering
    elif args.mode == "sequence":
        states = qstate.random_correlations(n, args.seed)
        report = ordering.sequence_scan(a, b, states)
        result.update(report.to_dict())
        result["same_ordering"] = same = not report.violations
        if args.csv:
            io.atomic_write(args.csv, io.sequence_to_csv(report))
            result["csv"] = args.csv
    else:
        if args.direction is None:
            raise UsageError("--mode ray needs --direction")
        verdict = ordering.ray_ordering_check(geometry.Ray.through(args.direction), a, b, n)
        result.update(verdict.to_dict())
        result["direction"] = list(args.direction)
        same = verdict.same_ordering
    _emit(result, out)
    return EXIT_OK if same else EXIT_ORDER


def cmd_contour(args, out) -> int:
    name = _measure_name(args.measure)
    if args.dims < 2:
        raise UsageError("--dims must be at least 2")
    field_ = geometry.sample_slice(name, args.c3, (args.dims, args.dims))
    lines = geometry.contour_slice(field_, args.level)
    summary = {"measure": name, "level": args.level, "c3": args.c3,
               "n_polylines": len(lines), "n_points": int(sum(len(x) for x in lines))}
    if args.out:
        io.atomic_write(args.out, io.contours_to_csv(lines))
        summary["out"] = args.out
    _emit(summary, out)
    return EXIT_OK


def cmd_isosurface(args, out) -> int:
    name = _measure_name(args.measure)
    field_ = geometry.sample_field(name, args.dims)
    mesh = geometry.isosurface(field_, args.level)
    summary = {"measure": name, **io.mesh_sidecar(mesh, field_)}
    if args.out:
        obj = Path(args.out)
        io.atomic_write(obj.with_suffix(".json"), io.dumps(summary))
        io.atomic_write(obj, io.mesh_to_obj(mesh))
        summary["out"] = str(obj)
    _emit(summary, out)
    return EXIT_OK


def cmd_selftest(args, out) -> int:
    report = run_selftest(SelftestConfig(seed=args.seed, literal_depolarizing=args.literal_depolarizing))
    text = io.dumps(report)
    if args.out:
        io.atomic_write(args.out, text)
    out.write(text)
    return EXIT_OK if report["passed"] else EXIT_SELFTEST


COMMANDS = {
    "measure": cmd_measure,
    "oracle": cmd_oracle,
    "evolve": cmd_evolve,
    "ordering": cmd_ordering,
    "contour": cmd_contour,
    "isosurface": cmd_isosurface,
    "selftest": cmd_selftest,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        cfg = parse_config(argv)
        args = argparse.Namespace(**cfg.options)
        return COMMANDS[cfg.subcommand](args, out)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except qstate.OutsideTetrahedron as exc:
        err.write(f"invalid state: {exc}\n")
        return EXIT_STATE
    except geometry.EmptyLevelSet as exc:
        err.write(f"empty level set: {exc}\n")
        return EXIT_EMPTY
    except geometry.DegenerateRay as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
