"""Command-line entry point: ``stationarity <subcommand> <file> [options]``.

Exit codes: 0 analysis completed, 2 input error, 3 unavailable data
(missing Hessians or no symbolic block), 4 degenerate pivot.
"""
import argparse
import json
import os
import sys
from dataclasses import dataclass

from ..errors import DegenerateInput, HessianUnavailable, InputError, NotRepresentable
from ..model import parse_label
from ..multipliers import LIMITING, REGULAR
from ..second_order import SSOSC, DIRECTIONAL, UNIFORM
from . import report as rp
from .oracle import OracleUnavailable
from .problem import load_problem, parse_rational

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNAVAILABLE = 3
EXIT_DEGENERATE = 4

SUBCOMMANDS = ("classify", "cones", "multipliers", "second-order", "strong-m", "oracle")


def parse_vector(text):
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(not p for p in parts):
        raise InputError(f"malformed vector {text!r}")
    return tuple(parse_rational(p, "--direction") for p in parts)


def parse_core_set(text, point):
    labels = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            lb = parse_label(part)
        except ValueError as e:
            raise InputError(str(e)) from None
        if lb not in point.constraint_labels():
            raise InputError(f"unknown constraint {part!r} in --core-set")
        labels.add(lb)
    return frozenset(labels)


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("STATIONARITY_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"STATIONARITY_SEED must be an integer, got {env!r}") from None


def build_parser():
    ap = argparse.ArgumentParser(prog="stationarity", description="Exact stationarity analysis of MPEC points.")
    ap.add_argument("subcommand", choices=SUBCOMMANDS)
    ap.add_argument("file", help="problem file (JSON)")
    ap.add_argument("--direction", action="append", default=[], help="rational vector such as 0,1,1 or 1/2,0")
    ap.add_argument("--seed", type=int, default=None, help="seed for the pivot perturbation (env STATIONARITY_SEED)")
    ap.add_argument("--mode", choices=(DIRECTIONAL, UNIFORM, SSOSC), default=DIRECTIONAL, help="sufficient condition to test")
    ap.add_argument("--variant", choices=(REGULAR, LIMITING), default=REGULAR, help="multiplier set for the directional mode")
    ap.add_argument("--core-set", default=None, help="constraints in the nonzero condition, e.g. g1,g2,c1")
    ap.add_argument("--format", choices=("json", "text"), default="json")
    ap.add_argument("--radius", default="1", help="oracle grid radius (rational)")
    ap.add_argument("--resolution", type=int, default=8, help="oracle grid points per unit radius")
    return ap


@dataclass
class Outcome:
    code: int
    report: dict = None
    message: str = ""
    format: str = "json"


def run(argv):
    """Run a subcommand and return its Outcome (exit code, report, message)."""
    args = build_parser().parse_args(argv)
    code, rep, msg = _dispatch(args)
    return Outcome(code, rep, msg, args.format)


def _dispatch(args):
    try:
        problem = load_problem(args.file)
        point = problem.point
        dirs = [parse_vector(d) for d in args.direction]
        for d in dirs:
            if len(d) != point.n:
                raise InputError(f"direction {','.join(str(x) for x in d)} has length {len(d)}, expected {point.n}")
        core = parse_core_set(args.core_set, point) if args.core_set is not None else None
        code = EXIT_OK
        if args.subcommand == "classify":
            rep = rp.classify_report(problem, dirs)
        elif args.subcommand == "cones":
            rep = rp.cones_report(problem, dirs)
        elif args.subcommand == "multipliers":
            rep = rp.multipliers_report(problem, dirs, core)
        elif args.subcommand == "second-order":
            rep = rp.second_order_report(problem, dirs, args.mode, core, args.variant)
            # missing data only matters when no conclusion was reached
            if rep["unavailable"] and not rep["necessary"]["violated"]:
                code = EXIT_UNAVAILABLE
        elif args.subcommand == "strong-m":
            rep = rp.strong_m_report(problem, _seed(args))
        else:
            if len(dirs) > 1:
                raise InputError("oracle takes at most one --direction")
            radius = parse_rational(args.radius, "--radius")
            rep = rp.oracle_report(problem, radius, args.resolution, dirs[0] if dirs else None)
        return code, rep, ""
    except (InputError, NotRepresentable) as e:
        return EXIT_INPUT, None, f"input error: {e}"
    except OSError as e:
        return EXIT_INPUT, None, f"input error: {e}"
    except (HessianUnavailable, OracleUnavailable) as e:
        return EXIT_UNAVAILABLE, None, f"unavailable: {e}"
    except DegenerateInput as e:
        return EXIT_DEGENERATE, None, f"degenerate: {e}"


def dumps(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    out = run(argv)
    if out.report is not None:
        sys.stdout.write(dumps(out.report) if out.format == "json" else rp.render_text(out.report) + "\n")
    if out.message:
        sys.stderr.write(out.message + "\n")
    return out.code


if __name__ == "__main__":
    sys.exit(main())
