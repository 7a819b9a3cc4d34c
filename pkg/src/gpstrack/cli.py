"""Command line interface.

    gpstrack run SCENARIO [--arm analytic|ga|gps|all] [--seed N] [--out DIR] [--plots]
    gpstrack validate SCENARIO
    gpstrack demo line|circle [--arm ...] [--seed N] [--out DIR] [--plots]

Exit codes: 0 success, 1 validation error, 2 unreachable pose, 3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import DegenerateError, UnreachableError, ValidationError
from .pipeline import Arm, run_arms
from .report import emit_report
from .scenario import BUNDLED, bundled_scenario, load_scenario

EXIT_OK, EXIT_VALIDATION, EXIT_UNREACHABLE, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("gpstrack")


def _add_run_options(p):
    p.add_argument("--arm", choices=[a.value for a in Arm] + ["all"], default="all")
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p.add_argument("--out", default="out", help="output directory (default: ./out)")
    p.add_argument("--plots", action="store_true", help="also write SVG plots")
    p.add_argument("--workers", type=int, default=1,
                   help="threads for objective evaluation (results do not depend on it)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gpstrack", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one scenario file")
    run.add_argument("scenario")
    _add_run_options(run)
    val = sub.add_parser("validate", help="parse and check a scenario file")
    val.add_argument("scenario")
    demo = sub.add_parser("demo", help="run a bundled scenario")
    demo.add_argument("name", choices=BUNDLED)
    _add_run_options(demo)
    return parser


def _print_summary(results, stream):
    print(f"{'arm':<9} {'E_e [m]':>12} {'D_j':>10} {'V_e':>10} {'V_j':>10} {'F_fit':>10}", file=stream)
    for r in results:
        b = r.breakdown
        print(f"{r.arm.value:<9} {b.e_e:12.4e} {b.d_j:10.4g} {b.v_e:10.4g} {b.v_j:10.4g} {b.f_fit:10.4g}",
              file=stream)


def _run(cfg, args) -> int:
    arms = list(Arm) if args.arm == "all" else [Arm(args.arm)]
    results = run_arms(cfg, arms, args.seed, workers=args.workers)
    files = emit_report(results, args.out, scenario=cfg, plots=args.plots)
    _print_summary(results, sys.stdout)
    log.info("wrote %s", ", ".join(str(f) for f in files))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "validate":
            cfg = load_scenario(args.scenario)
            cfg.problem()  # resolves the pinned start pose as well
            print(f"{args.scenario}: ok ({cfg.kind}, n={cfg.n})")
            return EXIT_OK
        cfg = load_scenario(args.scenario) if args.command == "run" else bundled_scenario(args.name)
        return _run(cfg, args)
    except (UnreachableError, DegenerateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
