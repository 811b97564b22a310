"""Command-line entry point.

Exit codes: 0 success, 1 configuration error, 2 numerical failure, 3 I/O error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .calibration import calibrate_kappa
from .config import SCENARIOS, parse_config
from .errors import ConfigError, NumericalFailure, TargetUnreachable
from .experiments import format_summary, run_all, run_scenario, verification_passes, verification_report

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3


def _common(parser):
    parser.add_argument("--config", help="key=value configuration file")
    parser.add_argument("--n-qubits", type=int)
    parser.add_argument("--t-end", type=float)
    parser.add_argument("--dt", type=float)
    parser.add_argument("--kappa", type=float)
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--svg", action="store_true", default=None, help="also write SVG plots")
    parser.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chargecluster",
                                     description="Cluster-state generation on charge-qubit chains.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one scenario")
    run.add_argument("--scenario", required=True, choices=SCENARIOS)
    _common(run)
    _common(sub.add_parser("run-all", help="run all five scenarios"))
    cal = sub.add_parser("calibrate", help="fit kappa to a combined first-peak fidelity")
    cal.add_argument("--target", type=float, default=0.85)
    _common(cal)
    _common(sub.add_parser("verify", help="equivalence triangle and stabilizer checks"))
    return parser


def _load(args):
    overrides = {
        "n_qubits": args.n_qubits,
        "t_end": args.t_end,
        "dt": args.dt,
        "kappa": args.kappa,
        "output_dir": args.out,
        "emit_svg": args.svg,
        "scenario": getattr(args, "scenario", None),
    }
    return parse_config(args.config, overrides)


def _run(args) -> int:
    config = _load(args)
    if args.command == "verify":
        ok = True
        for n in range(2, config.n_qubits + 1):
            report = verification_report(n, config.g)
            passed = verification_passes(report)
            ok &= passed
            print(f"n={n}: {'PASS' if passed else 'FAIL'}")
            for key, value in report.items():
                print(f"  {key:<34} {value:.3e}")
        return EXIT_OK if ok else EXIT_NUMERIC

    if args.command == "calibrate":
        kappa = calibrate_kappa(args.target, config)
        out = Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        path = out / "calibrated.cfg"
        path.write_text(config.replace(kappa=kappa).dumps(), encoding="utf-8", newline="\n")
        print(f"kappa={kappa!r}")
        print(f"written {path}")
        return EXIT_OK

    if args.command == "run" and config.scenario != "all":
        results = [run_scenario(config)]
    else:
        results = run_all(config)
    sys.stdout.write(format_summary(results, config))
    errors = [r.error for r in results if r.error]
    if any(e.startswith(("OSError", "PermissionError", "FileNotFoundError")) for e in errors):
        return EXIT_IO
    if errors or any(r.partial for r in results):
        return EXIT_NUMERIC
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (NumericalFailure, TargetUnreachable) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
