"""Command line entry point.

Exit codes: 0 all checks pass, 1 a check or engine failed, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .harness.config import ConfigError, ExperimentConfig
from .harness.presets import describe, preset_config, preset_names
from .harness.runner import OUTPUT_ENV, output_root, run_experiment
from .harness.verify import summary_lines, verify_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _print_report(report, root) -> int:
    for point in report.points:
        d = point.to_dict()
        status = "PASS" if d["passed"] else "FAIL"
        print(f"[{status}] {report.name} {json.dumps(d['point'], sort_keys=True)} regime={d['regime']}")
        for engine, info in d["engines"].items():
            if info["status"] != "ok":
                print(f"    {engine}: {info['error']}")
        for c in d["comparisons"]:
            tol = "" if c["tolerance"] is None else f" tol={c['tolerance']:.3g}"
            print(f"    {c['engines'][0]} vs {c['engines'][1]} {c['observable']}: sup={c['sup']:.3e} rms={c['rms']:.3e}{tol}")
    print(f"output: {root}")
    return EXIT_OK if report.passed else EXIT_FAIL


def _run(cfg: ExperimentConfig, out_dir) -> int:
    report = run_experiment(cfg, out_dir)
    return _print_report(report, output_root(cfg, out_dir))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="bosehub", description=__doc__.splitlines()[0],
                                     epilog=f"Set {OUTPUT_ENV} to relocate output directories.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a JSON experiment config")
    p_run.add_argument("config")
    p_run.add_argument("--out", help="output directory (overrides config and env)")
    p_pre = sub.add_parser("preset", help="run a named figure preset")
    p_pre.add_argument("name")
    p_pre.add_argument("--full", action="store_true", help="large particle numbers (slow)")
    p_pre.add_argument("--out")
    p_ver = sub.add_parser("verify", help="run the identity and invariant battery")
    p_ver.add_argument("--quick", action="store_true", help="skip the quadrature checks")
    p_ver.add_argument("--quadrature-tol", type=float, default=1e-6)
    p_ver.add_argument("--inject-asymmetry", action="store_true", help="perturb the hopping symmetry (self-test)")
    sub.add_parser("list-presets", help="show available presets")

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    if args.command == "list-presets":
        for name in preset_names():
            print(f"{name}: {describe(name)}")
        return EXIT_OK
    if args.command == "verify":
        results = verify_suite(args.inject_asymmetry, args.quadrature_tol, args.quick)
        for line in summary_lines(results):
            print(line)
        failed = [r for r in results if not r.passed]
        print(json.dumps({"checks": len(results), "failed": [r.name for r in failed]}))
        return EXIT_FAIL if failed else EXIT_OK
    try:
        if args.command == "run":
            cfg = ExperimentConfig.load(args.config)
        else:
            cfg = preset_config(args.name, args.full)
    except (ConfigError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return _run(cfg, args.out)


if __name__ == "__main__":
    sys.exit(main())
