"""Run every figure preset through the harness and report wall time per preset.

    python3 scripts/run_presets.py [--full] [--out DIR]
"""
import argparse
import time
from pathlib import Path

from bosehub.harness import preset_config, preset_names, run_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--full", action="store_true", help="large particle numbers (slow)")
    ap.add_argument("--out", default="out", help="root directory; each preset gets a subdirectory")
    args = ap.parse_args()
    total = 0.0
    failed = []
    for name in preset_names():
        start = time.perf_counter()
        report = run_experiment(preset_config(name, args.full), Path(args.out) / name)
        took = time.perf_counter() - start
        total += took
        print(f"{name:10s} {'ok' if report.passed else 'FAILED':6s} {took:7.1f}s")
        if not report.passed:
            failed.append(name)
    print(f"total {total:.1f}s")
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
