#!/usr/bin/env python3
"""Run every bundled fixture and print one summary line each.

Handy before a release: `python3 scripts/run_all_fixtures.py --report-dir
/tmp/reports` leaves one JSON report per fixture next to the console
summary.  Exits 1 if any check failed anywhere.
"""

import argparse
import json
import pathlib
import sys

from pelks.checks import run_checks
from pelks.cli import resolve_config
from pelks.config import with_overrides

FIXTURES = ["quaternion-C", "unitary-A", "siegel-C", "basechange-A"]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--report-dir", default=None)
    args = parser.parse_args()

    failures = 0
    for name in FIXTURES:
        cfg = with_overrides(resolve_config(name), seed=args.seed, samples=args.samples)
        report = run_checks(cfg)
        s = report["summary"]
        failures += s["fail"]
        print(
            f"{name:14s} {s['pass']:3d} pass {s['fail']:3d} fail "
            f"{s['skip']:3d} skip   {report['timing']['total_seconds']:.2f}s"
        )
        for check in report["checks"]:
            if check["status"] == "fail":
                print(f"    FAIL {check['name']}: {check['detail']}")
        if args.report_dir:
            out = pathlib.Path(args.report_dir)
            out.mkdir(parents=True, exist_ok=True)
            path = out / f"{name}.json"
            path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
