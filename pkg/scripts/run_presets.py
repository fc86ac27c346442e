#!/usr/bin/env python3
"""Run every bundled configuration end to end and summarize the checks."""

import sys

from transgress.cli import PRESETS, parse_config, run


def main() -> int:
    failures = 0
    for name in sorted(PRESETS):
        config, _ = parse_config(["--preset", name])
        report = run(config)
        status = "PASS" if report.passed else "FAIL"
        total = report.stats["timing"]["total"]
        counts = ", ".join(
            f"{m}:{n} terms" for m, n in report.stats["term_counts"].items())
        print(f"{name}: {status} "
              f"({sum(e.status == 'pass' for e in report.checks)}/"
              f"{len(report.checks)} checks, {total:.2f}s; {counts})")
        if not report.passed:
            failures += 1
            print(report.to_text())
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
