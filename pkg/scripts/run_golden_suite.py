#!/usr/bin/env python3
"""Run the built-in golden checks and print a human-readable table.

Exits nonzero if any check fails.  For machine-readable output use
`clickstats suite --format csv` instead.
"""

import sys

from clickstats.cli import run_golden_suite


def main() -> int:
    checks = run_golden_suite()
    width = max(len(c.name) for c in checks)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{c.name:<{width}}  {status}  dev={c.deviation:9.2e}  {c.detail}")
    passed = sum(c.passed for c in checks)
    print(f"{passed}/{len(checks)} checks passed, "
          f"max deviation {max(c.deviation for c in checks):.2e}")
    return 0 if passed == len(checks) else 1


if __name__ == "__main__":
    sys.exit(main())
