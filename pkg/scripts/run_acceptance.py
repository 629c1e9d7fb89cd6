#!/usr/bin/env python3
"""Run the acceptance suite and print one PASS/FAIL line per criterion."""

import subprocess
import sys


def main() -> int:
    return subprocess.call([
        sys.executable, "-m", "pytest", "tests/test_acceptance.py",
        "-v", "-s", "--no-header",
    ])


if __name__ == "__main__":
    raise SystemExit(main())
