#!/usr/bin/env python3
"""Run the acceptance suite with one printed line per criterion."""

import pathlib
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    raise SystemExit(subprocess.call(
        [sys.executable, "-m", "pytest", "-s", "-q",
         str(ROOT / "tests" / "test_acceptance.py")] + sys.argv[1:]))
