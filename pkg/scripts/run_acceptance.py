#!/usr/bin/env python3
"""Run the acceptance suite and show one pass/fail line per criterion."""

import subprocess
import sys
from pathlib import Path


def main() -> int:
    root = Path(__file__).resolve().parent.parent
    return subprocess.call(
        [sys.executable, "-m", "pytest", str(root / "tests" / "test_acceptance.py"),
         "-v", "-s"],
        cwd=root,
    )


if __name__ == "__main__":
    sys.exit(main())
