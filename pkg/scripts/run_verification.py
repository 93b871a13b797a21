#!/usr/bin/env python3
"""Run a verification suite and write its report.

Thin wrapper over ``hypverify verify`` for environments where the console
script is not on PATH (e.g. running straight from a checkout). All flags
are forwarded unchanged; see ``hypverify verify --help``.

Examples:

    python3 scripts/run_verification.py --suite all
    python3 scripts/run_verification.py --suite kernels --format json \
        --outdir reports
    python3 scripts/run_verification.py --suite inequalities --n 5 --k 2
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from hypverify.cli import main


if __name__ == "__main__":
    sys.exit(main(["verify", *sys.argv[1:]]))
