#!/usr/bin/env python3
"""Tabulate a kernel against its independent reference route.

Thin wrapper over ``hypverify tabulate``. Produces a CSV with columns
``rho,value,reference,rel_err``; the reference column is filled whenever
a closed form or a second computational route exists for the requested
kernel and dimension, and left empty otherwise.

Examples:

    python3 scripts/tabulate_kernels.py --kernel heat --n 3 --t 0.7 \
        --rho 0.1,0.5,1,2,5
    python3 scripts/tabulate_kernels.py --kernel resolvent --n 5 \
        --lam0 -3 --rho 0.1,1,5 --outdir reports
    python3 scripts/tabulate_kernels.py --kernel qk-inverse --n 5 \
        --rho 0.5,1,2
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from hypverify.cli import main


if __name__ == "__main__":
    sys.exit(main(["tabulate", *sys.argv[1:]]))
