#!/usr/bin/env python3
"""L / tilde against the batch size on Gaussian data, with the fitted
log-log growth exponent.

Usage: python scripts/batch_size_sweep.py [n] [d] [out_dir]
"""

import pathlib
import sys

from shuffle_sgd.cli import main

n = int(sys.argv[1]) if len(sys.argv) > 1 else 500
d = int(sys.argv[2]) if len(sys.argv) > 2 else 500
out_dir = pathlib.Path(sys.argv[3] if len(sys.argv) > 3 else "results/batch_sweep")
out_dir.mkdir(parents=True, exist_ok=True)

b_grid = ",".join(str(b) for b in (2**k for k in range(11)) if n % b == 0 and b <= n)
sys.exit(main([
    "batch-sweep", "--gaussian", f"{n},{d}", "--b-grid", b_grid,
    "--perms", "100", "--seed", "0", "--out", str(out_dir / f"gaussian_{n}x{d}"),
]))
