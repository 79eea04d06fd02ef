#!/usr/bin/env python3
"""Ratio growth on synthetic Gaussian data: one sweep varying n at fixed d,
one varying d at fixed n (100 permutations per grid point).

Usage: python scripts/gaussian_ratio_sweeps.py [fixed_value] [out_dir]
"""

import pathlib
import sys

from shuffle_sgd.cli import main

fixed = int(sys.argv[1]) if len(sys.argv) > 1 else 500
out_dir = pathlib.Path(sys.argv[2] if len(sys.argv) > 2 else "results/gaussian_sweeps")
out_dir.mkdir(parents=True, exist_ok=True)

grid = ",".join(str(v) for v in (50, 100, 200, 400, 600, 800, 1000))

for fixed_dim, tag in (("d", "vary_n"), ("n", "vary_d")):
    print(f"== sweep {tag} (fixed {fixed_dim} = {fixed})")
    code = main([
        "gaussian-sweep", "--fixed", fixed_dim, "--fixed-value", str(fixed),
        "--grid", grid, "--perms", "100", "--seed", "0",
        "--out", str(out_dir / tag),
    ])
    if code != 0:
        sys.exit(code)
