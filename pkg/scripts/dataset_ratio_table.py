#!/usr/bin/env python3
"""Compute the L / hat ratio table over every LIBSVM file in a directory.

Small files get 1000 permutations, anything with more than 5000 rows gets 20,
mirroring the desk-scale budget documented in the README. Results land in
results/ratio_table/ as one JSON + CSV pair per dataset.

Usage: python scripts/dataset_ratio_table.py [data_dir] [out_dir]
"""

import pathlib
import sys

from shuffle_sgd import load_libsvm
from shuffle_sgd.cli import main

data_dir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data")
out_dir = pathlib.Path(sys.argv[2] if len(sys.argv) > 2 else "results/ratio_table")
out_dir.mkdir(parents=True, exist_ok=True)

files = sorted(p for p in data_dir.iterdir() if p.is_file()) if data_dir.exists() else []
if not files:
    sys.exit(f"no dataset files under {data_dir}/; drop LIBSVM files there first")

for path in files:
    n = load_libsvm(path).n
    perms = 1000 if n <= 5000 else 20
    print(f"== {path.name} (n={n}, {perms} permutations)")
    code = main([
        "analyze", "--input", str(path), "--b", "1",
        "--num-perms", str(perms), "--seed", "0",
        "--out", str(out_dir / path.stem),
    ])
    if code != 0:
        sys.exit(code)
