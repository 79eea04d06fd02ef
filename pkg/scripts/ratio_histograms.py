#!/usr/bin/env python3
"""Normalized histograms of L / hat over random permutations for every
LIBSVM file in a directory (1000 permutations each).

Usage: python scripts/ratio_histograms.py [data_dir] [out_dir]
"""

import pathlib
import sys

from shuffle_sgd.cli import main

data_dir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data")
out_dir = pathlib.Path(sys.argv[2] if len(sys.argv) > 2 else "results/histograms")
out_dir.mkdir(parents=True, exist_ok=True)

files = sorted(p for p in data_dir.iterdir() if p.is_file()) if data_dir.exists() else []
if not files:
    sys.exit(f"no dataset files under {data_dir}/; drop LIBSVM files there first")

for path in files:
    print(f"== {path.name}")
    code = main([
        "histogram", "--input", str(path), "--b", "1", "--num-perms", "1000",
        "--bins", "40", "--seed", "0", "--out", str(out_dir / path.stem),
    ])
    if code != 0:
        sys.exit(code)
