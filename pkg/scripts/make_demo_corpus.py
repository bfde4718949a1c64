"""Regenerate the bundled synthetic corpus under src/topiknet/data/demo."""

import argparse
from pathlib import Path

from topiknet.synth import generate

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "src" / "topiknet" / "data" / "demo"

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=20)
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = ap.parse_args()
    paths = generate(seed=args.seed).write(args.out)
    for name, path in paths.items():
        print(f"{name}: {path}")
