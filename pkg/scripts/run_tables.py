#!/usr/bin/env python3
"""Reproduce the two recovery/denoising study tables and write them as CSV."""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from rframes.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/tables")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    return cli_main(["reproduce", "tables", "--out", args.out, "--seed", str(args.seed)])


if __name__ == "__main__":
    raise SystemExit(main())
