#!/usr/bin/env python3
"""Fusion-frame Parseval checks and the local-erasure stress case."""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from rframes.experiments import run_fusion
from rframes.io import write_json


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/fusion")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    body = run_fusion()
    write_json(os.path.join(args.out, "response.json"), body)
    for key, rep in body["parseval"].items():
        print(f"{key}: parseval={rep['parseval']} a_f={rep['a_f']:.12f}")
    for key, rep in body["after_local_erasures"].items():
        print(f"{key}: frame={rep['frame']} a_f={rep['a_f']:.6f} bound_ok={rep['bound_ok']}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
