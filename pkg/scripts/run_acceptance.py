#!/usr/bin/env python3
"""Run every acceptance experiment, print one line each and write the tables to a directory."""

import argparse
import pathlib
import sys
import time

from harmonic_lab.experiments import ACCEPTANCE, ExperimentConfig, run


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="acceptance_out", help="directory for the CSV tables")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ok = True
    for k in sorted(ACCEPTANCE):
        t0 = time.perf_counter()
        table = run(ExperimentConfig(ACCEPTANCE[k], seed=args.seed))
        (out / f"{k:02d}_{ACCEPTANCE[k]}.csv").write_text(table.to_csv(), encoding="utf-8")
        ok &= table.passed
        print(f"{k:2d} {'PASS' if table.passed else 'FAIL'} {ACCEPTANCE[k]:20s} {time.perf_counter() - t0:6.2f}s")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
