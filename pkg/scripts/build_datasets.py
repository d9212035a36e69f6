"""Regenerate the shipped curve datasets from the branched-cover construction.

Usage: python3 scripts/build_datasets.py [--check] [--grid 3]
"""

import argparse
import sys
import time

from lfkirby import arrangement as am
from lfkirby.fibration import check_contract, construct_dataset, dataset_path, w_squared_boundary_power


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--grid", type=int, default=3)
    ap.add_argument("--check", action="store_true", help="run the dataset contract too")
    args = ap.parse_args(argv)
    status = 0
    for h in range(1, args.grid + 1):
        for n in range(1, args.grid + 1):
            t0 = time.time()
            arr = construct_dataset(h, n)
            text = am.dumps(arr, [f"curves a_k, c_i, D_j for h={h} n={n}", "generated by scripts/build_datasets.py"])
            dataset_path(h, n).write_text(text)
            line = f"h={h} n={n} genus={arr.surface.genus} passages={sum(len(w) for _, w in arr.curves)}"
            if args.check:
                v = check_contract(h, n, arr)
                k = w_squared_boundary_power(h, n, arr)
                line += f" contract={'ok' if v.ok else v.failures[:2]} W^2=boundary^{k}"
                status |= not v.ok
            print(line + f" ({time.time() - t0:.1f}s)", flush=True)
    return status


if __name__ == "__main__":
    sys.exit(main())
