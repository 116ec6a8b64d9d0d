"""Compare the decomposed K-ratio with direct evaluation over an order/c/w grid.

Usage: python3 scripts/ratio_identity.py > ratio_identity.csv
"""
import sys
import time

from besselhit.cli import DEFAULT_RATIO_C, DEFAULT_RATIO_NU, DEFAULT_RATIO_W, emit
from besselhit.hitting_kernels import HittingProblem
from besselhit.ratio_theorem import identity_check


def main():
    start = time.perf_counter()
    rows = []
    for nu in DEFAULT_RATIO_NU:
        for c in DEFAULT_RATIO_C:
            for w in map(complex, DEFAULT_RATIO_W):
                d, r, ae, re = identity_check(HittingProblem(c, 1.0, nu), w)
                rows.append((nu, c, w, d, r, ae, re))
    names = ("nu", "c", "w", "direct", "decomposed", "abs_err", "rel_err")
    emit({n: [row[k] for row in rows] for k, n in enumerate(names)}, "csv")
    worst = max(row[-1] for row in rows)
    print(f"# max rel err {worst:.3e} over {len(rows)} points, {time.perf_counter() - start:.2f}s", file=sys.stderr)


if __name__ == "__main__":
    main()
