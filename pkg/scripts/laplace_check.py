"""Density against Talbot inversion of its Laplace transform on t in [0.1, 100].

Usage: python3 scripts/laplace_check.py [nu ...]
"""
import sys

import numpy as np

from besselhit import HittingProblem, density
from besselhit.oracles import laplace_check


def main(argv):
    orders = [float(v) for v in argv] or [0.0, 0.3, -0.3, 1.0, 1.5, 2.5, 2.6, 3.7]
    t = np.geomspace(0.1, 100, 20)
    for nu in orders:
        cols = laplace_check(HittingProblem(2.0, 1.0, nu), t, density)
        k = int(np.argmax(cols["rel_err"]))
        print(f"nu={nu:5}: max rel err {cols['rel_err'][k]:.2e} at t={t[k]:.3g}")


if __name__ == "__main__":
    main(sys.argv[1:])
