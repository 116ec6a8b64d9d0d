"""Regenerate tests/data/besselk_table.csv: K_nu(z) at 40 significant digits (mpmath).

Usage: python3 scripts/make_besselk_table.py [output.csv]
"""
import csv
import sys
from pathlib import Path

import mpmath as mp

ORDERS = [0, 0.3, 0.5, 1, 1.5, 2, 2.5, 2.6, 3.7, 5, 7.3, 10]
ARGS = [
    1e-6, 1e-3, 0.1, 0.5, 1, 2.5, 7, 12, 25, 60, 100,
    1 + 2j, 1 - 2j, -3 + 0.5j, -0.5 + 4j, 10 + 10j, -1 + 1e-3j, 0.2 - 30j, -8 + 8j,
]


def main(path):
    mp.mp.dps = 40
    rows = []
    for nu in ORDERS:
        for z in ARGS:
            zc = complex(z)
            k = mp.besselk(nu, mp.mpc(zc.real, zc.imag))
            rows.append([repr(float(nu)), repr(zc.real), repr(zc.imag),
                         mp.nstr(k.real, 20), mp.nstr(k.imag, 20)])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["nu", "re_z", "im_z", "re_K", "im_K"])
        w.writerows(rows)


if __name__ == "__main__":
    default = Path(__file__).resolve().parents[1] / "tests" / "data" / "besselk_table.csv"
    main(sys.argv[1] if len(sys.argv) > 1 else default)
