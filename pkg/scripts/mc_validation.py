"""Monte Carlo histogram of hitting times against the exact density.

Usage: python3 scripts/mc_validation.py [paths] [nu ...]
Defaults: 10^6 paths, (a, b) = (2, 1), nu in {0.3, -0.5}, 30 bins on [0.05, 20].
"""
import sys
import time

import numpy as np

from besselhit import HittingProblem
from besselhit.oracles import McConfig, bin_average_density, set_threads, simulate_hitting, z_scores


def main(argv):
    paths = int(argv[0]) if argv else 1_000_000
    orders = [float(v) for v in argv[1:]] or [0.3, -0.5]
    print(f"threads: {set_threads()}")
    for nu in orders:
        p = HittingProblem(2.0, 1.0, nu)
        start = time.perf_counter()
        res = simulate_hitting(p, McConfig(paths=paths))
        z = z_scores(res, bin_average_density(p, res.edges))
        print(
            f"nu={nu}: {time.perf_counter() - start:.1f}s, absorbed {res.absorbed_fraction:.5f}, "
            f"|z|<=3 in {np.mean(np.abs(z) <= 3):.0%} of bins, max |z| {np.max(np.abs(z)):.2f}"
        )
        print("  z:", " ".join(f"{v:+.1f}" for v in z))


if __name__ == "__main__":
    main(sys.argv[1:])
