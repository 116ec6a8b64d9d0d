"""Density against its large-time laws for orders 0 and +-0.3.

Usage: python3 scripts/asymptotics.py
Prints the ratio f / law at t = 1e2 ... 1e10.  For nu = 0 it shows both the
plain and the log-corrected law; for nu = +-0.3 it also shows
(ratio - 1) * t^|nu|, whose approach to a constant identifies the next term.
"""
import numpy as np

from besselhit import HittingProblem, asymptotic_density, density

T = np.array([1e2, 1e4, 1e6, 1e8, 1e10])


def main():
    p = HittingProblem(2.0, 1.0, 0.0)
    f = density(p, T)
    print("nu = 0:  t, f/law, f/corrected law")
    for t, a, b in zip(T, f / asymptotic_density(p, T), f / asymptotic_density(p, T, corrected=True)):
        print(f"  {t:8.0e}  {a:.6f}  {b:.6f}")
    for nu in (0.3, -0.3):
        p = HittingProblem(2.0, 1.0, nu)
        r = density(p, T) / asymptotic_density(p, T)
        print(f"nu = {nu}:  t, f/law, (f/law - 1) t^{p.mu}")
        for t, v in zip(T, r):
            print(f"  {t:8.0e}  {v:.6f}  {(v - 1) * t**p.mu:.4f}")


if __name__ == "__main__":
    main()
