#!/usr/bin/env python3
"""Hermite packet at k0 = 3pi/10, m = 0.6: exact evolution vs the
drift-diffusion approximation at t in {0, 100, 200, 600}.

Writes density CSVs, the fidelity-vs-bound table, and SVGs under out/fig4/.
"""
import sys

from dirac_qca.cli import main

if __name__ == "__main__":
    code = main(["evolve", "--preset", "fig4", "--times", "0,100,200,600", "--svg", "--out-dir", "out/fig4"])
    code |= main(["compare", "--preset", "fig4", "--times", "0,100,200,600", "--svg", "--out-dir", "out/fig4"])
    print("fig4 artifacts under out/fig4/")
    sys.exit(code)
