#!/usr/bin/env python3
"""Dispersion tables for m in {0, 0.3, 0.6, 0.9}: lattice vs continuum branch.

Writes one CSV per mass plus an overlay SVG under out/fig3/.
"""
import sys

from dirac_qca.cli import main

if __name__ == "__main__":
    code = main(["dispersion", "--preset", "fig3", "--samples", "512", "--svg", "--out-dir", "out/fig3"])
    print("fig3 artifacts under out/fig3/")
    sys.exit(code)
