"""Spectrum of E[G (x) G~] over the NIST gates, ideal and with row-7 over-rotations,
plus the singular spread of the L fixed point."""

import numpy as np

from rbgatesets import compilation, engine, theory


def show(title, impl=None):
    vals = theory.nonzero_eigenvalues(theory.averaged_superop("N", impl))
    print(title)
    print("  eigenvalues:", np.array2string(vals, precision=6, suppress_small=True))
    if impl is not None:
        p = theory.decay_eigenvalue("N", impl)
        res = theory.compute_L("N", impl, p)
        print(f"  decay p = {p:.8f}, r = {(1 - p) / 2:.3e}, L spread = {res.singular_spread:.6f}")


def main():
    show("ideal gates")
    pn = engine.PulseNoise(7, compilation.error_model("over_rotation"))
    show("over-rotation, pulse set 7", pn.expected_map("N"))


if __name__ == "__main__":
    main()
