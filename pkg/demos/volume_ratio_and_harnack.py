"""Bishop-Gromov volume ratios and the Harnack/Holder exponent.

For a radial metric g = u^-2 dx^2 the ratio Q(r) of geodesic-ball volume
to Euclidean-ball volume is 1 identically only for flat space and is
non-increasing whenever the Ricci curvature is nonnegative.  The round
3-sphere chart u = (1 + r^2)/2 decreases from 1 to 3/(2 pi^2) at r = pi.

The Holder exponent beta = (1 - delta (n-2)) / (1 + delta) controls the
compactness of admissible conformal factors when the cone sits inside the
diagonal-shift cone of parameter delta; the log-singular model w = 2 log|x|
has divergent seminorm as the inner radius shrinks.
"""

import numpy as np

from confhess import conformal, diagnostics


def main():
    print("flat metric (u = 1, n = 3):")
    flat = conformal.constant_profile(3, 1.0, gauge="u")
    curve = diagnostics.bishop_gromov_curve(flat, np.linspace(0.25, 2.0, 8))
    for r, q in curve.rows():
        print(f"  Q({r:5.3f}) = {q:.12f}")

    print("\nround unit 3-sphere (u = (1 + r^2)/2):")
    sphere = conformal.RadialProfile(
        lambda s: (1.0 + np.asarray(s, dtype=float) ** 2) / 2.0,
        lambda s: np.asarray(s, dtype=float),
        lambda s: np.ones_like(np.asarray(s, dtype=float)),
        3, gauge="u")
    radii = np.linspace(0.5, np.pi, 8)
    curve = diagnostics.bishop_gromov_curve(sphere, radii)
    for r, q in curve.rows():
        print(f"  Q({r:5.3f}) = {q:.12f}")
    print(f"  closed-form value at pi: {3.0 / (2.0 * np.pi ** 2):.12f}")

    print("\nHarnack exponent beta(delta, n) = (1 - delta (n-2)) / (1 + delta):")
    for n in (3, 4, 6):
        deltas = np.linspace(0.0, 1.0 / (n - 2), 5, endpoint=False)
        row = ", ".join(f"beta({d:.3f}) = {diagnostics.harnack_beta(d, n):.4f}"
                        for d in deltas)
        print(f"  n = {n}: {row}")

    print("\nHolder seminorm of the log-singular model w = 2 log |x| at beta = 0.4:")
    for inner in (0.1, 0.01, 0.001):
        radii = np.geomspace(inner, 1.0, 80)
        rep = diagnostics.harnack_report(0.25, 4, radii, 2.0 * np.log(radii))
        print(f"  annulus [{inner:g}, 1]: seminorm = {rep.seminorm:10.3f}")
    print("  (divergence as the inner radius shrinks: the singular profile is")
    print("   not Holder continuous down to the puncture)")


if __name__ == "__main__":
    main()
