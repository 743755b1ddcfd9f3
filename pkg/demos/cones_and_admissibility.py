"""Admissibility cones: membership, boundary location, inclusion relations.

Walks through the Garding cones, the diagonal-shift cones, the sampled
inclusion of one in the other, and the dimension threshold above which
admissibility forces positive Ricci curvature.
"""

import numpy as np

from confhess import cones, symfun


def main():
    g2 = cones.GammaK(3, 2)
    for lam in ([1.0, 1.0, -0.4], [1.0, 1.0, -0.5], [1.0, 1.0, 1.0]):
        lam = np.array(lam)
        inside = bool(cones.cone_contains(g2, lam))
        shift = float(cones.boundary_shift(g2, lam))
        reason = "" if inside else f"  ({cones.cone_violation(g2, lam)})"
        print(f"gamma:k=2  lam = {lam}: inside = {inside}, boundary shift = {shift:+.6f}{reason}")

    print("\nsampling the cone at varied boundary distances:")
    rng = np.random.default_rng(1)
    pts = cones.sample_cone(cones.GammaK(4, 2), 20000, rng)
    margins = -cones.boundary_shift(cones.GammaK(4, 2), pts)
    print(f"  20000 samples of gamma:k=2 (n=4); margin quantiles "
          f"1% = {np.quantile(margins, 0.01):.4f}, 50% = {np.quantile(margins, 0.5):.4f}, "
          f"99% = {np.quantile(margins, 0.99):.4f}")

    print("\ninclusion of gamma cones in diagonal-shift cones:")
    for n in (4, 6):
        for k in range(2, n + 1):
            rep = cones.gamma_sigma_inclusion_test(k, n, 20000, seed=7)
            print(f"  k={k} n={n}: delta = {rep.delta:.4f}, violations = {rep.violations}, "
                  f"worst margin = {rep.worst_margin:.5f}")

    print("\nsmallest k forcing positive Ricci curvature (k > n/2):")
    for n in (3, 4, 5, 6, 8):
        print(f"  n = {n}: k = {cones.min_k_positive_ricci(n)}")

    print("\nRicci-positivity bridge (delta = 1/(n-2)):")
    rng = np.random.default_rng(2)
    lam = rng.normal(size=(5, 4))
    cone = cones.SigmaDelta(4, 0.5)
    for row in lam:
        mu = symfun.ricci_map(row)
        print(f"  lam = {np.array2string(row, precision=3)}: in Sigma_(1/2) = "
              f"{bool(cones.cone_contains(cone, row))}, min Ricci eig = {np.min(mu):+.4f}")


if __name__ == "__main__":
    main()
