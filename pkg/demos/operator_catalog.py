"""Tour of the curvature-operator catalog.

Evaluates every operator family at sample eigenvalue tuples, shows the
analytic gradients against finite differences, and runs an axiom sweep
(positivity, monotonicity, concavity, symmetry, homogeneity) on random
cone samples.
"""

import numpy as np

from confhess import cones, symfun

N = 4
OPERATORS = [
    symfun.SigmaKRoot(n=N, k=2),
    symfun.Quotient(n=N, k=2, l=1),
    symfun.PucciMin(n=N, k=2, delta=0.5),
    symfun.InvPowerSum(n=N),
    symfun.InvMonomialSum(n=N, k=3),
    symfun.RicciComposite(n=N, inner=symfun.SigmaKRoot(n=N, k=2)),
]


def main():
    lam = np.array([2.0, 2.0, 2.0, 2.0])
    print(f"catalog at lam = {lam} (n = {N})")
    for op in OPERATORS:
        f = symfun.eval_op(op, lam)
        g = symfun.grad_op(op, lam)
        euler = float(np.sum(g * lam))
        print(f"  {op.descriptor():34s} f = {f:10.6f}   sum(f_i lam_i) = {euler:10.6f}"
              f"   (homogeneity degree {op.alpha:g})")

    print("\ngradient vs central differences at a random admissible point:")
    rng = np.random.default_rng(0)
    for op in OPERATORS:
        x = cones.sample_cone(op.cone, 1, rng, fraction_range=(0.5, 1.0))[0]
        g = symfun.grad_op(op, x)
        h = 1e-6
        fd = np.array([(op.value(x + h * e) - op.value(x - h * e)) / (2 * h)
                       for e in np.eye(N)])
        print(f"  {op.descriptor():34s} max rel err = {np.max(np.abs(g - fd) / np.abs(fd)):.2e}")

    print("\naxiom sweep, 5000 samples each:")
    for op in OPERATORS:
        report = symfun.verify_axioms(op, 5000, seed=42)
        status = "ok" if report.ok else f"{report.total_violations} violations"
        worst_conc = report.worst["f3_concavity"]
        worst_hom = report.worst["f5_homogeneity"]
        print(f"  {op.descriptor():34s} {status:14s} worst concavity defect "
              f"{worst_conc:+.1e}, worst homogeneity defect {worst_hom:.1e}")


if __name__ == "__main__":
    main()
