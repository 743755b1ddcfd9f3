"""Schouten eigenvalues of exact conformal factors, gauges, Kelvin transform.

The three exact families pin the whole pipeline: the inversion factor
|x|^(2-n) is flat (eigenvalues 0), the bubble (1+|x|^2)^(-(n-2)/2) is a
round sphere (eigenvalues 2), and the sphere background with unit factor
has eigenvalues 1/(2 a^2).  Gauge conversions and the Kelvin transform
must leave eigenvalues invariant / covariant.
"""

import numpy as np

from confhess import conformal as cf

N = 4


def main():
    x = np.array([0.7, -0.2, 0.4, 0.1])
    print(f"Schouten eigenvalues at x = {x}:")
    for label, prof in [
            ("inversion  |x|^(2-n)", cf.inversion_profile(N)),
            ("bubble     (1+|x|^2)^(-(n-2)/2)", cf.bubble_profile(N)),
            ("sphere a=1, v = 1", cf.constant_profile(N, 1.0,
                                                      background=cf.SphereBackground(N, 1.0))),
            ("sphere a=2, v = 1", cf.constant_profile(N, 1.0,
                                                      background=cf.SphereBackground(N, 2.0))),
    ]:
        eigs = cf.schouten_eigs(prof, x)
        print(f"  {label:34s} -> {np.array2string(eigs, precision=8)}")

    print("\ngauge coherence (same metric, three gauges):")
    p = cf.bubble_profile(N, scale=0.8)
    for gauge in ("v", "u", "w"):
        q = cf.gauge_convert(p, gauge)
        eigs = cf.schouten_eigs(q, x)
        print(f"  gauge {gauge}: eigenvalues {np.array2string(eigs, precision=10)}")

    print("\nscaling law: v -> t v multiplies eigenvalues by t^(-4/(n-2)):")
    for t in (0.5, 2.0):
        q = cf.scale_profile(p, t)
        ratio = cf.schouten_eigs(q, x)[0] / cf.schouten_eigs(p, x)[0]
        print(f"  t = {t}: measured ratio {ratio:.10f}, predicted {t ** (-4.0 / (N - 2)):.10f}")

    print("\nKelvin transform v*(x) = |x|^(2-n) v(x/|x|^2):")
    shifted = cf.bubble_profile(N, scale=0.8, center=np.array([0.3, 0.0, 0.0, 0.1]))
    star = cf.kelvin(shifted)
    y = x / float(x @ x)
    print(f"  eigenvalues of v* at x:          {np.array2string(cf.schouten_eigs(star, x), precision=8)}")
    print(f"  eigenvalues of v  at x/|x|^2:    {np.array2string(cf.schouten_eigs(shifted, y), precision=8)}")
    fixed = cf.kelvin(cf.bubble_profile(N))
    print(f"  centered bubble is a fixed point: v*(x) = {fixed.value(x):.12f}, "
          f"v(x) = {cf.bubble_profile(N).value(x):.12f}")

    print("\nradial reduction at r = 1 for the bubble (v = 1/2, v' = -1/2, v'' = 1/2):")
    lr, lt = cf.radial_schouten_eigs(cf.bubble_profile(N), 1.0)
    print(f"  radial eigenvalue {lr:.12f}, tangential eigenvalue {lt:.12f}")


if __name__ == "__main__":
    main()
