"""Gradient blow-up of a concentrating bubble family and its rescaling.

The family v_eps(x) = eps^((n-2)/2) (eps^2 + |x|^2)^(-(n-2)/2) keeps its
Schouten eigenvalues pinned at 2 while sup v and the gradient monitor
sup rho |Dv|/v blow up like 1/eps.  Rescaling around the monitor maximizer
(recenter, dilate coordinates by |Dv(x_k)|, divide by v(x_k)) flattens the
profiles on the fixed ball |y| <= 1 as eps shrinks.
"""

import numpy as np

from confhess import conformal, diagnostics


def main():
    n = 4
    print("eps    sup v      monitor sup   argmax |x|   osc of rescaled on |y|<=1")
    for eps in (1.0, 0.5, 0.25, 0.125, 0.0625):
        family = conformal.bubble_profile(n, scale=eps)
        monitor = diagnostics.gradient_monitor(family, 1.0)
        x_k = np.zeros(n)
        x_k[0] = monitor.location
        rescaled = diagnostics.blowup_rescale(family, x_k)
        osc = diagnostics.oscillation_on_ball(rescaled, 1.0)
        sup_v = float(family.radial_value(0.0))
        print(f"{eps:5.4f} {sup_v:10.4f} {monitor.supremum:12.4f} "
              f"{monitor.location:12.4f} {osc:12.5f}")

    print("\nnormalization identities of the rescaling (eps = 0.25):")
    family = conformal.bubble_profile(n, scale=0.25)
    monitor = diagnostics.gradient_monitor(family, 1.0)
    x_k = np.zeros(n)
    x_k[0] = monitor.location
    rescaled = diagnostics.blowup_rescale(family, x_k)
    normalized = conformal.scale_profile(family, 1.0 / float(family.value(x_k)))
    renorm = diagnostics.blowup_rescale(normalized, x_k)
    print(f"  vt(0) = {rescaled.value(np.zeros(n)):.15f}")
    print(f"  |Dvt(0)| after unit normalization at x_k = "
          f"{np.linalg.norm(renorm.gradient(np.zeros(n))):.15f}")

    print("\nHessian monitor in the u gauge (u = |x|^2 has Hessian 2 I):")
    u = conformal.gauge_convert(conformal.inversion_profile(n), "u")
    mon = diagnostics.hessian_monitor(u, 1.0)
    print(f"  sup rho^2 |u_xi,xi| = {mon.supremum:.8f} at |x| = {mon.location:.2e} "
          f"({mon.direction})")


if __name__ == "__main__":
    main()
