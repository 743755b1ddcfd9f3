"""Estimate monitors, blow-up rescaling, volume comparison, Harnack exponent.

These are the quantities that a priori estimates and compactness arguments
for admissible conformal metrics are about:

* ``gradient_monitor``  -- sup of ``rho |Dv| / v`` over a ball, with the
  cutoff ``rho(x) = (1 - |x|^2/r^2)+``;
* ``hessian_monitor``   -- sup of ``rho^2 |u_xi,xi|`` over the ball and over
  unit directions xi (U gauge);
* ``blowup_rescale``    -- recenter at a point, dilate coordinates by the
  gradient magnitude, and normalize the value to 1 at the center;
* ``bishop_gromov_curve`` -- geodesic-ball volume over Euclidean-ball
  volume for radial metrics ``g = u^-2 dx^2`` (non-increasing under
  nonnegative Ricci curvature, identically 1 only for flat space);
* ``harnack_beta`` / ``holder_check`` -- the Holder exponent
  ``(1 - delta (n-2)) / (1 + delta)`` and sampled Holder seminorms.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from . import conformal
from .errors import DomainError

#: Default dense 1-D scan size used by the radial monitor fast paths.
RADIAL_SCAN = 10001


def unit_ball_volume(n):
    """Volume of the unit ball in R^n, from the Gamma function."""
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def unit_sphere_area(n):
    """Area of the unit sphere S^(n-1) in R^n."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def cutoff(x_norm, radius):
    """The clamped cutoff ``(1 - |x|^2 / r^2)+``."""
    return np.maximum(1.0 - np.asarray(x_norm, dtype=float) ** 2 / radius ** 2, 0.0)


# ---------------------------------------------------------------------------
# Quadrature: composite Simpson with panel doubling and Richardson correction
# ---------------------------------------------------------------------------

def adaptive_simpson(f, a, b, rtol=1e-9, atol=1e-14, max_doublings=22):
    """Integrate a vectorized integrand over ``[a, b]`` arrays of intervals.

    Panels are doubled until successive composite Simpson values agree to
    the requested tolerance on every interval, then the Richardson-corrected
    value is returned.  Shape of ``a``/``b`` is preserved.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))

    def composite(panels):
        t = np.linspace(0.0, 1.0, panels + 1)
        pts = a[..., None] + (b - a)[..., None] * t
        fv = f(pts)
        w = np.ones(panels + 1)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        h = (b - a) / panels
        return (h / 3.0) * np.einsum("...k,k->...", fv, w)

    prev = composite(2)
    panels = 4
    for _ in range(max_doublings):
        cur = composite(panels)
        if np.all(np.abs(cur - prev) <= atol + rtol * np.abs(cur)):
            return cur + (cur - prev) / 15.0
        prev = cur
        panels *= 2
    return cur + (cur - prev) / 15.0


# ---------------------------------------------------------------------------
# Monitors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EstimateMonitor:
    """Supremum of a cutoff-weighted derivative quantity over a ball."""

    kind: str
    radius: float
    supremum: float
    location: float      # |x| of the maximizer
    direction: str       # 'radial' / 'tangential' / 'sampled'
    samples: int

    def to_dict(self):
        return {
            "kind": self.kind,
            "radius": self.radius,
            "supremum": self.supremum,
            "location": self.location,
            "direction": self.direction,
            "samples": self.samples,
        }


def _sobol_ball(n, radius, count, seed=0):
    eng = qmc.Sobol(d=n, scramble=True, seed=seed)
    u = eng.random(count)
    g = np.clip(u * 2.0 - 1.0, -1.0, 1.0)
    nrm = np.linalg.norm(g, axis=1, keepdims=True)
    keep = nrm[:, 0] > 1e-12
    g = g[keep] / np.maximum(nrm[keep], 1e-12)
    radii = radius * u[keep, 0:1] ** (1.0 / n)
    return g * radii


def gradient_monitor(p, radius, num_samples=RADIAL_SCAN, points=None):
    """Supremum of ``rho |Dv| / v`` over the ball of the given radius.

    Radially symmetric profiles centered at the origin are scanned on a
    dense 1-D grid; other profiles are sampled at quasi-random ball points
    (or at explicitly provided ``points``).
    """
    pv = conformal.gauge_convert(p, "v")
    if isinstance(pv, conformal.RadialProfile) and pv.centered_at_origin and points is None:
        lo = radius / num_samples if pv.excludes_origin else max(pv.domain[0], 0.0)
        s = np.linspace(lo, min(radius, pv.domain[1]), num_samples)
        z = cutoff(s, radius) * np.abs(pv.radial_d1(s)) / pv.radial_value(s)
        i = int(np.argmax(z))
        return EstimateMonitor("gradient", radius, float(z[i]), float(s[i]),
                               "radial", num_samples)
    pts = _sobol_ball(pv.n, radius, num_samples) if points is None else np.asarray(points)
    best, loc = -np.inf, 0.0
    for x in pts:
        val, grad, _ = pv.jet(x)
        z = float(cutoff(np.linalg.norm(x), radius) * np.linalg.norm(grad) / val)
        if z > best:
            best, loc = z, float(np.linalg.norm(x))
    return EstimateMonitor("gradient", radius, best, loc, "sampled", len(pts))


def hessian_monitor(p, radius, num_samples=RADIAL_SCAN, points=None):
    """Supremum of ``rho^2 |u_xi,xi|`` over the ball and unit directions xi.

    The profile is converted to the U gauge; the extremal direction of the
    Hessian of a radial ``u`` is either radial (second derivative) or
    tangential (``u'/s``).
    """
    pu = conformal.gauge_convert(p, "u")
    if isinstance(pu, conformal.RadialProfile) and pu.centered_at_origin and points is None:
        lo = radius / num_samples if pu.excludes_origin else max(pu.domain[0], 0.0)
        s = np.linspace(lo, min(radius, pu.domain[1]), num_samples)
        d1, d2 = pu.radial_d1(s), pu.radial_d2(s)
        tang = np.abs(np.where(s == 0.0, d2, d1 / np.where(s == 0.0, 1.0, s)))
        rad = np.abs(d2)
        z = cutoff(s, radius) ** 2 * np.maximum(rad, tang)
        i = int(np.argmax(z))
        return EstimateMonitor("hessian", radius, float(z[i]), float(s[i]),
                               "radial" if rad[i] >= tang[i] else "tangential",
                               num_samples)
    pts = _sobol_ball(pu.n, radius, num_samples) if points is None else np.asarray(points)
    best, loc = -np.inf, 0.0
    for x in pts:
        _, _, hess = pu.jet(x)
        eigs = np.linalg.eigvalsh(0.5 * (hess + hess.T))
        z = float(cutoff(np.linalg.norm(x), radius) ** 2 * np.max(np.abs(eigs)))
        if z > best:
            best, loc = z, float(np.linalg.norm(x))
    return EstimateMonitor("hessian", radius, best, loc, "sampled", len(pts))


# ---------------------------------------------------------------------------
# Blow-up rescaling
# ---------------------------------------------------------------------------

class BlowupProfile(conformal.Profile):
    """``vt(y) = v(x_k + y / |Dv(x_k)|) / v(x_k)``.

    The coordinate dilation by the gradient magnitude and the value
    normalization give ``vt(0) = 1`` exactly, and ``|Dvt(0)| = 1`` exactly
    whenever the input was normalized to ``v(x_k) = 1`` (as in the blow-up
    procedure, where the supremum normalization is applied first).
    """

    def __init__(self, base, center):
        self.base = conformal.gauge_convert(base, "v")
        self.background = self.base.background
        self.gauge = "v"
        self.center = np.asarray(center, dtype=float)
        val0, grad0, _ = self.base.jet(self.center)
        scale = float(np.linalg.norm(grad0))
        if not scale > 0.0:
            raise DomainError("blow-up rescaling is degenerate where the gradient vanishes")
        if not val0 > 0.0:
            raise DomainError("blow-up rescaling requires a positive center value")
        self.dilation = scale
        self.center_value = float(val0)

    def jet(self, y):
        y = np.asarray(y, dtype=float)
        x = self.center + y / self.dilation
        val, grad, hess = self.base.jet(x)
        return (val / self.center_value,
                grad / (self.dilation * self.center_value),
                hess / (self.dilation ** 2 * self.center_value))


def blowup_rescale(p, x_k):
    """Recenter, dilate by the gradient magnitude, normalize the value."""
    return BlowupProfile(p, x_k)


def oscillation_on_ball(p, radius, num_samples=4096):
    """max - min of a profile over the ball ``|y| <= radius``.

    Radial structure is exploited exactly: the image of the ball under the
    blow-up coordinates covers an interval of radii of the base profile.
    """
    if isinstance(p, BlowupProfile) and isinstance(p.base, conformal.RadialProfile) \
            and p.base.centered_at_origin:
        s_k = float(np.linalg.norm(p.center))
        half = radius / p.dilation
        lo = max(s_k - half, 0.0)
        if p.base.excludes_origin:
            lo = max(lo, (s_k + half) / num_samples)
        s = np.linspace(lo, s_k + half, num_samples)
        vals = p.base.radial_value(s) / p.center_value
        return float(np.max(vals) - np.min(vals))
    if isinstance(p, conformal.RadialProfile) and p.centered_at_origin:
        lo = radius / num_samples if p.excludes_origin else 0.0
        s = np.linspace(lo, radius, num_samples)
        vals = p.radial_value(s)
        return float(np.max(vals) - np.min(vals))
    pts = _sobol_ball(p.n, radius, num_samples)
    vals = np.array([p.value(x) for x in pts])
    return float(np.max(vals) - np.min(vals))


# ---------------------------------------------------------------------------
# Bishop-Gromov volume ratio
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VolumeRatioCurve:
    """Geodesic-ball over Euclidean-ball volume ratios ``Q(r)``."""

    n: int
    radii: np.ndarray
    ratios: np.ndarray

    def rows(self):
        return list(zip([float(t) for t in self.radii], [float(t) for t in self.ratios]))

    def to_dict(self):
        return {"n": self.n, "radii": [float(t) for t in self.radii],
                "ratios": [float(t) for t in self.ratios]}


def bishop_gromov_curve(p, r_list, s_max=None, table_size=2048, rtol=1e-9):
    """Volume ratios ``Q(r) = Vol(B_g(0, r)) / Vol(B_euclid(0, r))``.

    The metric is ``g = u^-2 dx^2`` for a radial U-gauge profile ``u``
    (other gauges are converted).  Geodesic radius and ball volume reduce to
    the 1-D integrals

        rho(s) = int_0^s dt / u(t),
        Vol(s) = area(S^(n-1)) int_0^s t^(n-1) / u(t)^n dt,

    and ``s(r)`` is found by monotone bisection on the cumulative table of
    ``rho``.  Radii beyond the reachable geodesic radius raise a domain
    error.
    """
    pu = conformal.gauge_convert(p, "u")
    if not (isinstance(pu, conformal.RadialProfile) and pu.centered_at_origin):
        raise DomainError("volume comparison requires a radial profile centered at 0")
    if pu.background.kind != "flat":
        raise DomainError("volume comparison is defined over the flat background")
    r_list = np.asarray(r_list, dtype=float)
    if np.any(r_list <= 0.0):
        raise DomainError("radii must be positive")
    n = pu.n
    u = pu.radial_value

    def inv_u(t):
        val = u(t)
        if np.any(val <= 0.0):
            raise DomainError("u must be positive on the integration range")
        return 1.0 / val

    def vol_density(t):
        return t ** (n - 1) * inv_u(t) ** n

    r_max = float(np.max(r_list))
    domain_cap = pu.domain[1]
    if s_max is None:
        s_max = domain_cap if np.isfinite(domain_cap) else max(4.0 * r_max, 4.0)
    allow_growth = not np.isfinite(domain_cap)

    while True:
        nodes = np.concatenate([[0.0], np.geomspace(min(1e-4, s_max * 1e-6), s_max,
                                                    table_size)])
        rho_steps = adaptive_simpson(inv_u, nodes[:-1], nodes[1:], rtol=rtol)
        vol_steps = adaptive_simpson(vol_density, nodes[:-1], nodes[1:], rtol=rtol)
        rho_tab = np.concatenate([[0.0], np.cumsum(rho_steps)])
        vol_tab = np.concatenate([[0.0], np.cumsum(vol_steps)])
        reach = float(rho_tab[-1])
        if reach >= r_max - 1e-9 or not allow_growth or s_max >= 1e10:
            break
        s_max *= 8.0

    if r_max > reach + 1e-8 * (1.0 + r_max):
        raise DomainError(
            f"radius {r_max:g} exceeds the reachable geodesic radius {reach:g}")

    def rho_at(s):
        j = np.searchsorted(nodes, s, side="right") - 1
        j = min(max(j, 0), nodes.size - 2)
        extra = adaptive_simpson(inv_u, nodes[j], s, rtol=rtol)[0] if s > nodes[j] else 0.0
        return rho_tab[j] + extra, j

    area = unit_sphere_area(n)
    ball = unit_ball_volume(n)
    ratios = np.empty(r_list.size)
    for idx, r in enumerate(r_list):
        if r >= reach:
            s_r, j = float(nodes[-1]), nodes.size - 2
            vol = vol_tab[-1]
        else:
            lo, hi = 0.0, float(nodes[-1])
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                val, _ = rho_at(mid)
                if val < r:
                    lo = mid
                else:
                    hi = mid
                if hi - lo <= 1e-13 * (1.0 + hi):
                    break
            s_r = 0.5 * (lo + hi)
            j = min(max(np.searchsorted(nodes, s_r, side="right") - 1, 0), nodes.size - 2)
            vol = vol_tab[j]
            if s_r > nodes[j]:
                vol = vol + adaptive_simpson(vol_density, nodes[j], s_r, rtol=rtol)[0]
        ratios[idx] = area * vol / (ball * r ** n)
    return VolumeRatioCurve(n=n, radii=r_list.copy(), ratios=ratios)


# ---------------------------------------------------------------------------
# Harnack exponent and Holder seminorm
# ---------------------------------------------------------------------------

def harnack_beta(delta, n):
    """Holder exponent ``(1 - delta (n-2)) / (1 + delta)``.

    Defined for ``0 <= delta < 1/(n-2)``; outside that range the exponent
    would leave (0, 1] and a domain error is raised.
    """
    if n < 3:
        raise DomainError(f"dimension n={n} must be >= 3")
    if delta < 0.0 or delta >= 1.0 / (n - 2):
        raise DomainError(
            f"delta must lie in [0, 1/(n-2)) = [0, {1.0 / (n - 2):g}), got {delta}")
    return (1.0 - delta * (n - 2)) / (1.0 + delta)


def holder_check(points, values, beta):
    """Sampled Holder seminorm ``max |w(x) - w(y)| / |x - y|^beta``."""
    points = np.asarray(points, dtype=float)
    values = np.asarray(values, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if points.shape[0] != values.shape[0] or points.shape[0] < 2:
        raise DomainError("need >= 2 sample points with matching values")
    if not 0.0 < beta <= 1.0:
        raise DomainError(f"beta must lie in (0, 1], got {beta}")
    diff = np.abs(values[:, None] - values[None, :])
    dist = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1)
    iu = np.triu_indices(points.shape[0], k=1)
    d = dist[iu]
    if np.any(d <= 0.0):
        raise DomainError("pairwise distances must be positive")
    return float(np.max(diff[iu] / d ** beta))


@dataclass(frozen=True)
class HarnackReport:
    """Exponent and sampled seminorm for one conformal factor."""

    delta: float
    n: int
    beta: float
    seminorm: float
    samples: int

    def to_dict(self):
        return {"delta": self.delta, "n": self.n, "beta": self.beta,
                "seminorm": self.seminorm, "samples": self.samples}


def harnack_report(delta, n, points, values):
    beta = harnack_beta(delta, n)
    return HarnackReport(delta=delta, n=n, beta=beta,
                         seminorm=holder_check(points, values, beta),
                         samples=int(np.asarray(values).shape[0]))
