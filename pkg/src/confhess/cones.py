"""Admissibility cones: membership, boundary location, sampling, inclusions.

Three cone families are supported:

* ``GammaK(n, k)``  -- the Garding cone where ``sigma_1 .. sigma_k`` are all
  positive (``k = 1`` is the half-space ``sum lam_i > 0``, ``k = n`` the
  positive orthant);
* ``SigmaDelta(n, delta)`` -- ``min lam_i + delta * sum lam_i > 0``, the cone
  characterizing Ricci-curvature positivity when ``delta = 1/(n-2)``;
* ``Positivity(spec)`` -- the set where a curvature operator is defined and
  strictly positive, used by operators whose natural cone has no closed form.

Membership is strict (the cones are open); callers that need robustness
inspect the margin returned by :func:`boundary_shift`.
"""

from dataclasses import dataclass

import numpy as np

from . import _poly
from .errors import DomainError

#: Relative tolerance for bisection-based boundary location.
BOUNDARY_TOL = 1e-12


def _check_dim(n):
    if n < 3:
        raise DomainError(f"dimension n={n} must be >= 3")


@dataclass(frozen=True)
class GammaK:
    """Cone where sigma_1 .. sigma_k of the eigenvalues are all positive."""

    n: int
    k: int

    def __post_init__(self):
        _check_dim(self.n)
        if not 1 <= self.k <= self.n:
            raise DomainError(f"GammaK requires 1 <= k <= n, got k={self.k}, n={self.n}")

    def contains(self, lam):
        e = _poly.elementary_all(lam, self.k)
        return np.all(e[..., 1:] > 0.0, axis=-1)

    def violation(self, lam):
        """Text of the first violated condition, or None if inside."""
        e = _poly.elementary_all(lam, self.k)
        for j in range(1, self.k + 1):
            val = float(e[..., j])
            if not val > 0.0:
                return f"sigma_{j} = {val:g} <= 0"
        return None

    def descriptor(self):
        return f"gamma:k={self.k}"


@dataclass(frozen=True)
class SigmaDelta:
    """Cone ``min lam_i + delta * sum lam_i > 0`` with ``delta >= 0``."""

    n: int
    delta: float

    def __post_init__(self):
        _check_dim(self.n)
        if self.delta < 0:
            raise DomainError(f"SigmaDelta requires delta >= 0, got {self.delta}")

    def margin_value(self, lam):
        lam = np.asarray(lam, dtype=float)
        return np.min(lam, axis=-1) + self.delta * np.sum(lam, axis=-1)

    def contains(self, lam):
        return self.margin_value(lam) > 0.0

    def violation(self, lam):
        val = float(self.margin_value(lam))
        if not val > 0.0:
            return f"min lam_i + {self.delta:g} * sum lam_i = {val:g} <= 0"
        return None

    def descriptor(self):
        return f"sigma:delta={self.delta:g}"


@dataclass(frozen=True)
class Positivity:
    """Cone where an operator's evaluation chain is defined and positive.

    ``spec`` is any object exposing ``n`` and ``admissible(lam) -> bool``.
    """

    spec: object

    @property
    def n(self):
        return self.spec.n

    def contains(self, lam):
        return self.spec.admissible(lam)

    def violation(self, lam):
        if not bool(self.spec.admissible(lam)):
            return f"{self.spec.descriptor()} not defined-and-positive"
        return None

    def descriptor(self):
        return f"positivity:{self.spec.descriptor()}"


def cone_contains(cone, lam):
    """Strict membership test; broadcasts over leading axes of ``lam``."""
    lam = np.asarray(lam, dtype=float)
    if lam.shape[-1] != cone.n:
        raise DomainError(f"tuple length {lam.shape[-1]} != cone dimension {cone.n}")
    return cone.contains(lam)


def cone_violation(cone, lam):
    """Human-readable violated condition for a single tuple, or None."""
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 1 or lam.shape[-1] != cone.n:
        raise DomainError("cone_violation expects a single tuple of length n")
    return cone.violation(lam)


def boundary_shift(cone, lam, tol=BOUNDARY_TOL):
    """Shift ``t*`` along the diagonal with ``lam + t* (1,..,1)`` on the boundary.

    Negative ``t*`` means ``lam`` is interior and ``-t*`` is its margin along
    the diagonal direction.  Membership along the diagonal is monotone (every
    supported cone is convex and contains the positive diagonal ray), so the
    crossing is unique; ``SigmaDelta`` is solved in closed form, the other
    cones by bisection to ``tol`` relative accuracy.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.shape[-1] != cone.n:
        raise DomainError(f"tuple length {lam.shape[-1]} != cone dimension {cone.n}")
    if isinstance(cone, SigmaDelta):
        return -cone.margin_value(lam) / (1.0 + cone.n * cone.delta)

    squeeze = lam.ndim == 1
    pts = np.atleast_2d(lam)
    m = pts.shape[0]

    def inside(t):
        return cone.contains(pts + t[:, None])

    scale = 1.0 + np.max(np.abs(pts), axis=-1)
    zero = np.zeros(m)
    inside0 = inside(zero)

    # Bracket: hi inside the cone, lo outside.
    hi = np.where(inside0, 0.0, scale)
    need = ~inside(hi)
    while np.any(need):
        hi = np.where(need, 2.0 * hi + scale, hi)
        need = ~inside(hi)
    lo = np.where(inside0, -scale, 0.0)
    need = inside(lo)
    while np.any(need):
        lo = np.where(need, 2.0 * lo - scale, lo)
        need = inside(lo)

    for _ in range(200):
        gap = hi - lo
        bound = tol * (1.0 + np.abs(hi) + np.abs(lo))
        if np.all(gap <= bound):
            break
        mid = 0.5 * (lo + hi)
        ok = inside(mid)
        hi = np.where(ok, mid, hi)
        lo = np.where(ok, lo, mid)
    out = 0.5 * (lo + hi)
    return out[0] if squeeze else out.reshape(lam.shape[:-1])


def sample_cone(cone, size, rng=None, fraction_range=(1e-3, 1.0)):
    """Draw ``size`` points strictly inside ``cone``.

    Gaussian proposals are projected to the cone boundary along the diagonal
    (via :func:`boundary_shift`) and then stepped inside by a uniformly drawn
    fraction of the local scale, which produces samples at widely varied
    distances from the boundary.  The boundary is located far more coarsely
    than the public tolerance: the inward step dominates any 1e-6 slack.
    """
    if rng is None:
        rng = np.random.default_rng()
    g = rng.standard_normal((size, cone.n))
    t = boundary_shift(cone, g, tol=1e-6)
    u = rng.uniform(fraction_range[0], fraction_range[1], size)
    step = u * np.maximum(np.abs(t), 1.0)
    return g + (t + step)[:, None]


@dataclass(frozen=True)
class InclusionReport:
    """Outcome of a sampled cone-inclusion test."""

    k: int
    n: int
    delta: float
    samples: int
    violations: int
    worst_margin: float

    def to_dict(self):
        return {
            "k": self.k,
            "n": self.n,
            "delta": self.delta,
            "samples": self.samples,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
        }


def inclusion_delta(k, n):
    """The diagonal-shift parameter ``(n - k) / (n (k - 1))`` of the inclusion."""
    if k < 2:
        raise DomainError("inclusion formula degenerates for k = 1")
    if not k <= n:
        raise DomainError(f"need 2 <= k <= n, got k={k}, n={n}")
    return (n - k) / (n * (k - 1))


def gamma_sigma_inclusion_test(k, n, samples, seed):
    """Sample GammaK and verify membership in the matching SigmaDelta cone.

    Checks the inclusion of the k-th Garding cone in
    ``SigmaDelta((n - k) / (n (k - 1)))``; the report carries the worst
    observed margin ``min lam_i + delta * sum lam_i`` (expected positive).
    """
    _check_dim(n)
    delta = inclusion_delta(k, n)
    rng = np.random.default_rng(seed)
    gamma = GammaK(n, k)
    sigma_cone = SigmaDelta(n, delta)
    lam = sample_cone(gamma, samples, rng)
    margins = sigma_cone.margin_value(lam)
    violations = int(np.count_nonzero(~(margins > 0.0)))
    return InclusionReport(
        k=k,
        n=n,
        delta=delta,
        samples=samples,
        violations=violations,
        worst_margin=float(np.min(margins)),
    )


def min_k_positive_ricci(n):
    """Smallest k such that admissibility in GammaK forces positive Ricci.

    Positive Ricci curvature follows for ``k > n/2``; the smallest such
    integer is ``floor(n/2) + 1``.
    """
    _check_dim(n)
    return n // 2 + 1


def parse_cone(text, n):
    """Parse the canonical textual cone forms ``gamma:k=K`` / ``sigma:delta=D``."""
    from .errors import UsageError

    head, _, rest = text.partition(":")
    fields = {}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            if not val:
                raise UsageError(f"cone field '{item}' is not key=value")
            fields[key.strip()] = val.strip()
    try:
        if head == "gamma":
            return GammaK(n=n, k=int(fields["k"]))
        if head == "sigma":
            return SigmaDelta(n=n, delta=float(fields["delta"]))
    except KeyError as exc:
        raise UsageError(f"cone '{text}' is missing field {exc}") from exc
    except ValueError as exc:
        raise UsageError(f"cone '{text}': {exc}") from exc
    raise UsageError(f"unknown cone '{head}' (expected gamma:k=K or sigma:delta=D)")
