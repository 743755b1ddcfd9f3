"""Symmetric curvature functions of eigenvalue tuples.

The catalog covers the operator families commonly used for fully nonlinear
conformal curvature equations:

* ``SigmaKRoot``      -- ``sigma_k(lam)^(1/k)``;
* ``Quotient``        -- ``(sigma_k / sigma_l)^(1/(k-l))``;
* ``PucciMin``        -- ``delta * sum(lam) + min over k-subsets of subset sums``;
* ``InvPowerSum``     -- ``(sum lam_i^-2)^(-1/2)``;
* ``InvMonomialSum``  -- ``[sum over |a| = k of lam^-a]^(-1/k)``;
* ``Shifted``         -- ``f1(lam + delta * f2(lam) * (1,..,1))``;
* ``RicciComposite``  -- the Shifted instance with ``delta = 1/(n-2)`` and
  ``f2 = sum``, i.e. the inner operator evaluated on the Ricci eigenvalues.

Every operator is positive on its cone, vanishes on the cone boundary, has a
strictly positive gradient, is concave, permutation symmetric, and positively
homogeneous of degree ``alpha`` (degree 1 throughout this catalog).
:func:`verify_axioms` spot-checks all of these on random cone samples.

Evaluation sorts the tuple first, which makes permutation symmetry hold
bitwise, and gradients are scattered back through the inverse permutation.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _poly, cones
from .errors import AdmissibilityError, DomainError

#: Type used for eigenvalue tuples throughout the package: the trailing axis
#: holds the n eigenvalues; leading axes are broadcast batch axes.
EigenTuple = np.ndarray

#: Relative gap under which the minimizing subset of PucciMin is considered
#: tied and the gradient is only a subgradient selection.
PUCCI_TIE_TOL = 1e-12

#: Default tolerances used by verify_axioms.
HOMOGENEITY_TOL = 1e-12     # relative, axiom f5
CONCAVITY_TOL = 1e-12       # absolute midpoint defect, axiom f3
PERMUTATION_TOL = 1e-14     # relative, axiom f4
ORTHOGONAL_TOL = 1e-9       # relative, invariance under conjugation
BOUNDARY_DECAY = 0.5        # required decay factor approaching the boundary

_QUIET = {"invalid": "ignore", "divide": "ignore", "over": "ignore"}


def as_eigentuple(values, n=None):
    """Validate and coerce an eigenvalue tuple (or batch of tuples)."""
    lam = np.asarray(values, dtype=float)
    if lam.ndim == 0:
        raise DomainError("eigenvalue tuple must have at least one axis")
    if n is not None and lam.shape[-1] != n:
        raise DomainError(f"tuple length {lam.shape[-1]} != expected dimension {n}")
    if lam.shape[-1] < 3:
        raise DomainError(f"dimension {lam.shape[-1]} must be >= 3")
    if not np.all(np.isfinite(lam)):
        raise DomainError("eigenvalue tuples must be finite")
    return lam


def sigma_k(lam, k):
    """k-th elementary symmetric polynomial of an eigenvalue tuple.

    Computed by the incremental characteristic-polynomial recurrence, which
    is stable for mixed-sign eigenvalues; exact for small integer inputs up
    to rounding.
    """
    lam = as_eigentuple(lam)
    n = lam.shape[-1]
    if not 1 <= k <= n:
        raise DomainError(f"sigma_k requires 1 <= k <= n, got k={k}, n={n}")
    return _poly.sigma(np.sort(lam, axis=-1), k)


def ricci_map(lam):
    """Ricci eigenvalues from Schouten eigenvalues: ``mu_i = lam_i + sum(lam)/(n-2)``."""
    lam = as_eigentuple(lam)
    n = lam.shape[-1]
    return lam + (np.sum(lam, axis=-1, keepdims=True) / (n - 2))


def _sort_with_order(lam):
    order = np.argsort(lam, axis=-1, kind="stable")
    return np.take_along_axis(lam, order, axis=-1), order


def _scatter(values_sorted, order):
    out = np.empty_like(values_sorted)
    np.put_along_axis(out, order, values_sorted, axis=-1)
    return out


class CurvatureOperator:
    """Shared behaviour for the operator catalog.

    Subclasses implement ``_value_sorted`` / ``_gradient_sorted`` /
    ``_quadform`` on ascending-sorted tuples.  ``value`` and ``gradient``
    evaluate the raw formulas wherever they make sense (NaN where they do
    not) and leave cone gating to :func:`eval_op` / :func:`grad_op`.
    """

    def value(self, lam):
        lam = as_eigentuple(lam, self.n)
        ls = np.sort(lam, axis=-1, kind="stable")
        with np.errstate(**_QUIET):
            return self._value_sorted(ls)

    def gradient(self, lam):
        lam = as_eigentuple(lam, self.n)
        ls, order = _sort_with_order(lam)
        with np.errstate(**_QUIET):
            return _scatter(self._gradient_sorted(ls), order)

    def gradient_flagged(self, lam):
        """Gradient plus a smoothness mask (False only at PucciMin ties)."""
        return self.gradient(lam), np.ones(np.asarray(lam).shape[:-1], dtype=bool)

    def hessian_quadform(self, lam, b):
        lam = as_eigentuple(lam, self.n)
        b = np.asarray(b, dtype=float)
        with np.errstate(**_QUIET):
            return self._quadform(lam, b)

    def admissible(self, lam):
        return cones.cone_contains(self.cone, lam)

    def _quadform_fd(self, lam, b, h=None):
        """Second-order central difference along ``b``; the fallback when no
        analytic Hessian is coded, and the midpoint concavity defect at
        non-smooth points."""
        if h is None:
            scale = np.maximum(np.max(np.abs(lam), axis=-1, keepdims=True), 1.0)
            h = 1.22e-4 * scale / np.maximum(np.linalg.norm(b, axis=-1, keepdims=True), 1e-30)
        fp = self.value(lam + h * b)
        fm = self.value(lam - h * b)
        f0 = self.value(lam)
        return (fp - 2.0 * f0 + fm) / np.squeeze(h, axis=-1) ** 2


@dataclass(frozen=True)
class SigmaKRoot(CurvatureOperator):
    """``f = sigma_k(lam)^(1/k)`` on the k-th Garding cone."""

    n: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise DomainError(f"SigmaKRoot requires 1 <= k <= n, got k={self.k}, n={self.n}")
        cones._check_dim(self.n)

    alpha = 1.0

    @property
    def cone(self):
        return cones.GammaK(self.n, self.k)

    def descriptor(self):
        return f"sigma-root:k={self.k}"

    def _value_sorted(self, ls):
        s = _poly.sigma(ls, self.k)
        if self.k == 1:
            return s
        return np.power(s, 1.0 / self.k)

    def _gradient_sorted(self, ls):
        if self.k == 1:
            return np.ones_like(ls)
        s = _poly.sigma(ls, self.k)
        partial = _poly.elementary_excluding(ls, self.k - 1)[..., :, self.k - 1]
        pref = (1.0 / self.k) * np.power(s, 1.0 / self.k - 1.0)
        return pref[..., None] * partial

    def _quadform(self, lam, b):
        if self.k == 1:
            return np.zeros(lam.shape[:-1])
        k = self.k
        s = _poly.sigma(lam, k)
        grad_s = _poly.elementary_excluding(lam, k - 1)[..., :, k - 1]
        pair = _poly.elementary_excluding_pair(lam, max(k - 2, 0))[..., k - 2]
        bb = b[..., :, None] * b[..., None, :]
        off = ~np.eye(self.n, dtype=bool)
        bhb_sigma = np.sum(np.where(off, pair * bb, 0.0), axis=(-2, -1))
        gb = np.sum(grad_s * b, axis=-1)
        t1 = (1.0 / k) * np.power(s, 1.0 / k - 1.0) * bhb_sigma
        t2 = (1.0 / k) * (1.0 / k - 1.0) * np.power(s, 1.0 / k - 2.0) * gb ** 2
        return t1 + t2


@dataclass(frozen=True)
class Quotient(CurvatureOperator):
    """``f = (sigma_k / sigma_l)^(1/(k-l))`` on the k-th Garding cone."""

    n: int
    k: int
    l: int

    def __post_init__(self):
        if not 0 <= self.l < self.k <= self.n:
            raise DomainError(
                f"Quotient requires 0 <= l < k <= n, got k={self.k}, l={self.l}, n={self.n}")
        cones._check_dim(self.n)

    alpha = 1.0

    @property
    def cone(self):
        return cones.GammaK(self.n, self.k)

    def descriptor(self):
        return f"quotient:k={self.k},l={self.l}"

    def _sigmas(self, ls):
        e = _poly.elementary_all(ls, self.k)
        sl = e[..., self.l] if self.l > 0 else np.ones(ls.shape[:-1])
        return e[..., self.k], sl

    def _value_sorted(self, ls):
        sk, sl = self._sigmas(ls)
        return np.power(sk / sl, 1.0 / (self.k - self.l))

    def _gradient_sorted(self, ls):
        k, l = self.k, self.l
        sk, sl = self._sigmas(ls)
        f = np.power(sk / sl, 1.0 / (k - l))
        ex = _poly.elementary_excluding(ls, k - 1)
        dk = ex[..., :, k - 1]
        dl = ex[..., :, l - 1] if l >= 1 else np.zeros_like(ls)
        ratio = dk / sk[..., None] - dl / sl[..., None]
        return (f / (k - l))[..., None] * ratio

    def _quadform(self, lam, b):
        k, l = self.k, self.l
        ls = lam  # quadform is permutation covariant; sorting unnecessary here
        sk, sl = self._sigmas(ls)
        f = np.power(sk / sl, 1.0 / (k - l))
        ex = _poly.elementary_excluding(ls, k - 1)
        pair = _poly.elementary_excluding_pair(ls, max(k - 2, 0))
        off = ~np.eye(self.n, dtype=bool)
        bb = b[..., :, None] * b[..., None, :]

        def log_terms(m, sm):
            gm = ex[..., :, m - 1] if m >= 1 else np.zeros_like(ls)
            gb = np.sum(gm * b, axis=-1)
            if m >= 2:
                hm = np.sum(np.where(off, pair[..., m - 2] * bb, 0.0), axis=(-2, -1))
            else:
                hm = np.zeros(ls.shape[:-1])
            return hm / sm - (gb / sm) ** 2, gb / sm

        hk, gk = log_terms(k, sk)
        hl, gl = log_terms(l, sl)
        dlogf = (gk - gl) / (k - l)
        d2logf = (hk - hl) / (k - l)
        return f * (dlogf ** 2 + d2logf)


@dataclass(frozen=True)
class PucciMin(CurvatureOperator):
    """``delta * sum(lam) + min over k-subsets of the subset sum``.

    Piecewise linear; with ``delta > 0`` this is the uniformly elliptic
    extremal (Pucci-type) operator.  The minimizing subset is the k smallest
    entries, ties resolved toward lower original indices.
    """

    n: int
    k: int
    delta: float

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise DomainError(f"PucciMin requires 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.delta < 0:
            raise DomainError(f"PucciMin requires delta >= 0, got {self.delta}")
        cones._check_dim(self.n)

    alpha = 1.0

    @property
    def cone(self):
        return cones.Positivity(self)

    def descriptor(self):
        return f"pucci:k={self.k},delta={self.delta:g}"

    def admissible(self, lam):
        return self.value(lam) > 0.0

    def _value_sorted(self, ls):
        return self.delta * np.sum(ls, axis=-1) + np.sum(ls[..., :self.k], axis=-1)

    def _gradient_sorted(self, ls):
        g = np.full_like(ls, self.delta)
        g[..., :self.k] += 1.0
        return g

    def is_smooth_at(self, lam):
        """False where the two smallest k-subset sums are tied within tolerance."""
        lam = as_eigentuple(lam, self.n)
        if self.k == self.n:
            return np.ones(lam.shape[:-1], dtype=bool)
        ls = np.sort(lam, axis=-1)
        gap = ls[..., self.k] - ls[..., self.k - 1]
        return gap >= PUCCI_TIE_TOL * np.abs(self.value(lam))

    def gradient_flagged(self, lam):
        return self.gradient(lam), self.is_smooth_at(lam)

    def _quadform(self, lam, b):
        # Locally linear where smooth; at ties report the directional
        # midpoint defect (f(lam+hb) + f(lam-hb))/2 - f(lam), scaled by h^-2,
        # instead of a quadratic form.
        smooth = self.is_smooth_at(lam)
        fd = self._quadform_fd(lam, b)
        return np.where(smooth, 0.0, fd)


@dataclass(frozen=True)
class InvPowerSum(CurvatureOperator):
    """``f = (sum lam_i^-2)^(-1/2)`` on the positive cone."""

    n: int

    def __post_init__(self):
        cones._check_dim(self.n)

    alpha = 1.0

    @property
    def cone(self):
        return cones.GammaK(self.n, self.n)

    def descriptor(self):
        return "inv-power"

    def _value_sorted(self, ls):
        s = np.sum(ls ** -2.0, axis=-1)
        return s ** -0.5

    def _gradient_sorted(self, ls):
        s = np.sum(ls ** -2.0, axis=-1)
        return s[..., None] ** -1.5 * ls ** -3.0

    def _quadform(self, lam, b):
        s = np.sum(lam ** -2.0, axis=-1)
        c3 = np.sum(lam ** -3.0 * b, axis=-1)
        c4 = np.sum(lam ** -4.0 * b ** 2, axis=-1)
        return 3.0 * s ** -2.5 * c3 ** 2 - 3.0 * s ** -1.5 * c4


@dataclass(frozen=True)
class InvMonomialSum(CurvatureOperator):
    """``f = [sum over multi-indices |a| = k of lam^-a]^(-1/k)``.

    The bracket is the complete homogeneous symmetric polynomial of the
    inverse eigenvalues, so the whole operator reduces to stable positive
    recurrences on the positive cone.
    """

    n: int
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"InvMonomialSum requires k >= 1, got {self.k}")
        cones._check_dim(self.n)

    alpha = 1.0

    @property
    def cone(self):
        return cones.GammaK(self.n, self.n)

    def descriptor(self):
        return f"inv-monomial:k={self.k}"

    def _value_sorted(self, ls):
        h = _poly.complete_homogeneous_all(1.0 / ls, self.k)[..., self.k]
        return np.power(h, -1.0 / self.k)

    def _h_and_partials(self, x):
        k = self.k
        hall = _poly.complete_homogeneous_all(x, k)
        h = hall[..., k]
        # dh/dx_i = sum_{m=0..k-1} x_i^m h_{k-1-m}
        xp = np.ones_like(x)
        hi = np.zeros_like(x)
        for m in range(k):
            hi = hi + xp * hall[..., k - 1 - m][..., None]
            xp = xp * x
        return hall, h, hi

    def _gradient_sorted(self, ls):
        x = 1.0 / ls
        _, h, hi = self._h_and_partials(x)
        pref = (1.0 / self.k) * np.power(h, -1.0 / self.k - 1.0)
        return pref[..., None] * hi * x ** 2

    def _quadform(self, lam, b):
        k, n = self.k, self.n
        x = 1.0 / lam
        hall, h, hi = self._h_and_partials(x)
        # Second partials of h_k in x from the generating function\n
        # 1/prod(1 - x_i t): cross terms sum x_i^a x_j^b h_c over a+b+c=k-2,
        # diagonal terms 2 (a+1) x_i^a h_c over a+c=k-2.
        xpows = [np.ones_like(x)]
        for _ in range(max(k - 1, 0)):
            xpows.append(xpows[-1] * x)
        hij = np.zeros(lam.shape[:-1] + (n, n))
        for a in range(k - 1):
            for bdeg in range(k - 1 - a):
                c = k - 2 - a - bdeg
                hij += (xpows[a][..., :, None] * xpows[bdeg][..., None, :]
                        * hall[..., c][..., None, None])
        diag = np.zeros_like(x)
        for a in range(k - 1):
            c = k - 2 - a
            diag = diag + 2.0 * (a + 1) * xpows[a] * hall[..., c][..., None]
        ii = np.arange(n)
        hij[..., ii, ii] = diag
        # F = h^(-1/k) as a function of x, then chain through x = 1/lam.
        Fi = -(1.0 / k) * np.power(h, -1.0 / k - 1.0)[..., None] * hi
        Fij = ((1.0 / k) * (1.0 / k + 1.0) * np.power(h, -1.0 / k - 2.0)[..., None, None]
               * hi[..., :, None] * hi[..., None, :]
               - (1.0 / k) * np.power(h, -1.0 / k - 1.0)[..., None, None] * hij)
        x2 = x ** 2
        fij = Fij * x2[..., :, None] * x2[..., None, :]
        fij[..., ii, ii] += Fi * 2.0 * x ** 3
        return np.einsum("...ij,...i,...j->...", fij, b, b)


@dataclass(frozen=True)
class Shifted(CurvatureOperator):
    """``f(lam) = inner(lam + delta * inner2(lam) * (1,..,1))`` with ``delta > 0``.

    ``inner2`` must be homogeneous of degree 1; the composite inherits the
    homogeneity degree of ``inner``.
    """

    n: int
    inner: CurvatureOperator
    delta: float
    inner2: CurvatureOperator

    def __post_init__(self):
        if self.delta <= 0:
            raise DomainError(f"Shifted requires delta > 0, got {self.delta}")
        if self.inner.n != self.n or self.inner2.n != self.n:
            raise DomainError("Shifted components must share the dimension n")
        if self.inner2.alpha != 1.0:
            raise DomainError("Shifted requires inner2 homogeneous of degree 1")

    @property
    def alpha(self):
        return self.inner.alpha

    @property
    def cone(self):
        return cones.Positivity(self)

    def descriptor(self):
        return (f"shifted:delta={self.delta:g},"
                f"inner={self.inner.descriptor()},inner2={self.inner2.descriptor()}")

    def _shift(self, lam):
        return lam + self.delta * self.inner2.value(lam)[..., None]

    def admissible(self, lam):
        with np.errstate(**_QUIET):
            ok2 = self.inner2.admissible(lam)
            shifted = np.where(ok2[..., None], self._shift(lam), 1.0)
            return ok2 & self.inner.admissible(shifted)

    def _value_sorted(self, ls):
        return self.inner.value(self._shift(ls))

    def _gradient_sorted(self, ls):
        g1 = self.inner.gradient(self._shift(ls))
        g2 = self.inner2.gradient(ls)
        return g1 + self.delta * g2 * np.sum(g1, axis=-1, keepdims=True)

    def _quadform(self, lam, b):
        y = self._shift(lam)
        g2 = self.inner2.gradient(lam)
        mb = b + self.delta * np.sum(g2 * b, axis=-1, keepdims=True)
        g1sum = np.sum(self.inner.gradient(y), axis=-1)
        q2 = self.inner2.hessian_quadform(lam, b)
        return self.inner.hessian_quadform(y, mb) + self.delta * g1sum * q2


@dataclass(frozen=True)
class RicciComposite(CurvatureOperator):
    """Inner operator evaluated on the Ricci eigenvalues.

    The shift ``mu = lam + sum(lam)/(n-2)`` turns an equation on Schouten
    eigenvalues into one on Ricci eigenvalues; this is the degree-1 linear
    instance of :class:`Shifted`.
    """

    n: int
    inner: CurvatureOperator

    def __post_init__(self):
        cones._check_dim(self.n)
        if self.inner.n != self.n:
            raise DomainError("RicciComposite inner operator must share n")

    @property
    def alpha(self):
        return self.inner.alpha

    @property
    def delta(self):
        return 1.0 / (self.n - 2)

    @property
    def cone(self):
        return cones.Positivity(self)

    def descriptor(self):
        return f"ricci:inner={self.inner.descriptor()}"

    def admissible(self, lam):
        lam = np.asarray(lam, dtype=float)
        with np.errstate(**_QUIET):
            return (np.sum(lam, axis=-1) > 0.0) & self.inner.admissible(ricci_map(lam))

    def _value_sorted(self, ls):
        return self.inner.value(ricci_map(ls))

    def _gradient_sorted(self, ls):
        g1 = self.inner.gradient(ricci_map(ls))
        return g1 + self.delta * np.sum(g1, axis=-1, keepdims=True)

    def _quadform(self, lam, b):
        mb = b + self.delta * np.sum(b, axis=-1, keepdims=True)
        return self.inner.hessian_quadform(ricci_map(lam), mb)


def eval_op(spec, lam):
    """Evaluate ``spec`` at ``lam`` after verifying cone admissibility."""
    lam = as_eigentuple(lam, spec.n)
    ok = spec.admissible(lam)
    if not np.all(ok):
        bad = lam if lam.ndim == 1 else lam[np.argwhere(~ok)[0][0]]
        raise AdmissibilityError(
            f"tuple outside the cone of {spec.descriptor()}",
            condition=_violation_text(spec, bad))
    return spec.value(lam)


def grad_op(spec, lam, return_smooth=False):
    """Analytic gradient of ``spec`` at an interior point of its cone.

    With ``return_smooth=True`` also returns a boolean mask that is False at
    non-smooth points (tied PucciMin subsets), where the returned vector is
    one subgradient selection.
    """
    lam = as_eigentuple(lam, spec.n)
    ok = spec.admissible(lam)
    if not np.all(ok):
        bad = lam if lam.ndim == 1 else lam[np.argwhere(~ok)[0][0]]
        raise AdmissibilityError(
            f"tuple outside the cone of {spec.descriptor()}",
            condition=_violation_text(spec, bad))
    if return_smooth:
        return spec.gradient_flagged(lam)
    return spec.gradient(lam)


def concavity_quadform(spec, lam, b):
    """Directional Hessian quadratic form ``b^T (d2 f) b`` at ``lam``.

    Analytic for the smooth catalog operators; for non-smooth points of
    PucciMin the value is the directional midpoint concavity defect instead.
    Nonpositive (up to tolerance) everywhere on the cone by concavity.
    """
    lam = as_eigentuple(lam, spec.n)
    if not np.all(spec.admissible(lam)):
        raise AdmissibilityError(f"tuple outside the cone of {spec.descriptor()}")
    return spec.hessian_quadform(lam, b)


def _violation_text(spec, lam):
    cone = spec.cone
    try:
        return cone.violation(np.asarray(lam, dtype=float))
    except Exception:
        return None


@dataclass(frozen=True)
class AxiomReport:
    """Violation counts and worst defects from an axiom sweep."""

    operator: str
    n: int
    samples: int
    violations: dict = field(default_factory=dict)
    worst: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    @property
    def total_violations(self):
        return int(sum(self.violations.values()))

    @property
    def ok(self):
        return self.total_violations == 0

    def to_dict(self):
        return {
            "operator": self.operator,
            "n": self.n,
            "samples": self.samples,
            "violations": dict(self.violations),
            "worst": dict(self.worst),
            "tolerances": dict(self.tolerances),
            "total_violations": self.total_violations,
        }


def _random_orthogonal(n, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def verify_axioms(spec, samples, seed, boundary_subsample=256, orthogonal_subsample=64):
    """Sample the operator's cone and count violations of its axioms.

    Checks positivity, gradient positivity, midpoint concavity, permutation
    symmetry, homogeneity for random scalings t in (0.1, 10), invariance of
    the induced matrix function under orthogonal conjugation, and decay of f
    along rays approaching the cone boundary.  Violations are counted, never
    raised.
    """
    if samples <= 0:
        raise DomainError(f"samples must be positive, got {samples}")
    rng = np.random.default_rng(seed)
    cone = spec.cone
    lam = cones.sample_cone(cone, samples, rng)
    f = spec.value(lam)

    violations, worst = {}, {}

    violations["f1_positivity"] = int(np.count_nonzero(~(f > 0.0)))
    worst["f1_positivity"] = float(np.min(f))

    g = spec.gradient(lam)
    violations["f2_gradient_positive"] = int(np.count_nonzero(np.any(~(g > 0.0), axis=-1)))
    worst["f2_gradient_positive"] = float(np.min(g))

    mu = cones.sample_cone(cone, samples, rng)
    defect = spec.value(0.5 * (lam + mu)) - 0.5 * (f + spec.value(mu))
    violations["f3_concavity"] = int(np.count_nonzero(defect < -CONCAVITY_TOL))
    worst["f3_concavity"] = float(np.min(defect))

    perm_defect = np.zeros(samples)
    for _ in range(3):
        p = rng.permutation(spec.n)
        fp = spec.value(lam[:, p])
        perm_defect = np.maximum(perm_defect, np.abs(fp - f) / np.abs(f))
    violations["f4_permutation"] = int(np.count_nonzero(perm_defect > PERMUTATION_TOL))
    worst["f4_permutation"] = float(np.max(perm_defect))

    t = rng.uniform(0.1, 10.0, samples)
    ft = spec.value(t[:, None] * lam)
    target = t ** spec.alpha * f
    hom_defect = np.abs(ft - target) / np.abs(target)
    violations["f5_homogeneity"] = int(np.count_nonzero(hom_defect > HOMOGENEITY_TOL))
    worst["f5_homogeneity"] = float(np.max(hom_defect))

    m_orth = min(orthogonal_subsample, samples)
    orth_defect = 0.0
    orth_bad = 0
    for i in range(m_orth):
        q = _random_orthogonal(spec.n, rng)
        a = (q * lam[i]) @ q.T
        eigs = np.linalg.eigvalsh(0.5 * (a + a.T))
        rel = abs(float(spec.value(eigs)) - float(f[i])) / abs(float(f[i]))
        orth_defect = max(orth_defect, rel)
        orth_bad += int(rel > ORTHOGONAL_TOL)
    violations["orthogonal_invariance"] = orth_bad
    worst["orthogonal_invariance"] = float(orth_defect)

    m_b = min(boundary_subsample, samples)
    sub = lam[:m_b]
    tstar = cones.boundary_shift(cone, sub)
    f0 = spec.value(sub)
    ratios = []
    prev = f0
    bad = np.zeros(m_b, dtype=bool)
    for s in (0.9, 0.99, 0.999, 0.9999):
        fs = spec.value(sub + (s * tstar)[:, None])
        bad |= ~(fs < prev)
        prev = fs
        ratios.append(fs / f0)
    bad |= ~(ratios[-1] < BOUNDARY_DECAY)
    violations["boundary_decay"] = int(np.count_nonzero(bad))
    worst["boundary_decay"] = float(np.max(ratios[-1]))

    return AxiomReport(
        operator=spec.descriptor(),
        n=spec.n,
        samples=samples,
        violations=violations,
        worst=worst,
        tolerances={
            "f3_concavity": CONCAVITY_TOL,
            "f4_permutation": PERMUTATION_TOL,
            "f5_homogeneity": HOMOGENEITY_TOL,
            "orthogonal_invariance": ORTHOGONAL_TOL,
            "boundary_decay": BOUNDARY_DECAY,
        },
    )


def parse_operator(text, n):
    """Parse the canonical textual operator forms.

    ``sigma-root:k=2``, ``quotient:k=2,l=1``, ``pucci:k=1,delta=0.25``,
    ``inv-power``, ``inv-monomial:k=3``, ``ricci:inner=<operator>``.
    """
    from .errors import UsageError

    head, _, rest = text.partition(":")
    if head == "ricci":
        if not rest.startswith("inner="):
            raise UsageError("ricci operator must be written ricci:inner=<operator>")
        return RicciComposite(n=n, inner=parse_operator(rest[len("inner="):], n))
    fields = {}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            if not val:
                raise UsageError(f"operator field '{item}' is not key=value")
            fields[key.strip()] = val.strip()
    try:
        if head == "sigma-root":
            return SigmaKRoot(n=n, k=int(fields["k"]))
        if head == "quotient":
            return Quotient(n=n, k=int(fields["k"]), l=int(fields["l"]))
        if head == "pucci":
            return PucciMin(n=n, k=int(fields["k"]), delta=float(fields.get("delta", 0.0)))
        if head == "inv-power":
            return InvPowerSum(n=n)
        if head == "inv-monomial":
            return InvMonomialSum(n=n, k=int(fields["k"]))
    except KeyError as exc:
        raise UsageError(f"operator '{text}' is missing field {exc}") from exc
    except ValueError as exc:
        raise UsageError(f"operator '{text}': {exc}") from exc
    raise UsageError(f"unknown operator '{head}'")
