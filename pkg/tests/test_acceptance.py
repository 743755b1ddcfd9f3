"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines and timings.  Tolerances and runtime budgets are pinned here and are
not calibrated anywhere else.
"""

import time
from contextlib import contextmanager

import numpy as np
import pytest

from confhess import cones, conformal, diagnostics, radial_solver, symfun

SEED = 12345


@contextmanager
def criterion(num, name, budget_seconds):
    start = time.perf_counter()
    state = {"ok": False}
    try:
        yield state
        state["ok"] = True
    finally:
        elapsed = time.perf_counter() - start
        verdict = "PASS" if state["ok"] and elapsed < budget_seconds else "FAIL"
        print(f"ACCEPTANCE {num:2d} {name}: {verdict} ({elapsed:.2f} s, budget "
              f"{budget_seconds:g} s)")
        if state["ok"]:
            assert elapsed < budget_seconds, f"criterion {num} exceeded runtime budget"


def random_points(n, count, rng, lo=0.3, hi=2.0):
    x = rng.normal(size=(count, n))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x * rng.uniform(lo, hi, size=(count, 1))


def catalog_operators(n):
    return [
        symfun.SigmaKRoot(n=n, k=2),
        symfun.Quotient(n=n, k=2, l=1),
        symfun.PucciMin(n=n, k=2, delta=0.5),
        symfun.InvPowerSum(n=n),
        symfun.InvMonomialSum(n=n, k=3),
        symfun.RicciComposite(n=n, inner=symfun.SigmaKRoot(n=n, k=2)),
    ]


def test_criterion_01_flatness_identities():
    with criterion(1, "flatness identities", 1.0):
        rng = np.random.default_rng(SEED)
        for n in (3, 4, 5, 6):
            profile = conformal.inversion_profile(n)
            for x in random_points(n, 100, rng):
                hess = conformal.conformal_hessian_matrix(profile, x)
                assert np.max(np.abs(hess)) < 1e-10
                assert np.max(np.abs(conformal.schouten_eigs(profile, x))) < 1e-10


def test_criterion_02_bubble_and_sphere_eigenvalues():
    with criterion(2, "bubble and round-sphere eigenvalues", 1.0):
        rng = np.random.default_rng(SEED + 1)
        for n in (3, 4, 5, 6):
            bubble = conformal.bubble_profile(n)
            for x in random_points(n, 100, rng):
                assert np.max(np.abs(conformal.schouten_eigs(bubble, x) - 2.0)) < 1e-8
            sphere_one = conformal.constant_profile(
                n, 1.0, background=conformal.SphereBackground(n, 1.0))
            for x in random_points(n, 5, rng, lo=0.0, hi=1.5):
                assert np.max(np.abs(conformal.schouten_eigs(sphere_one, x) - 0.5)) < 1e-10


def test_criterion_03_axiom_suite():
    with criterion(3, "axiom suite, six operators", 30.0):
        for n in (3, 4, 5):
            for op in catalog_operators(n):
                report = symfun.verify_axioms(op, 10000, seed=SEED + n)
                assert report.ok, (op.descriptor(), n, report.violations)


def test_criterion_04_cone_inclusion():
    with criterion(4, "Garding cone inclusion sweep", 30.0):
        for n in (3, 4, 5, 6):
            for k in range(2, n + 1):
                report = cones.gamma_sigma_inclusion_test(k, n, 100000,
                                                          seed=SEED + 10 * n + k)
                assert report.violations == 0, (k, n, report.violations)
                assert report.worst_margin > 0.0


def test_criterion_05_kelvin_covariance():
    with criterion(5, "Kelvin eigenvalue covariance", 5.0):
        rng = np.random.default_rng(SEED + 2)
        n = 4
        families = [
            conformal.constant_profile(n, 2.0),
            conformal.bubble_profile(n, scale=0.8,
                                     center=np.array([0.3, 0.0, 0.0, 0.1])),
            conformal.inversion_profile(n, coefficient=1.5),
        ]
        points = random_points(n, 1000, rng)
        for profile in families:
            transform = conformal.kelvin(profile)
            for x in points[rng.choice(1000, 334, replace=False)]:
                got = conformal.schouten_eigs(transform, x)
                want = conformal.schouten_eigs(profile, x / float(x @ x))
                assert np.max(np.abs(got - want)) < 1e-7


def test_criterion_06_solver_exactness():
    with criterion(6, "solver exactness on the bubble annulus", 10.0):
        op = symfun.SigmaKRoot(n=4, k=2)
        bubble = conformal.bubble_profile(4)
        cfg = radial_solver.SolverConfig(
            operator=op, domain=(0.1, 2.0), grid=32,
            rhs=2.0 * np.sqrt(6.0),
            boundary_left=float(bubble.radial_value(0.1)),
            boundary_right=float(bubble.radial_value(2.0)),
            initial_guess={"kind": "profile", "name": "bubble:scale=1",
                           "sin_amplitude": 0.05})
        # every accepted Newton iterate stays strictly admissible at all nodes
        margins_seen = []
        out = radial_solver.newton_solve(
            cfg, iterate_hook=lambda v, m: margins_seen.append(float(np.max(m))))
        assert out.converged
        assert all(m < 0.0 for m in margins_seen)
        study = radial_solver.convergence_study(cfg, 3, bubble)
        assert [g for g, _ in study.levels] == [32, 64, 128]
        for order in study.orders:
            assert 1.7 < order < 2.3, study.levels


def test_criterion_07_continuation_sweep():
    with criterion(7, "upward exponent continuation", 30.0):
        op = symfun.SigmaKRoot(n=4, k=2)
        bubble = conformal.bubble_profile(4)
        cfg = radial_solver.SolverConfig(
            operator=op, domain=(0.5, 2.0), grid=64,
            rhs=2.0 * np.sqrt(6.0),
            boundary_left=float(bubble.radial_value(0.5)),
            boundary_right=float(bubble.radial_value(2.0)),
            initial_guess={"kind": "profile", "name": "bubble:scale=1"})
        schedule = np.linspace(cfg.natural_exponent, cfg.natural_exponent + 1.0, 5)
        results = radial_solver.continuation_p(cfg, schedule)
        assert len(results) == 5
        assert all(r.converged for r in results)
        for a, b in zip(results, results[1:]):
            assert float(np.max(np.abs(a.v - b.v))) < 0.2


def test_criterion_08_bishop_gromov():
    with criterion(8, "Bishop-Gromov volume ratios", 5.0):
        flat = conformal.constant_profile(3, 1.0, gauge="u")
        curve = diagnostics.bishop_gromov_curve(flat, np.linspace(0.1, 2.0, 20))
        assert np.max(np.abs(curve.ratios - 1.0)) < 1e-8
        sphere = conformal.RadialProfile(
            lambda s: (1.0 + np.asarray(s, dtype=float) ** 2) / 2.0,
            lambda s: np.asarray(s, dtype=float),
            lambda s: np.ones_like(np.asarray(s, dtype=float)),
            3, gauge="u")
        radii = np.linspace(0.3, np.pi, 20)
        curve = diagnostics.bishop_gromov_curve(sphere, radii)
        assert np.all(np.diff(curve.ratios) < 0.0)
        assert abs(curve.ratios[-1] - 3.0 / (2.0 * np.pi ** 2)) < 1e-4


def test_criterion_09_harnack_exponent():
    with criterion(9, "Harnack exponent", 1.0):
        for n in (3, 4, 5, 6):
            assert diagnostics.harnack_beta(0.0, n) == 1.0
            with pytest.raises(Exception) as err:
                diagnostics.harnack_beta(1.0 / (n - 2), n)
            assert "delta" in str(err.value)
        assert diagnostics.harnack_beta(0.25, 4) == 0.4


def test_criterion_10_jacobian_check():
    with criterion(10, "solver Jacobian vs finite differences", 5.0):
        bubble = conformal.bubble_profile(4)
        for text in ("sigma-root:k=2", "quotient:k=2,l=1", "pucci:k=1,delta=0.25"):
            op = symfun.parse_operator(text, 4)
            phi = float(symfun.eval_op(op, np.full(4, 2.0)))
            cfg = radial_solver.SolverConfig(
                operator=op, domain=(0.1, 2.0), grid=32, rhs=phi,
                boundary_left=float(bubble.radial_value(0.1)),
                boundary_right=float(bubble.radial_value(2.0)))
            r = cfg.nodes()
            v = bubble.radial_value(r) * (1.0 + 0.02 * np.sin(2.0 * r))
            assert np.all(radial_solver.admissibility_margins(cfg, v) < 0.0)
            ab = radial_solver.jacobian(cfg, v)
            m = v.size
            dense = np.zeros((m, m))
            dense[np.arange(m), np.arange(m)] = ab[1]
            dense[np.arange(m - 1), np.arange(1, m)] = ab[0, 1:]
            dense[np.arange(1, m), np.arange(m - 1)] = ab[2, :-1]
            h = 1e-6
            for j in range(m):
                e = np.zeros(m)
                e[j] = h
                col = (radial_solver.residual(cfg, v + e)
                       - radial_solver.residual(cfg, v - e)) / (2.0 * h)
                denom = np.maximum(np.abs(col), 1.0)
                assert np.max(np.abs(dense[:, j] - col) / denom) < 1e-4, text


def test_criterion_11_blowup_demonstration():
    with criterion(11, "blow-up monitor growth and rescaled flattening", 10.0):
        n = 4
        monitors, oscillations = [], []
        for eps in (0.5, 0.25, 0.125):
            family = conformal.bubble_profile(n, scale=eps)
            monitor = diagnostics.gradient_monitor(family, 1.0)
            monitors.append(monitor.supremum)
            x_k = np.zeros(n)
            x_k[0] = monitor.location
            rescaled = diagnostics.blowup_rescale(family, x_k)
            assert rescaled.value(np.zeros(n)) == 1.0
            oscillations.append(diagnostics.oscillation_on_ball(rescaled, 1.0))
        assert monitors[0] < monitors[1] < monitors[2], monitors
        assert oscillations[0] > oscillations[1] > oscillations[2], oscillations
