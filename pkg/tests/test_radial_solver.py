"""Radial Newton solver: residuals, Jacobian, convergence, continuation."""

import dataclasses
import json

import numpy as np
import pytest

from confhess import conformal as cf
from confhess import radial_solver as rs
from confhess import symfun
from confhess.errors import AdmissibilityError, DomainError, NumericError, UsageError

N_DIM = 4
PHI_BUBBLE = 2.0 * np.sqrt(6.0)  # sigma_2^(1/2) at (2, 2, 2, 2)


def bubble_cfg(domain=(0.1, 2.0), grid=64, sin_amplitude=0.05, operator=None, **kw):
    op = operator or symfun.SigmaKRoot(n=N_DIM, k=2)
    bub = cf.bubble_profile(N_DIM)
    phi = float(symfun.eval_op(op, np.full(N_DIM, 2.0)))
    return rs.SolverConfig(
        operator=op, domain=domain, grid=grid, rhs=phi,
        boundary_left=float(bub.radial_value(domain[0])),
        boundary_right=float(bub.radial_value(domain[1])),
        initial_guess={"kind": "profile", "name": "bubble:scale=1",
                       "sin_amplitude": sin_amplitude},
        **kw)


# ---------------------------------------------------------------------------
# residual
# ---------------------------------------------------------------------------

def test_residual_of_exact_bubble_is_second_order():
    # sigma_1 of (2,2,2,2) is 8: the bubble is an exact root of the
    # continuum equation, so only the stencil truncation error remains
    op = symfun.SigmaKRoot(n=N_DIM, k=1)
    bub = cf.bubble_profile(N_DIM)
    norms = {}
    for grid in (64, 128):
        cfg = rs.SolverConfig(operator=op, domain=(0.1, 2.0), grid=grid, rhs=8.0,
                              boundary_left=float(bub.radial_value(0.1)),
                              boundary_right=float(bub.radial_value(2.0)))
        res = rs.residual(cfg, bub.radial_value(cfg.nodes()))
        norms[grid] = float(np.max(np.abs(res)))
    assert norms[64] < 0.05
    assert 3.4 < norms[64] / norms[128] < 4.6


def test_residual_constant_profile_equals_minus_phi():
    # a constant has zero eigenvalues, f = 0 on the cone boundary, so the
    # interior rows read -phi and the boundary rows vanish
    op = symfun.SigmaKRoot(n=N_DIM, k=2)
    cfg = rs.SolverConfig(operator=op, domain=(0.5, 1.5), grid=32, rhs=3.0,
                          boundary_left=2.0, boundary_right=2.0)
    res = rs.residual(cfg, np.full(33, 2.0))
    assert np.allclose(res[1:-1], -3.0, atol=1e-12)
    assert res[0] == 0.0 and res[-1] == 0.0


def test_residual_marks_undefined_nodes_with_nan():
    op = symfun.SigmaKRoot(n=N_DIM, k=2)
    cfg = rs.SolverConfig(operator=op, domain=(0.5, 1.5), grid=32, rhs=3.0,
                          boundary_left=1.0, boundary_right=1.0)
    v = np.ones(33)
    v[16] = 1.4  # spike: sigma_2 of the eigentuple goes negative nearby
    res = rs.residual(cfg, v)
    margins = rs.admissibility_margins(cfg, v)
    assert np.any(np.isnan(res)) or np.any(margins >= 0.0)


def test_residual_shape_validation():
    cfg = bubble_cfg()
    with pytest.raises(DomainError):
        rs.residual(cfg, np.ones(10))


# ---------------------------------------------------------------------------
# Jacobian
# ---------------------------------------------------------------------------

def banded_to_dense(ab):
    m = ab.shape[1]
    J = np.zeros((m, m))
    J[np.arange(m), np.arange(m)] = ab[1]
    J[np.arange(m - 1), np.arange(1, m)] = ab[0, 1:]
    J[np.arange(1, m), np.arange(m - 1)] = ab[2, :-1]
    return J


@pytest.mark.parametrize("op_text", ["sigma-root:k=2", "quotient:k=2,l=1",
                                     "pucci:k=1,delta=0.25"])
def test_jacobian_matches_finite_differences(op_text):
    op = symfun.parse_operator(op_text, N_DIM)
    bub = cf.bubble_profile(N_DIM)
    phi = float(symfun.eval_op(op, np.full(N_DIM, 2.0)))
    cfg = rs.SolverConfig(operator=op, domain=(0.1, 2.0), grid=32, rhs=phi,
                          boundary_left=float(bub.radial_value(0.1)),
                          boundary_right=float(bub.radial_value(2.0)))
    rng = np.random.default_rng(19)
    r = cfg.nodes()
    bump = 0.03 * np.sin(rng.uniform(1.0, 3.0) * r + rng.uniform(0.0, 6.0))
    v = bub.radial_value(r) * (1.0 + bump)
    assert np.all(rs.admissibility_margins(cfg, v) < 0.0)
    J = banded_to_dense(rs.jacobian(cfg, v))
    h = 1e-6
    for j in range(v.size):
        e = np.zeros(v.size)
        e[j] = h
        col = (rs.residual(cfg, v + e) - rs.residual(cfg, v - e)) / (2 * h)
        denom = np.maximum(np.abs(col), 1.0)
        assert np.max(np.abs(J[:, j] - col) / denom) < 1e-4


def test_jacobian_symmetry_node():
    op = symfun.SigmaKRoot(n=N_DIM, k=2)
    bub = cf.bubble_profile(N_DIM)
    cfg = rs.SolverConfig(operator=op, domain=(0.0, 0.8), grid=32, rhs=PHI_BUBBLE,
                          boundary_left="symmetry",
                          boundary_right=float(bub.radial_value(0.8)))
    v = bub.radial_value(cfg.nodes())
    J = banded_to_dense(rs.jacobian(cfg, v))
    h = 1e-6
    for j in (0, 1):
        e = np.zeros(v.size)
        e[j] = h
        col = (rs.residual(cfg, v + e) - rs.residual(cfg, v - e)) / (2 * h)
        denom = np.maximum(np.abs(col), 1.0)
        assert np.max(np.abs(J[:, j] - col) / denom) < 1e-4


# ---------------------------------------------------------------------------
# newton_solve
# ---------------------------------------------------------------------------

def test_newton_converges_to_bubble_with_admissible_iterates():
    cfg = bubble_cfg(grid=64)
    seen = []
    out = rs.newton_solve(cfg, iterate_hook=lambda v, m: seen.append(np.max(m)))
    assert out.converged
    assert out.residual_norm < cfg.residual_tol
    assert np.all(out.margins < 0.0)
    assert all(m < 0.0 for m in seen) and len(seen) == out.newton_steps + 1
    bub = cf.bubble_profile(N_DIM)
    assert np.max(np.abs(out.v - bub.radial_value(out.r))) < 1e-3


def test_newton_semilinear_converges_quickly():
    out = rs.newton_solve(bubble_cfg(operator=symfun.SigmaKRoot(n=N_DIM, k=1)))
    assert out.converged
    # observed iteration oracle: measured, small; only convergence is a
    # hard requirement
    assert out.newton_steps <= 12


def test_newton_exact_init_zero_steps_with_discrete_tolerance():
    # with a tolerance above the truncation error the exact profile is a
    # discrete fixed point: no Newton step is taken
    cfg = dataclasses.replace(bubble_cfg(grid=128, sin_amplitude=0.0),
                              residual_tol=5e-3)
    out = rs.newton_solve(cfg)
    assert out.converged and out.newton_steps == 0


def test_newton_rejects_inadmissible_init():
    op = symfun.SigmaKRoot(n=N_DIM, k=2)
    cfg = rs.SolverConfig(operator=op, domain=(0.5, 1.5), grid=32, rhs=3.0,
                          boundary_left=2.0, boundary_right=2.0,
                          initial_guess="geometric")
    # geometric interpolation of equal boundary values is a constant: its
    # eigenvalues sit on the cone boundary
    with pytest.raises(AdmissibilityError) as err:
        rs.newton_solve(cfg)
    assert err.value.node is not None


def test_newton_reports_damping_underflow_instead_of_spurious_root():
    # flat-metric Dirichlet data cannot support f = phi > 0: from an
    # admissible start the iterates head for the cone boundary and the line
    # search underflows; no spurious root is reported
    inv = cf.inversion_profile(N_DIM)
    cfg = rs.SolverConfig(operator=symfun.SigmaKRoot(n=N_DIM, k=2),
                          domain=(0.5, 2.0), grid=48, rhs=PHI_BUBBLE,
                          boundary_left=float(inv.radial_value(0.5)),
                          boundary_right=float(inv.radial_value(2.0)),
                          initial_guess={"kind": "profile", "name": "bubble:scale=1"})
    out = rs.newton_solve(cfg)
    assert not out.converged
    assert out.message == "damping underflow"
    assert len(out.history) >= 2


def test_newton_inversion_data_geometric_init_is_inadmissible():
    inv = cf.inversion_profile(N_DIM)
    cfg = rs.SolverConfig(operator=symfun.SigmaKRoot(n=N_DIM, k=2),
                          domain=(0.5, 2.0), grid=48, rhs=PHI_BUBBLE,
                          boundary_left=float(inv.radial_value(0.5)),
                          boundary_right=float(inv.radial_value(2.0)),
                          initial_guess="geometric")
    with pytest.raises(AdmissibilityError):
        rs.newton_solve(cfg)


def test_newton_symmetry_ball():
    bub = cf.bubble_profile(N_DIM)
    cfg = rs.SolverConfig(operator=symfun.SigmaKRoot(n=N_DIM, k=2),
                          domain=(0.0, 0.8), grid=64, rhs=PHI_BUBBLE,
                          boundary_left="symmetry",
                          boundary_right=float(bub.radial_value(0.8)))
    # even perturbation: the symmetry condition needs v'(0) = 0
    r = cfg.nodes()
    cfg = dataclasses.replace(
        cfg, initial_guess=bub.radial_value(r) * (1.0 + 0.03 * np.sin(np.pi * r / 0.8) ** 2))
    out = rs.newton_solve(cfg)
    assert out.converged
    assert abs(out.v1[0]) < 1e-12  # symmetry: v'(0) = 0 by construction
    assert np.max(np.abs(out.v - bub.radial_value(out.r))) < 2e-3


def test_residual_descent_along_history():
    cfg = bubble_cfg(grid=48)
    out = rs.newton_solve(cfg)
    norms = [h["residual"] for h in out.history]
    assert all(b < a for a, b in zip(norms, norms[1:]))


# ---------------------------------------------------------------------------
# convergence study and gauge sanity
# ---------------------------------------------------------------------------

def test_convergence_study_second_order():
    study = rs.convergence_study(bubble_cfg(grid=32), 3, cf.bubble_profile(N_DIM))
    assert len(study.levels) == 3
    for order in study.orders:
        assert 1.7 < order < 2.3


def test_convergence_study_constant_data_rejected():
    # phi matched to zero eigenvalues asks for a profile on the cone
    # boundary; the admissibility gate refuses the initial guess
    op = symfun.SigmaKRoot(n=N_DIM, k=2)
    cfg = rs.SolverConfig(operator=op, domain=(0.5, 1.5), grid=32, rhs=1.0,
                          boundary_left=2.0, boundary_right=2.0,
                          initial_guess="geometric")
    with pytest.raises(AdmissibilityError):
        rs.convergence_study(cfg, 2, cf.constant_profile(N_DIM, 2.0))


def test_gauge_sanity_of_converged_solution():
    # the solution profile carries the solver's nodal derivatives, so
    # re-deriving the eigenvalues after a gauge round trip reproduces the
    # discrete residual at the nodes
    cfg = bubble_cfg(grid=48)
    out = rs.newton_solve(cfg)
    assert out.converged
    r_in = out.r[1:-1]
    phi = cfg.phi_values(r_in)
    for gauge in ("u", "w"):
        prof = out.profile(gauge=gauge)
        lam_rad, lam_tan = cf.radial_schouten_eigs(prof, r_in)
        lam = np.column_stack([lam_rad] + [lam_tan] * (N_DIM - 1))
        vals = cfg.operator.value(lam)
        defect = np.max(np.abs(vals - phi * out.v[1:-1] ** cfg.q))
        assert defect < 10.0 * cfg.residual_tol


# ---------------------------------------------------------------------------
# continuation
# ---------------------------------------------------------------------------

def test_continuation_degenerate_schedule_matches_plain_solve():
    cfg = bubble_cfg(grid=48)
    plain = rs.newton_solve(cfg)
    swept = rs.continuation_p(cfg, [cfg.natural_exponent])
    assert len(swept) == 1
    assert np.array_equal(swept[0].v, plain.v)


def test_continuation_upward_sweep_on_annulus():
    cfg = bubble_cfg(domain=(0.5, 2.0), grid=64, sin_amplitude=0.0)
    schedule = np.linspace(cfg.natural_exponent, cfg.natural_exponent + 1.0, 5)
    results = rs.continuation_p(cfg, schedule)
    assert len(results) == 5
    assert all(r.converged for r in results)
    dists = [float(np.max(np.abs(a.v - b.v))) for a, b in zip(results, results[1:])]
    assert all(d < 0.2 for d in dists)


def test_continuation_out_of_range_p_fails_gracefully():
    # on the tight annulus the admissible branch dies out quickly as p
    # grows: the sweep keeps the earlier solutions and stops at the failure
    cfg = bubble_cfg(domain=(0.1, 2.0), grid=48, sin_amplitude=0.0)
    schedule = [cfg.natural_exponent, cfg.natural_exponent + 1.0,
                cfg.natural_exponent + 2.0]
    results = rs.continuation_p(cfg, schedule)
    assert results[0].converged
    assert not results[-1].converged
    assert len(results) < len(schedule) or not results[-1].converged


def test_continuation_first_step_failure_raises():
    cfg = bubble_cfg(domain=(0.1, 2.0), grid=48, sin_amplitude=0.0)
    with pytest.raises(NumericError) as err:
        rs.continuation_p(cfg, [cfg.natural_exponent + 2.0])
    assert hasattr(err.value, "result")


# ---------------------------------------------------------------------------
# configuration and serialization
# ---------------------------------------------------------------------------

def test_config_json_round_trip(tmp_path):
    cfg = bubble_cfg(grid=32)
    doc = cfg.to_dict()
    again = rs.SolverConfig.from_dict(json.loads(json.dumps(doc)))
    assert again.to_dict() == doc
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    from_file = rs.SolverConfig.from_json(path)
    assert from_file.to_dict() == doc
    a = rs.newton_solve(cfg)
    b = rs.newton_solve(from_file)
    assert np.array_equal(a.v, b.v)


def test_config_validation_messages(tmp_path):
    with pytest.raises(UsageError) as err:
        rs.SolverConfig.from_dict({"operator": "sigma-root:k=2", "n": 4})
    assert "domain" in str(err.value)
    bad = {"operator": "sigma-root:k=2", "n": 4, "domain": [0.1, 2.0], "grid": 32,
           "rhs": 1.0, "boundary": {"left": 0.9}}
    with pytest.raises(UsageError) as err:
        rs.SolverConfig.from_dict(bad)
    assert "boundary.right" in str(err.value)
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(UsageError):
        rs.SolverConfig.from_json(path)


def test_config_invariants():
    op = symfun.SigmaKRoot(n=4, k=2)
    with pytest.raises(DomainError):
        rs.SolverConfig(operator=op, domain=(2.0, 0.1), grid=32, rhs=1.0,
                        boundary_left=1.0, boundary_right=1.0)
    with pytest.raises(DomainError):
        rs.SolverConfig(operator=op, domain=(0.1, 2.0), grid=8, rhs=1.0,
                        boundary_left=1.0, boundary_right=1.0)
    with pytest.raises(DomainError):
        rs.SolverConfig(operator=op, domain=(0.1, 2.0), grid=32, rhs=1.0,
                        boundary_left="symmetry", boundary_right=1.0)
    with pytest.raises(DomainError):
        rs.SolverConfig(operator=op, domain=(0.1, 2.0), grid=32, rhs=1.0,
                        boundary_left=1.0, boundary_right=-1.0)


def test_natural_exponent_and_q():
    cfg = bubble_cfg()
    assert cfg.natural_exponent == pytest.approx(3.0)
    assert cfg.q == 0.0
    cfg2 = dataclasses.replace(cfg, exponent_p=3.5)
    assert cfg2.q == pytest.approx(0.5)


def test_solve_result_profile_round_trip(tmp_path):
    out = rs.newton_solve(bubble_cfg(grid=32))
    path = tmp_path / "sol.txt"
    out.save_profile(path)
    prof = cf.load_radial_profile(path, N_DIM)
    assert np.allclose(prof.radial_value(out.r), out.v, rtol=1e-12)
    doc = out.to_dict()
    assert doc["converged"] is True
    assert len(doc["history"]) == out.newton_steps + 1
