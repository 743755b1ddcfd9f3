"""Command-line front end.

Every library operation is exposed as a subcommand:

    eval | grad | axioms | cone | inclusion | schouten | kelvin |
    solve | continue-p | converge | monitor | bishop-gromov | harnack

Outputs are deterministic: the sampling seed defaults to the documented
constant ``DEFAULT_SEED`` (overridden by the ``CHL_SEED`` environment
variable or ``--seed``), and floating-point values are serialized with 17
significant digits so reruns are byte-identical.

Exit codes: 0 success, 1 domain/admissibility error, 2 numeric failure,
3 usage error.
"""

import argparse
import dataclasses
import os
import sys

import numpy as np

from . import cones, conformal, diagnostics, radial_solver, symfun
from .errors import DomainError, NumericError, UsageError

#: Default sampling seed used when neither --seed nor CHL_SEED is given.
DEFAULT_SEED = 12345

_FLOAT_FMT = ".17g"


def _fmt(x):
    return format(float(x), _FLOAT_FMT)


def _json_dumps(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  "{k}": {_json_dumps(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}  {_json_dumps(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    return '"' + str(obj).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _csv_lines(header, rows):
    out = [",".join(header)]
    for row in rows:
        out.append(",".join(_fmt(x) if isinstance(x, (float, np.floating)) else str(x)
                            for x in row))
    return "\n".join(out)


def _write(args, text):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _emit(args, payload, text_lines=None, csv_data=None):
    fmt = getattr(args, "format", "text")
    if fmt == "json":
        _write(args, _json_dumps(payload))
    elif fmt == "csv":
        if csv_data is None:
            raise UsageError("this subcommand has no CSV form")
        _write(args, _csv_lines(*csv_data))
    else:
        lines = text_lines if text_lines is not None else [_json_dumps(payload)]
        _write(args, "\n".join(lines))


def _parse_floats(text, what="list"):
    try:
        return np.array([float(t) for t in text.split(",") if t.strip() != ""])
    except ValueError as exc:
        raise UsageError(f"could not parse {what} '{text}': {exc}") from exc


def _seed(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("CHL_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"CHL_SEED must be an integer, got '{env}'") from exc
    return DEFAULT_SEED


def _background(args, n):
    text = getattr(args, "background", "flat") or "flat"
    if text == "flat":
        return conformal.FlatBackground(n)
    head, _, rest = text.partition(":")
    if head == "sphere":
        fields = dict(item.partition("=")[::2] for item in rest.split(",") if item)
        try:
            return conformal.SphereBackground(n, radius=float(fields.get("a", 1.0)))
        except ValueError as exc:
            raise UsageError(f"background '{text}': {exc}") from exc
    raise UsageError(f"unknown background '{text}' (expected flat or sphere:a=R)")


def _profile(args, n):
    background = _background(args, n)
    gauge = getattr(args, "gauge", "v") or "v"
    if getattr(args, "profile_file", None):
        return conformal.load_radial_profile(args.profile_file, n, gauge=gauge,
                                             background=background)
    if not getattr(args, "profile", None):
        raise UsageError("one of --profile or --profile-file is required")
    return conformal.parse_profile(args.profile, n, gauge=gauge, background=background)


def _solver_config(args):
    cfg = radial_solver.SolverConfig.from_json(args.config)
    if getattr(args, "grid", None):
        cfg = dataclasses.replace(cfg, grid=args.grid)
    if getattr(args, "p", None) is not None:
        cfg = dataclasses.replace(cfg, exponent_p=args.p)
    if getattr(args, "rhs", None) is not None:
        cfg = dataclasses.replace(cfg, rhs=args.rhs)
    return cfg


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_eval(args):
    spec = symfun.parse_operator(args.op, args.n)
    lam = _parse_floats(args.lam, "--lambda")
    value = float(symfun.eval_op(spec, lam))
    _emit(args, {"operator": spec.descriptor(), "n": args.n,
                 "lambda": [float(t) for t in lam], "value": value},
          text_lines=[_fmt(value)])
    return 0


def _cmd_grad(args):
    spec = symfun.parse_operator(args.op, args.n)
    lam = _parse_floats(args.lam, "--lambda")
    grad, smooth = symfun.grad_op(spec, lam, return_smooth=True)
    _emit(args, {"operator": spec.descriptor(), "n": args.n,
                 "lambda": [float(t) for t in lam],
                 "gradient": [float(t) for t in grad], "smooth": bool(smooth)},
          text_lines=[",".join(_fmt(t) for t in grad)])
    return 0


def _cmd_axioms(args):
    spec = symfun.parse_operator(args.op, args.n)
    report = symfun.verify_axioms(spec, args.samples, _seed(args))
    lines = [f"operator {report.operator}  n={report.n}  samples={report.samples}"]
    for key, count in report.violations.items():
        lines.append(f"  {key}: {count} violations (worst {_fmt(report.worst[key])})")
    lines.append(f"total violations: {report.total_violations}")
    _emit(args, report.to_dict(), text_lines=lines)
    return 0


def _cmd_cone(args):
    cone = cones.parse_cone(args.cone, args.n)
    lam = _parse_floats(args.lam, "--lambda")
    shift = float(cones.boundary_shift(cone, lam))
    violation = cones.cone_violation(cone, lam)
    inside = violation is None
    payload = {"cone": cone.descriptor(), "lambda": [float(t) for t in lam],
               "inside": inside, "violation": violation, "boundary_shift": shift}
    text = (f"inside (margin {_fmt(-shift)})" if inside else f"outside ({violation})")
    _emit(args, payload, text_lines=[text])
    return 0 if inside else 1


def _cmd_inclusion(args):
    report = cones.gamma_sigma_inclusion_test(args.k, args.n, args.samples, _seed(args))
    text = (f"gamma k={report.k} n={report.n} -> sigma delta={_fmt(report.delta)}: "
            f"{report.violations} violations in {report.samples} samples "
            f"(worst margin {_fmt(report.worst_margin)})")
    _emit(args, report.to_dict(), text_lines=[text])
    return 0


def _cmd_schouten(args):
    prof = _profile(args, args.n)
    x = _parse_floats(args.x, "--x")
    eigs = conformal.schouten_eigs(prof, x)
    _emit(args, {"n": args.n, "gauge": prof.gauge, "x": [float(t) for t in x],
                 "eigenvalues": [float(t) for t in eigs]},
          text_lines=[",".join(_fmt(t) for t in eigs)])
    return 0


def _cmd_kelvin(args):
    prof = _profile(args, args.n)
    transform = conformal.kelvin(prof)
    x = _parse_floats(args.x, "--x")
    val = float(transform.value(x))
    eigs = conformal.schouten_eigs(transform, x)
    src = conformal.schouten_eigs(prof, x / float(x @ x))
    _emit(args, {"n": args.n, "x": [float(t) for t in x], "value": val,
                 "eigenvalues": [float(t) for t in eigs],
                 "source_eigenvalues": [float(t) for t in src]},
          text_lines=[_fmt(val), ",".join(_fmt(t) for t in eigs)])
    return 0


def _solve_payload(result):
    return result.to_dict()


def _cmd_solve(args):
    cfg = _solver_config(args)
    result = radial_solver.newton_solve(cfg)
    payload = {"config": cfg.to_dict(), "result": _solve_payload(result)}
    lines = [f"converged: {result.converged} after {result.newton_steps} Newton steps",
             f"residual max-norm: {_fmt(result.residual_norm)}",
             f"worst admissibility margin: {_fmt(float(np.min(-result.margins)))}"]
    if getattr(args, "profile_out", None):
        result.save_profile(args.profile_out)
        lines.append(f"profile written to {args.profile_out}")
    _emit(args, payload, text_lines=lines,
          csv_data=(["r", "v"], list(zip(result.r, result.v))))
    return 0 if result.converged else 2


def _cmd_continue_p(args):
    cfg = _solver_config(args)
    schedule = [float(t) for t in _parse_floats(args.p_schedule, "--p-schedule")]
    results = radial_solver.continuation_p(cfg, schedule)
    dists = [float(np.max(np.abs(a.v - b.v))) for a, b in zip(results, results[1:])]
    payload = {"config": cfg.to_dict(), "schedule": schedule[:len(results)],
               "converged": [r.converged for r in results],
               "sup_distances": dists,
               "results": [_solve_payload(r) for r in results]}
    lines = [f"p={_fmt(p)}: converged={r.converged} steps={r.newton_steps}"
             for p, r in zip(schedule, results)]
    _emit(args, payload, text_lines=lines)
    return 0 if all(r.converged for r in results) else 2


def _cmd_converge(args):
    cfg = _solver_config(args)
    exact = conformal.parse_profile(args.exact, cfg.n)
    study = radial_solver.convergence_study(cfg, args.refinements, exact)
    lines = [f"N={g}: sup-error {_fmt(e)}" for g, e in study.levels]
    lines += [f"orders: {', '.join(_fmt(o) for o in study.orders)}"]
    _emit(args, {"config": cfg.to_dict(), **study.to_dict()}, text_lines=lines,
          csv_data=(["grid", "sup_error"], study.levels))
    return 0


def _cmd_monitor(args):
    prof = _profile(args, args.n)
    fn = diagnostics.gradient_monitor if args.kind == "grad" else diagnostics.hessian_monitor
    mon = fn(prof, args.radius, num_samples=args.samples)
    text = (f"{mon.kind} monitor on ball r={_fmt(mon.radius)}: sup {_fmt(mon.supremum)} "
            f"at |x|={_fmt(mon.location)} ({mon.direction})")
    _emit(args, mon.to_dict(), text_lines=[text])
    return 0


def _cmd_bishop_gromov(args):
    prof = _profile(args, args.n)
    radii = _parse_floats(args.radii, "--radii")
    curve = diagnostics.bishop_gromov_curve(prof, radii)
    _emit(args, curve.to_dict(),
          text_lines=[f"r={_fmt(r)}  Q={_fmt(q)}" for r, q in curve.rows()],
          csv_data=(["r", "Q"], curve.rows()))
    return 0


def _cmd_harnack(args):
    beta = diagnostics.harnack_beta(args.delta, args.n)
    payload = {"delta": args.delta, "n": args.n, "beta": beta}
    lines = [f"beta = {_fmt(beta)}"]
    if getattr(args, "samples_file", None):
        data = np.loadtxt(args.samples_file)
        if data.ndim != 2 or data.shape[1] < 2:
            raise UsageError("samples file must have point columns plus a value column")
        seminorm = diagnostics.holder_check(data[:, :-1], data[:, -1], beta)
        payload["seminorm"] = seminorm
        payload["samples"] = int(data.shape[0])
        lines.append(f"sampled Holder seminorm = {_fmt(seminorm)}")
    _emit(args, payload, text_lines=lines)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(sub, *, seed=False, out=True):
    sub.add_argument("--format", choices=("text", "json", "csv"), default="text")
    if out:
        sub.add_argument("--out", help="write output to this path instead of stdout")
    if seed:
        sub.add_argument("--seed", type=int, default=None,
                         help=f"sampling seed (default CHL_SEED or {DEFAULT_SEED})")


def build_parser():
    parser = _Parser(prog="confhess",
                     description="Conformally invariant curvature operators: "
                                 "evaluation, cones, Schouten algebra, radial solver, "
                                 "diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate an operator at an eigenvalue tuple")
    p.add_argument("--op", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    _add_common(p)
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("grad", help="analytic gradient of an operator")
    p.add_argument("--op", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    _add_common(p)
    p.set_defaults(fn=_cmd_grad)

    p = sub.add_parser("axioms", help="sampled verification of the operator axioms")
    p.add_argument("--op", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=10000)
    _add_common(p, seed=True)
    p.set_defaults(fn=_cmd_axioms)

    p = sub.add_parser("cone", help="cone membership and boundary shift")
    p.add_argument("--cone", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    _add_common(p)
    p.set_defaults(fn=_cmd_cone)

    p = sub.add_parser("inclusion", help="sampled Garding-cone inclusion test")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=100000)
    _add_common(p, seed=True)
    p.set_defaults(fn=_cmd_inclusion)

    def profile_args(p):
        p.add_argument("--profile", help="catalog descriptor, e.g. bubble:scale=1")
        p.add_argument("--profile-file", help="two-column (r, v) text file")
        p.add_argument("--gauge", choices=conformal.GAUGES, default="v")
        p.add_argument("--background", default="flat", help="flat or sphere:a=R")
        p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("schouten", help="Schouten eigenvalues of a profile at a point")
    profile_args(p)
    p.add_argument("--x", required=True)
    _add_common(p)
    p.set_defaults(fn=_cmd_schouten)

    p = sub.add_parser("kelvin", help="Kelvin transform evaluation and eigenvalues")
    profile_args(p)
    p.add_argument("--x", required=True)
    _add_common(p)
    p.set_defaults(fn=_cmd_kelvin)

    def solver_args(p):
        p.add_argument("--config", required=True, help="SolverConfig JSON document")
        p.add_argument("--grid", type=int, help="override the grid size")
        p.add_argument("--p", type=float, help="override the exponent p")
        p.add_argument("--rhs", type=float, help="override the constant rhs")

    p = sub.add_parser("solve", help="damped Newton solve of the radial BVP")
    solver_args(p)
    p.add_argument("--profile-out", help="write the solved (r, v) profile here")
    _add_common(p)
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("continue-p", help="warm-started sweep over the exponent p")
    solver_args(p)
    p.add_argument("--p-schedule", required=True, help="comma-separated exponents")
    _add_common(p)
    p.set_defaults(fn=_cmd_continue_p)

    p = sub.add_parser("converge", help="grid-refinement study against an exact profile")
    solver_args(p)
    p.add_argument("--refinements", type=int, default=3)
    p.add_argument("--exact", required=True, help="exact-solution profile descriptor")
    _add_common(p)
    p.set_defaults(fn=_cmd_converge)

    p = sub.add_parser("monitor", help="gradient or Hessian estimate monitor")
    profile_args(p)
    p.add_argument("--kind", choices=("grad", "hess"), default="grad")
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--samples", type=int, default=diagnostics.RADIAL_SCAN)
    _add_common(p)
    p.set_defaults(fn=_cmd_monitor)

    p = sub.add_parser("bishop-gromov", help="geodesic/Euclidean ball volume ratios")
    profile_args(p)
    p.add_argument("--radii", required=True, help="comma-separated radii")
    _add_common(p)
    p.set_defaults(fn=_cmd_bishop_gromov)

    p = sub.add_parser("harnack", help="Harnack exponent and sampled Holder seminorm")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples-file", help="text table: point columns plus value column")
    _add_common(p)
    p.set_defaults(fn=_cmd_harnack)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
