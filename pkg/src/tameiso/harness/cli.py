"""Command line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 solver, soundness or cap error.
"""

import argparse
import json
import sys

from ..commutant import ElementaryShape, default_degree_bound, elementary_commutant
from ..errors import (
    DegreeCapExceeded,
    IncomparableShapes,
    InvalidParams,
    NotLocallyFinite,
    ParseError,
    ShapeMismatch,
    TameisoError,
)
from ..expmap import exp_derivation
from ..jordan import jordan_report
from ..operators import (
    RHO,
    THETA,
    Derivation,
    bracket,
    commute_check,
    deriv_apply,
    invariant_subspace,
    is_nilpotent_matrix,
)
from ..poly2 import degree_cap
from .parser import parse_derivation, parse_endomorphism, parse_poly
from .registry import FAMILIES, make_normal_form, parse_params
from .verify import collect_flags, verify_all, verify_form

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3


class _UsageError(Exception):
    pass


def _operator(text):
    """A derivation (``dX = ...``) or an endomorphism (``X -> ...``)."""
    if text.lstrip().startswith("dX"):
        return parse_derivation(text)
    return parse_endomorphism(text)


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def _out(args, payload, text):
    if args.json:
        print(_dump(payload))
    else:
        print(text)


def cmd_apply(args):
    p = parse_poly(args.p)
    op = _operator(args.op)
    result = deriv_apply(op, p) if isinstance(op, Derivation) else op(p)
    _out(args, {"operator": op.render(), "input": p.render(), "result": result.render()}, result.render())
    return EXIT_OK


def cmd_bracket(args):
    d1, d2 = parse_derivation(args.d1), parse_derivation(args.d2)
    b = bracket(d1, d2)
    _out(args, {"bracket": b.render()}, b.render())
    return EXIT_OK


def cmd_lfd_check(args):
    d = parse_derivation(args.d)
    try:
        sub = invariant_subspace(d, dim_cap=args.dim_cap, deg_cap=args.deg_cap)
    except (NotLocallyFinite, DegreeCapExceeded) as exc:
        _out(args, {"locally_finite": False, "reason": str(exc)}, f"not locally finite within the caps: {exc}")
        return EXIT_FAIL
    nil = is_nilpotent_matrix(sub.matrix_rows())
    payload = {
        "locally_finite": True,
        "locally_nilpotent": nil,
        "dimension": sub.dim,
        "basis": [b.render() for b in sub.basis],
    }
    _out(args, payload, f"locally finite (invariant subspace of dimension {sub.dim}); locally nilpotent: {nil}")
    return EXIT_OK


def cmd_jordan(args):
    d = parse_derivation(args.d)
    rep = jordan_report(d, dim_cap=args.dim_cap, deg_cap=args.deg_cap)
    eig = [{"value": _q(v), "multiplicity": k} for v, k in rep.spectrum.eigenvalues]
    payload = {
        "semisimple": rep.pair.semisimple.render(),
        "nilpotent": rep.pair.nilpotent.render(),
        "eigenvalues": eig,
        "certificate": {
            "sum": rep.sum_ok,
            "bracket_zero": rep.bracket_zero,
            "nilpotent": rep.nilpotent_ok,
            "diagonalizable": rep.diagonalizable,
        },
    }
    text = "\n".join(
        [
            f"D_s: {rep.pair.semisimple.render()}",
            f"D_n: {rep.pair.nilpotent.render()}",
            "eigenvalues: " + ", ".join(f"{_q(v)} (x{k})" for v, k in rep.spectrum.eigenvalues),
            f"certified: {rep.certified}",
        ]
    )
    _out(args, payload, text)
    return EXIT_OK if rep.certified else EXIT_FAIL


def _q(v):
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def cmd_exp(args):
    d = parse_derivation(args.d)
    res = exp_derivation(d, dim_cap=args.dim_cap, deg_cap=args.deg_cap)
    payload = {
        "automorphism": res.automorphism.render(),
        "inverse_checked": res.certificate.inverse_checked,
        "lnd_path_used": res.certificate.lnd_path_used,
    }
    _out(args, payload, res.automorphism.render())
    return EXIT_OK if res.certificate.inverse_checked else EXIT_FAIL


def cmd_commute(args):
    lhs, rhs = _operator(args.lhs), _operator(args.rhs)
    ok = commute_check(lhs, rhs)
    _out(args, {"commute": ok}, "commute" if ok else "do not commute")
    return EXIT_OK


def _shape_kind(name):
    return {"rho": RHO, "theta": THETA}[name]


def cmd_isotropy_solve(args):
    if (args.d is None) == (args.phi is None):
        raise _UsageError("give exactly one of --d or --phi")
    if args.phi is not None:
        target = parse_endomorphism(args.phi)
    else:
        target = parse_derivation(args.d)
        if args.target == "exp":
            target = exp_derivation(target, dim_cap=args.dim_cap, deg_cap=args.deg_cap).automorphism
    deg = args.deg if args.deg is not None else default_degree_bound(target)
    shape = ElementaryShape(_shape_kind(args.shape), deg)
    sol = elementary_commutant(target, shape, strict=not args.lenient)
    payload = sol.to_json()
    if args.json:
        print(_dump(payload))
    else:
        print(_render_solution(sol))
    return EXIT_OK if sol.residual is None else EXIT_SOLVER


def _render_solution(sol):
    names = sol.shape.unknown_names()
    lines = [f"{sol.shape.kind} shape, degree bound {sol.shape.degree_bound}: {len(sol.components)} component(s)"]
    for i, c in enumerate(sol.components):
        lines.append(f"  component {i}:")
        lines.append("    particular: " + ", ".join(f"{n}={v.render()}" for n, v in zip(names, c.particular)))
        for d in c.directions:
            lines.append("    direction:  " + ", ".join(f"{n}={v.render()}" for n, v in zip(names, d) if not v.is_zero()))
        lines.append(f"    unit: {json.dumps(c.unit_constraint.to_json(), sort_keys=True)}")
    if sol.residual is not None:
        lines.append("  residual: " + "; ".join(sol.residual))
    return "\n".join(lines)


def _report_text(rep):
    head = f"{rep.form.label()}: equal={rep.equal} status={rep.status}"
    lines = [head]
    if rep.error:
        lines.append(f"  error: {rep.error}")
    if rep.exp_automorphism is not None:
        lines.append(f"  exp(D) = {rep.exp_automorphism.render()}")
    for c in rep.expected_family_checks:
        mark = "contained" if c.contained else "NOT contained"
        tag = "" if c.printed else " (derived)"
        lines.append(f"  [{c.side}] {c.source}{tag}: {c.family} {mark}")
    for fid, text in rep.discrepancy_flags:
        lines.append(f"  flag [{fid}]: {text.split(':', 1)[0]}")
    return "\n".join(lines)


def cmd_verify(args):
    if args.family not in FAMILIES:
        raise _UsageError(f"unknown family {args.family!r}; choose from {', '.join(FAMILIES)}")
    form = make_normal_form(args.family, parse_params(args.params))
    rep = verify_form(form, args.deg, dim_cap=args.dim_cap, deg_cap=args.deg_cap)
    _out(args, rep.to_json(timings=args.timings), _report_text(rep))
    if rep.status != "ok":
        return EXIT_SOLVER
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_verify_all(args):
    reports = verify_all(args.deg, dim_cap=args.dim_cap, deg_cap=args.deg_cap, jobs=args.jobs)
    if args.json:
        print(_dump([r.to_json(timings=args.timings) for r in reports]))
    else:
        for r in reports:
            print(_report_text(r))
        flags = collect_flags(reports)
        print(f"{sum(r.equal for r in reports)}/{len(reports)} forms with equal commutants; {len(flags)} discrepancy flag(s)")
        for fid, text in flags:
            print(f"  - [{fid}] {text}")
    if any(r.status != "ok" for r in reports):
        return EXIT_SOLVER
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def build_parser():
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--deg-cap", type=int, default=argparse.SUPPRESS, help="maximum polynomial degree")
    common.add_argument("--dim-cap", type=int, default=argparse.SUPPRESS, help="maximum invariant subspace dimension")

    parser = argparse.ArgumentParser(prog="tameiso", description="Tame isotropy groups of locally finite derivations.", allow_abbrev=False)
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--deg-cap", type=int, default=64, help="maximum polynomial degree (default 64)")
    parser.add_argument("--dim-cap", type=int, default=64, help="maximum invariant subspace dimension (default 64)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apply", parents=[common], allow_abbrev=False, help="apply a derivation or endomorphism to a polynomial")
    p.add_argument("--op", required=True, help='"dX = ... ; dY = ..." or "X -> ... ; Y -> ..."')
    p.add_argument("--p", required=True, help="polynomial")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("bracket", parents=[common], allow_abbrev=False, help="Lie bracket of two derivations")
    p.add_argument("--d1", required=True)
    p.add_argument("--d2", required=True)
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("lfd-check", parents=[common], allow_abbrev=False, help="local finiteness of a derivation")
    p.add_argument("--d", required=True)
    p.set_defaults(func=cmd_lfd_check)

    p = sub.add_parser("jordan", parents=[common], allow_abbrev=False, help="Jordan-Chevalley decomposition")
    p.add_argument("--d", required=True)
    p.set_defaults(func=cmd_jordan)

    p = sub.add_parser("exp", parents=[common], allow_abbrev=False, help="exponential automorphism")
    p.add_argument("--d", required=True)
    p.set_defaults(func=cmd_exp)

    p = sub.add_parser("commute", parents=[common], allow_abbrev=False, help="check whether two operators commute")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.set_defaults(func=cmd_commute)

    p = sub.add_parser("isotropy-solve", parents=[common], allow_abbrev=False, help="elementary commutant of a target")
    p.add_argument("--target", choices=("deriv", "exp"), default="deriv")
    p.add_argument("--d", help="derivation")
    p.add_argument("--phi", help="endomorphism target (instead of --d)")
    p.add_argument("--shape", choices=("rho", "theta"), required=True)
    p.add_argument("--deg", type=int, help="degree bound (default from the target)")
    p.add_argument("--lenient", action="store_true", help="report a residual instead of failing")
    p.set_defaults(func=cmd_isotropy_solve)

    p = sub.add_parser("verify", parents=[common], allow_abbrev=False, help="verify one normal form")
    p.add_argument("--family", required=True)
    p.add_argument("--params", default="", help="e.g. a=2,b=1 or f=X^2")
    p.add_argument("--deg", type=int, default=8)
    p.add_argument("--timings", action="store_true", help="include stage timings (not byte-stable)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-all", parents=[common], allow_abbrev=False, help="verify the standard registry")
    p.add_argument("--deg", type=int, default=8)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timings", action="store_true", help="include stage timings (not byte-stable)")
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        with degree_cap(args.deg_cap):
            return args.func(args)
    except (_UsageError, ParseError, InvalidParams, ShapeMismatch, IncomparableShapes) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TameisoError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def run_cli(argv):
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
