"""Per-form verification: commutants of D and exp(D), compared and probed."""

import time
from dataclasses import dataclass, field

from ..commutant import (
    AnyNonzero,
    ElementaryShape,
    SolutionComponent,
    SolutionSet,
    contains,
    elementary_commutant,
    solution_set_equal,
)
from ..errors import ShapeMismatch, SoundnessError, TameisoError
from ..expmap import exp_derivation
from ..operators import RHO, THETA, commute_check
from ..poly2 import degree_cap
from ..scalars import SCALAR_ONE, SCALAR_ZERO
from .registry import D_SIDE, FLAGS, LINEAR_JORDAN_Y, standard_registry, templates_for

SHAPES = (RHO, THETA)


@dataclass(frozen=True)
class FamilyCheck:
    key: str
    source: str
    family: str
    side: str
    printed: bool
    contained: bool
    members: tuple  # (rendered endomorphism, verdict)

    def to_json(self):
        return {
            "key": self.key,
            "source": self.source,
            "family": self.family,
            "side": self.side,
            "printed": self.printed,
            "contained": self.contained,
            "members": [{"map": m, "commutes": v} for m, v in self.members],
        }


@dataclass
class VerificationReport:
    form: object
    degree_bound: int
    d_side: dict = field(default_factory=dict)
    exp_side: dict = field(default_factory=dict)
    exp_automorphism: object = None
    equal: bool = False
    shape_equal: dict = field(default_factory=dict)
    expected_family_checks: list = field(default_factory=list)
    discrepancy_flags: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    status: str = "ok"
    error: str = ""

    @property
    def containment_ok(self):
        """Every derived (non-printed) family is contained and every printed failure is flagged."""
        for c in self.expected_family_checks:
            if not c.contained and not c.printed:
                return False
        return True

    @property
    def passed(self):
        return self.status == "ok" and self.equal and self.containment_ok

    def flag_texts(self):
        return [text for _, text in self.discrepancy_flags]

    def to_json(self, timings=False):
        out = {
            "family": self.form.family,
            "params": self.form.params_json(),
            "derivation": self.form.derivation.render(),
            "degree_bound": self.degree_bound,
            "status": self.status,
            "error": self.error or None,
            "exp_automorphism": self.exp_automorphism.render() if self.exp_automorphism else None,
            "equal": self.equal,
            "shape_equal": {k: self.shape_equal.get(k) for k in SHAPES},
            "d_side": {k: v.to_json() for k, v in self.d_side.items()},
            "exp_side": {k: v.to_json() for k, v in self.exp_side.items()},
            "expected_family_checks": [c.to_json() for c in self.expected_family_checks],
            "discrepancy_flags": [{"id": i, "text": t} for i, t in self.discrepancy_flags],
        }
        if timings:
            out["timings_ms"] = dict(self.timings)
        return out


def _check_template(tpl, form, target, solset):
    members = []
    for phi in tpl.members(form):
        verdict = commute_check(phi, target)
        # the solver's own answer has to agree with the substitution verdict
        try:
            listed = contains(solset, phi)
        except ShapeMismatch:
            listed = False
        if listed != verdict:
            raise SoundnessError(
                f"{form.label()}: {phi.render()} commute_check={verdict} but solver membership={listed}"
            )
        members.append((phi.render(), verdict))
    contained = bool(members) and all(v for _, v in members)
    return FamilyCheck(tpl.key, tpl.source, tpl.text, tpl.side, tpl.printed, contained, tuple(members))


def jordan_y_expected(shape):
    """The commutant of (aX+Y)d/dX + aY d/dY: (X + gamma Y, Y) and the identity."""
    n = shape.n_unknowns
    part = [SCALAR_ONE] + [SCALAR_ZERO] * (n - 1)
    dirs = ()
    if shape.kind == RHO:
        d = [SCALAR_ZERO] * n
        d[2] = SCALAR_ONE
        dirs = (tuple(d),)
    comp = SolutionComponent(tuple(part), dirs, AnyNonzero())
    return SolutionSet(shape, (comp,))


def verify_form(form, degree_bound=8, dim_cap=64, deg_cap=64):
    with degree_cap(deg_cap):
        return _verify_form(form, degree_bound, dim_cap, deg_cap)


def _verify_form(form, degree_bound, dim_cap, deg_cap):
    report = VerificationReport(form, degree_bound)
    d = form.derivation
    try:
        t0 = time.perf_counter()
        exp = exp_derivation(d, dim_cap=dim_cap, deg_cap=deg_cap)
        report.exp_automorphism = exp.automorphism
        report.timings["exp"] = round((time.perf_counter() - t0) * 1000, 3)
        for kind in SHAPES:
            shape = ElementaryShape(kind, degree_bound)
            t0 = time.perf_counter()
            report.d_side[kind] = elementary_commutant(d, shape)
            report.timings[f"solve_d_{kind.lower()}"] = round((time.perf_counter() - t0) * 1000, 3)
            t0 = time.perf_counter()
            report.exp_side[kind] = elementary_commutant(exp.automorphism, shape)
            report.timings[f"solve_exp_{kind.lower()}"] = round((time.perf_counter() - t0) * 1000, 3)
            report.shape_equal[kind] = solution_set_equal(report.d_side[kind], report.exp_side[kind])
        report.equal = all(report.shape_equal.values()) and exp.certificate.inverse_checked
        t0 = time.perf_counter()
        flags = {}
        for tpl in templates_for(form):
            if tpl.side == D_SIDE:
                target, solset = d, report.d_side[tpl.shape]
            else:
                target, solset = exp.automorphism, report.exp_side[tpl.shape]
            check = _check_template(tpl, form, target, solset)
            report.expected_family_checks.append(check)
            if tpl.printed and not check.contained:
                if tpl.flag:
                    flags.setdefault(tpl.flag, FLAGS[tpl.flag])
                else:
                    flags.setdefault(tpl.key, f"{tpl.source}: printed family {tpl.text} is not contained")
        if form.family == LINEAR_JORDAN_Y:
            for kind in SHAPES:
                expected = jordan_y_expected(ElementaryShape(kind, degree_bound))
                same = solution_set_equal(report.d_side[kind], expected)
                members = (("(X + gamma Y, Y)" if kind == RHO else "identity", same),)
                report.expected_family_checks.append(
                    FamilyCheck(f"jordan-y-equals-{kind.lower()}", "derived", "commutant equals " + members[0][0],
                                D_SIDE, False, same, members)
                )
        report.discrepancy_flags = sorted(flags.items())
        report.timings["probes"] = round((time.perf_counter() - t0) * 1000, 3)
    except SoundnessError:
        raise
    except TameisoError as exc:
        report.status = type(exc).__name__
        report.error = str(exc)
    return report


def verify_all(degree_bound=8, dim_cap=64, deg_cap=64, jobs=1, forms=None):
    forms = standard_registry() if forms is None else forms
    if jobs <= 1:
        return [verify_form(f, degree_bound, dim_cap, deg_cap) for f in forms]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(verify_form, f, degree_bound, dim_cap, deg_cap) for f in forms]
        return [fu.result() for fu in futures]


def collect_flags(reports):
    """Distinct discrepancy flags across reports, in first-seen order."""
    out = {}
    for r in reports:
        for fid, text in r.discrepancy_flags:
            out.setdefault(fid, text)
    return list(out.items())
