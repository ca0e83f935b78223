"""Elementary automorphisms commuting with a derivation or an automorphism.

An elementary map of a fixed shape and degree bound ``d`` has unknowns
``(unit, c_0, ..., c_d)``:

* RHO:   ``(unit*X + c_0 + c_1 Y + ... + c_d Y^d, Y)``
* THETA: ``(X, unit*Y + c_0 + c_1 X + ... + c_d X^d)``

The commutation identities on X and Y are expanded with the unknowns kept
symbolic and split by monomials in X, Y.  The resulting system is solved by
triangular propagation: linear equations are eliminated first (pivoting on
the highest-index unknown so the unit survives as long as possible), then
single-term and single-unknown equations are resolved, branching over field
roots where needed.  A univariate binomial ``unit^s = c`` that constrains
nothing else is kept symbolic.  Anything else stalls with
:class:`~tameiso.errors.SolverIncomplete`.

Each returned component is re-verified twice: symbolically against the
full equation system, and by ``commute_check`` on a concrete member.
"""

import random
from dataclasses import dataclass, field

from gmpy2 import mpq

from . import _upoly
from ._mpoly import MPoly, PowerCache, lift, subs_xy
from .errors import (
    IncomparableShapes,
    ShapeMismatch,
    SolverIncomplete,
    SoundnessError,
    ZeroParameter,
)
from .operators import RHO, THETA, Derivation, Endomorphism, commute_check, elementary_shape
from .poly2 import POLY_X, POLY_Y, Poly2
from .scalars import SCALAR_ONE, SCALAR_ZERO, Scalar, as_rational, exp_symbol, scalar_roots

UNIT = 0

# -- shapes and solution containers ----------------------------------------


@dataclass(frozen=True)
class ElementaryShape:
    kind: str
    degree_bound: int

    def __post_init__(self):
        if self.kind not in (RHO, THETA):
            raise ValueError(f"unknown shape {self.kind!r}")
        if self.degree_bound < 0:
            raise ValueError("degree bound must be >= 0")

    @property
    def n_unknowns(self):
        return self.degree_bound + 2

    def unknown_names(self):
        unit = "alpha" if self.kind == RHO else "beta"
        return [unit] + [f"c{k}" for k in range(self.degree_bound + 1)]

    def endomorphism(self, vector):
        unit, coeffs = vector[0], vector[1:]
        if self.kind == RHO:
            poly = Poly2({(0, k): c for k, c in enumerate(coeffs)})
            return Endomorphism(POLY_X.scale(unit) + poly, POLY_Y)
        poly = Poly2({(k, 0): c for k, c in enumerate(coeffs)})
        return Endomorphism(POLY_X, POLY_Y.scale(unit) + poly)

    def vector_of(self, phi):
        shape = elementary_shape(phi)
        if shape is None:
            raise ShapeMismatch(f"{phi.render()} is not elementary")
        kind, unit, poly = shape
        if kind != self.kind:
            # the pure scalings (unit*X, Y) and (X, unit*Y) have both shapes only
            # when the unit is 1; otherwise the classification above is exact.
            other = _as_other_shape(phi, self.kind)
            if other is None:
                raise ShapeMismatch(f"{phi.render()} does not have shape {self.kind}")
            unit, poly = other
        if poly.total_degree() > self.degree_bound:
            raise ShapeMismatch(f"degree of {phi.render()} exceeds bound {self.degree_bound}")
        idx = 1 if self.kind == RHO else 0
        coeffs = [SCALAR_ZERO] * (self.degree_bound + 1)
        for m, c in poly.terms.items():
            coeffs[m[idx]] = c
        return (unit, *coeffs)


def _as_other_shape(phi, kind):
    if kind == THETA and phi.imX == POLY_X:
        rest = phi.imY - POLY_Y.scale(phi.imY.coeff(0, 1))
        if rest.free_of("Y"):
            return phi.imY.coeff(0, 1), rest
    if kind == RHO and phi.imY == POLY_Y:
        rest = phi.imX - POLY_X.scale(phi.imX.coeff(1, 0))
        if rest.free_of("X"):
            return phi.imX.coeff(1, 0), rest
    return None


@dataclass(frozen=True)
class AnyNonzero:
    def holds(self, unit):
        return not unit.is_zero()

    def roots(self):
        return None

    def to_json(self):
        return {"kind": "AnyNonzero"}


@dataclass(frozen=True)
class PowerEquation:
    """``unit ** s == c``."""

    s: int
    c: Scalar

    def holds(self, unit):
        return unit**self.s == self.c

    def roots(self):
        return scalar_roots(self.s, self.c)

    def to_json(self):
        return {"kind": "PowerEquation", "s": self.s, "c": self.c.render()}


@dataclass(frozen=True)
class FiniteSet:
    values: tuple

    def holds(self, unit):
        return unit in self.values

    def roots(self):
        return list(self.values)

    def to_json(self):
        return {"kind": "FiniteSet", "values": [v.render() for v in self.values]}


@dataclass(frozen=True)
class SolutionComponent:
    """Affine family ``particular + span(directions)`` of unknown vectors.

    When the unit is pinned by a PowerEquation or FiniteSet, coordinate 0 of
    ``particular`` and of every direction is zero and the unit ranges over
    the constraint's solutions instead.
    """

    particular: tuple
    directions: tuple
    unit_constraint: object
    open_conditions: tuple = (UNIT,)
    linear_rank: int = 0

    @property
    def unit_pinned(self):
        return not isinstance(self.unit_constraint, AnyNonzero)

    @property
    def dimension(self):
        return len(self.directions)

    def key(self):
        return (
            tuple(c.render() for c in self.particular),
            tuple(tuple(c.render() for c in d) for d in self.directions),
            repr(self.unit_constraint.to_json()),
            self.open_conditions,
        )

    def __eq__(self, other):
        return isinstance(other, SolutionComponent) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def member(self, params, unit=None):
        vec = list(self.particular)
        for t, d in zip(params, self.directions):
            t = t if isinstance(t, Scalar) else Scalar.rational(t)
            vec = [a + t * b for a, b in zip(vec, d)]
        if self.unit_pinned:
            if unit is None:
                raise ValueError("pinned unit needs an explicit value")
            vec[UNIT] = unit
        return tuple(vec)

    def contains_vector(self, vec):
        unit = vec[UNIT]
        if unit.is_zero() or not self.unit_constraint.holds(unit):
            return False
        diff = [a - b for a, b in zip(vec, self.particular)]
        if self.unit_pinned:
            diff[UNIT] = SCALAR_ZERO
        for d in self.directions:
            piv = _pivot(d)
            t = diff[piv]
            if not t.is_zero():
                diff = [a - t * b for a, b in zip(diff, d)]
        return all(x.is_zero() for x in diff)

    def rank_report(self):
        n = len(self.particular)
        pinned = 1 if self.unit_pinned else 0
        return {
            "unknowns": n,
            "linear_rank": self.linear_rank,
            "unit_pinned": bool(pinned),
            "dimension": self.dimension,
            "consistent": n - self.linear_rank - pinned == self.dimension,
        }

    def to_json(self):
        return {
            "particular": [c.render() for c in self.particular],
            "directions": [[c.render() for c in d] for d in self.directions],
            "unit_constraint": self.unit_constraint.to_json(),
            "open_conditions": [f"x{k} != 0" for k in self.open_conditions],
        }


@dataclass(frozen=True)
class SolutionSet:
    shape: ElementaryShape
    components: tuple
    residual: tuple = None
    equations: int = field(default=0, compare=False)

    def rank_report(self):
        return {
            "equations": self.equations,
            "components": [c.rank_report() for c in self.components],
        }

    def to_json(self):
        return {
            "shape": self.shape.kind,
            "degree_bound": self.shape.degree_bound,
            "unknowns": self.shape.unknown_names(),
            "components": [c.to_json() for c in self.components],
            "residual": list(self.residual) if self.residual is not None else None,
            "rank_report": self.rank_report(),
        }


def _pivot(vec):
    for i, x in enumerate(vec):
        if not x.is_zero():
            return i
    return None


# -- equation setup -------------------------------------------------------------


def _unknown_image(shape, nv):
    """Images of X and Y under the symbolic elementary map, as MPolys."""
    d = shape.degree_bound
    unit = MPoly.var(nv, 2 + UNIT)
    gen_x = lift(POLY_X, nv)
    gen_y = lift(POLY_Y, nv)
    poly = MPoly(nv)
    for k in range(d + 1):
        e = [0] * nv
        e[2 + 1 + k] = 1
        if shape.kind == RHO:
            e[1] = k
        else:
            e[0] = k
        poly = poly + MPoly(nv, {tuple(e): SCALAR_ONE})
    if shape.kind == RHO:
        return unit * gen_x + poly, gen_y
    return gen_x, unit * gen_y + poly


def commutation_equations(target, shape):
    """Coefficient equations (MPolys over the unknowns) for ``phi target = target phi``."""
    n = shape.n_unknowns
    nv = n + 2
    phi_x, phi_y = _unknown_image(shape, nv)
    cx, cy = PowerCache(phi_x), PowerCache(phi_y)
    diffs = []
    if isinstance(target, Derivation):
        dx, dy = lift(target.dX, nv), lift(target.dY, nv)
        for img, dg in ((phi_x, target.dX), (phi_y, target.dY)):
            lhs = subs_xy(lift(dg, nv), phi_x, phi_y, cx, cy)
            rhs = dx * img.partial(0) + dy * img.partial(1)
            diffs.append(lhs - rhs)
    elif isinstance(target, Endomorphism):
        px, py = lift(target.imX, nv), lift(target.imY, nv)
        tx, ty = PowerCache(px), PowerCache(py)
        for img, tg in ((phi_x, target.imX), (phi_y, target.imY)):
            lhs = subs_xy(lift(tg, nv), phi_x, phi_y, cx, cy)
            rhs = subs_xy(img, px, py, tx, ty)
            diffs.append(lhs - rhs)
    else:
        raise TypeError(f"cannot take the commutant of {target!r}")
    eqs = []
    for diff in diffs:
        for _, coeff in sorted(diff.coefficient_groups([0, 1]).items()):
            eqs.append(MPoly(n, {e[2:]: c for e, c in coeff.terms.items()}))
    return eqs


# -- univariate helpers over Scalar -------------------------------------------


def _univariate(eq, var):
    """Coefficient list (low degree first) of an equation in one unknown."""
    deg = max(e[var] for e in eq.terms)
    out = [SCALAR_ZERO] * (deg + 1)
    for e, c in eq.terms.items():
        out[e[var]] = c
    return out


def _strip(p):
    while p and p[-1].is_zero():
        p.pop()
    return p


def _sdivmod(p, q):
    r = list(p)
    dq = len(q) - 1
    if len(r) <= dq:
        return [], _strip(r)
    quot = [SCALAR_ZERO] * (len(r) - dq)
    inv = q[-1].inverse()
    for k in range(len(r) - 1, dq - 1, -1):
        c = r[k]
        if c.is_zero():
            continue
        c = c * inv
        quot[k - dq] = c
        for j in range(dq + 1):
            r[k - dq + j] = r[k - dq + j] - c * q[j]
    return _strip(quot), _strip(r[:dq])


def _smonic(p):
    inv = p[-1].inverse()
    return [c * inv for c in p]


def _sgcd(p, q):
    p, q = _strip(list(p)), _strip(list(q))
    while q:
        p, q = q, _sdivmod(p, q)[1]
    return _smonic(p)


def _field_roots(p):
    """Distinct roots in the field of a univariate Scalar polynomial.

    Returns ``(roots, complete)``; ``complete`` is False when some roots lie
    outside Q(E) (e.g. primitive cube roots of unity).
    """
    p = _smonic(_strip(list(p)))
    deg = len(p) - 1
    if deg == 0:
        return [], True
    nonzero = [k for k, c in enumerate(p) if not c.is_zero()]
    if nonzero == [0, deg] or nonzero == [deg]:
        c = -p[0]
        roots = scalar_roots(deg, c)
        if c.is_zero():
            return [SCALAR_ZERO], True
        return roots, len(roots) == deg
    if all(c.is_rational() for c in p):
        found = _upoly.rational_roots([c.as_rational() for c in p])
        roots = [Scalar.rational(r) for r, _ in found]
        return roots, sum(m for _, m in found) == deg
    return [], False


def _binomial(p):
    """``(s, c)`` when the monic ``p`` is ``t^s - c``, else None."""
    deg = len(p) - 1
    if deg < 1:
        return None
    if any(not p[k].is_zero() for k in range(1, deg)):
        return None
    return deg, -p[0]


# -- propagation ------------------------------------------------------------------


def _render_unknown_poly(eq, names):
    parts = []
    for e, c in sorted(eq.terms.items(), reverse=True):
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
        coeff = c.render() if c.is_single_term() else f"({c.render()})"
        parts.append(f"{coeff}*{mono}" if mono else coeff)
    return " + ".join(parts) + " = 0" if parts else "0 = 0"


class _Branch:
    def __init__(self, n, eqs, subs=None, rank=0, constraint=None, has_unit=True):
        self.n = n
        self.eqs = eqs
        self.subs = subs or {}
        self.rank = rank
        self.constraint = constraint
        self.has_unit = has_unit

    def fork(self, extra):
        b = _Branch(self.n, list(self.eqs) + [extra], dict(self.subs), self.rank, self.constraint, self.has_unit)
        return b

    def eliminate(self, var, expr):
        """Record ``var = expr`` and substitute everywhere."""
        cache = [MPoly.const(self.n, SCALAR_ONE)]
        self.eqs = [e.substitute(var, expr, cache) if any(t[var] for t in e.terms) else e for e in self.eqs]
        for k, v in list(self.subs.items()):
            if any(t[var] for t in v.terms):
                self.subs[k] = v.substitute(var, expr)
        self.subs[var] = expr
        self.rank += 1


def _normalize_eq(eq, has_unit):
    if has_unit and eq.terms:
        k = eq.min_power(UNIT)
        if k:
            eq = eq.divide_power(UNIT, k)
    return eq


def _eq_key(eq):
    items = sorted(eq.terms.items())
    lead = items[-1][1]
    inv = lead.inverse()
    return tuple((e, (c * inv).render()) for e, c in items)


def _tidy(branch):
    """Normalize equations; False if the branch is inconsistent."""
    seen = {}
    for eq in branch.eqs:
        eq = _normalize_eq(eq, branch.has_unit and UNIT not in branch.subs)
        if not eq.terms:
            continue
        if eq.is_constant():
            return False
        seen.setdefault(_eq_key(eq), eq)
    branch.eqs = list(seen.values())
    return True


def _var_poly(n, k, shift=SCALAR_ZERO):
    p = MPoly.var(n, k)
    if not shift.is_zero():
        p = p - MPoly.const(n, shift)
    return p


def _propagate(branch, names):
    """Solve a branch; returns a list of finished branches."""
    n = branch.n
    while True:
        if not _tidy(branch):
            return []
        if not branch.eqs:
            return [branch]
        linear = [e for e in branch.eqs if e.degree() <= 1]
        if linear:
            eq = linear[0]
            var = max(eq.variables())
            coeff = eq.terms[tuple(1 if k == var else 0 for k in range(n))]
            rest = eq - MPoly.var(n, var, coeff)
            branch.eliminate(var, rest.scale(-coeff.inverse()))
            continue
        # single-term equations: a product of unknowns vanishes
        mono = [e for e in branch.eqs if len(e) == 1]
        if mono:
            vs = [v for v in mono[0].variables() if not (branch.has_unit and v == UNIT)]
            if len(vs) == 1:
                branch.eqs.append(MPoly.var(n, vs[0]))
                continue
            out = []
            for v in vs:
                out.extend(_propagate(branch.fork(MPoly.var(n, v)), names))
            return out
        # a single non-unit unknown
        for eq in branch.eqs:
            vs = eq.variables()
            if len(vs) == 1 and not (branch.has_unit and vs[0] == UNIT):
                roots, complete = _field_roots(_univariate(eq, vs[0]))
                if not complete:
                    raise SolverIncomplete(
                        f"roots of {_render_unknown_poly(eq, names)} leave the coefficient field",
                        residual=_residual(branch, names),
                    )
                out = []
                for r in roots:
                    out.extend(_propagate(branch.fork(_var_poly(n, vs[0], r)), names))
                return out
        # the unit
        if branch.has_unit and UNIT not in branch.subs:
            unit_eqs = [e for e in branch.eqs if e.variables() == [UNIT]]
            if unit_eqs:
                g = _univariate(unit_eqs[0], UNIT)
                for e in unit_eqs[1:]:
                    g = _sgcd(g, _univariate(e, UNIT))
                g = _smonic(g)
                if len(g) == 1:
                    return []
                elsewhere = any(UNIT in e.variables() for e in branch.eqs if e.variables() != [UNIT])
                elsewhere = elsewhere or any(any(t[UNIT] for t in v.terms) for v in branch.subs.values())
                binom = _binomial(g)
                if not elsewhere and branch.constraint is None:
                    roots, complete = _field_roots(g)
                    if binom is not None:
                        branch.constraint = PowerEquation(binom[0], binom[1])
                    elif complete:
                        branch.constraint = FiniteSet(tuple(sorted((r for r in roots if not r.is_zero()), key=Scalar.render)))
                    else:
                        raise SolverIncomplete(
                            "unit polynomial does not split over the coefficient field",
                            residual=_residual(branch, names),
                        )
                    branch.eqs = [e for e in branch.eqs if e.variables() != [UNIT]]
                    continue
                roots, complete = _field_roots(g)
                if not complete:
                    raise SolverIncomplete(
                        "unit is coupled to other unknowns through a non-split polynomial",
                        residual=_residual(branch, names),
                    )
                out = []
                for r in roots:
                    if r.is_zero():
                        continue
                    out.extend(_propagate(branch.fork(_var_poly(n, UNIT, r)), names))
                return out
        raise SolverIncomplete("propagation stalled", residual=_residual(branch, names))


def _residual(branch, names):
    return tuple(_render_unknown_poly(e, names) for e in branch.eqs)


def _rref(rows):
    rows = [list(r) for r in rows]
    out = []
    width = len(rows[0]) if rows else 0
    col = 0
    r = 0
    while r < len(rows) and col < width:
        piv = next((i for i in range(r, len(rows)) if not rows[i][col].is_zero()), None)
        if piv is None:
            col += 1
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        col += 1
    for row in rows[:r]:
        out.append(tuple(row))
    return out


def _component_from_branch(branch):
    n = branch.n
    pinned = branch.constraint is not None
    free = [v for v in range(n) if v not in branch.subs and not (pinned and v == UNIT)]
    exprs = []
    for v in range(n):
        if pinned and v == UNIT:
            exprs.append(None)
        elif v in branch.subs:
            exprs.append(branch.subs[v])
        else:
            exprs.append(MPoly.var(n, v))
    particular = [SCALAR_ZERO if e is None else e.constant() for e in exprs]
    dirs = []
    for f in free:
        unit_e = tuple(1 if k == f else 0 for k in range(n))
        dirs.append([SCALAR_ZERO if e is None else e.terms.get(unit_e, SCALAR_ZERO) for e in exprs])
    if branch.has_unit and not pinned:
        if particular[UNIT].is_zero() and all(d[UNIT].is_zero() for d in dirs):
            return None  # unit identically zero
    dirs = _rref(dirs) if dirs else []
    for d in dirs:
        piv = _pivot(d)
        t = particular[piv]
        if not t.is_zero():
            particular = [a - t * b for a, b in zip(particular, d)]
    constraint = branch.constraint or AnyNonzero()
    return SolutionComponent(
        particular=tuple(particular),
        directions=tuple(dirs),
        unit_constraint=constraint,
        open_conditions=(UNIT,) if branch.has_unit else (),
        linear_rank=branch.rank,
    )


def _solve_system(eqs, n, names, has_unit=True):
    branches = _propagate(_Branch(n, list(eqs), has_unit=has_unit), names)
    comps = {}
    for b in branches:
        c = _component_from_branch(b)
        if c is not None:
            comps.setdefault(c.key(), c)
    return tuple(comps[k] for k in sorted(comps))


# -- verification -------------------------------------------------------------------


def _verify_symbolic(eqs, comp, n):
    """Substitute the whole family into the equations; everything must vanish."""
    free = len(comp.directions)
    # free parameters occupy variables 1..free of a fresh space; variable 0 is the unit
    m = free + 1
    values = []
    for k in range(n):
        if comp.unit_pinned and k == UNIT:
            values.append(MPoly.var(m, 0))
            continue
        expr = MPoly.const(m, comp.particular[k])
        for i, d in enumerate(comp.directions):
            if not d[k].is_zero():
                expr = expr + MPoly.var(m, i + 1, d[k])
        values.append(expr)
    for eq in eqs:
        acc = MPoly(m)
        for e, c in eq.terms.items():
            t = MPoly.const(m, c)
            for k, p in enumerate(e):
                for _ in range(p):
                    t = t * values[k]
            acc = acc + t
        if comp.unit_pinned and acc.terms:
            acc = _reduce_unit(acc, comp.unit_constraint, m)
        if acc.terms:
            return False
    return True


def _reduce_unit(p, constraint, m):
    if isinstance(constraint, PowerEquation):
        out = MPoly(m)
        for e, c in p.terms.items():
            k = e[0]
            q, r = divmod(k, constraint.s)
            ne = (r,) + e[1:]
            out = out + MPoly(m, {ne: c * constraint.c**q})
        return out
    # FiniteSet: each value must annihilate the polynomial
    for v in constraint.values:
        vals = p.substitute(0, MPoly.const(m, v))
        if vals.terms:
            return vals
    return MPoly(m)


def sample_members(comp, shape, count=5, seed=0):
    """Concrete members with free parameters at distinct small rationals."""
    rng = random.Random(seed)
    units = comp.unit_constraint.roots() if comp.unit_pinned else None
    if units is not None:
        units = [u for u in units if not u.is_zero()]
        if not units:
            return []
    out = []
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        attempts += 1
        pool = [mpq(p, q) for p in range(-9, 10) for q in (1, 2, 3) if p]
        params = rng.sample(pool, len(comp.directions)) if comp.directions else []
        unit = rng.choice(units) if units else None
        vec = comp.member([Scalar.rational(p) for p in params], unit)
        if vec[UNIT].is_zero():
            continue
        out.append(vec)
    return out


def verify_component(target, shape, comp, count=5, seed=0):
    members = sample_members(comp, shape, count=count, seed=seed)
    return bool(members) and all(commute_check(shape.endomorphism(v), target) for v in members)


# -- public operations ---------------------------------------------------------------


def default_degree_bound(target):
    if isinstance(target, Derivation):
        deg = max(target.dX.total_degree(), target.dY.total_degree())
    else:
        deg = max(target.imX.total_degree(), target.imY.total_degree())
    deg = 0 if deg == float("-inf") else deg
    return max(8, 2 * (1 + deg))


def elementary_commutant(target, shape, strict=True, verify=True):
    """All elementary maps of ``shape`` commuting with ``target``."""
    names = shape.unknown_names()
    eqs = commutation_equations(target, shape)
    n = shape.n_unknowns
    try:
        comps = _solve_system(eqs, n, names)
    except SolverIncomplete as exc:
        if strict:
            raise
        return SolutionSet(shape, (), residual=exc.residual or (str(exc),), equations=len(eqs))
    if verify:
        for comp in comps:
            if not _verify_symbolic(eqs, comp, n):
                raise SoundnessError(f"component {comp.to_json()} fails the equation system")
            if not verify_component(target, shape, comp):
                raise SoundnessError(f"component {comp.to_json()} fails commute_check")
    return SolutionSet(shape, comps, None, equations=len(eqs))


def solution_set_equal(lhs, rhs):
    if lhs.shape != rhs.shape:
        raise IncomparableShapes(
            f"cannot compare {lhs.shape.kind}/{lhs.shape.degree_bound} with {rhs.shape.kind}/{rhs.shape.degree_bound}"
        )
    return lhs.components == rhs.components and lhs.residual == rhs.residual


def contains(solution_set, phi):
    vec = solution_set.shape.vector_of(phi)
    return any(c.contains_vector(vec) for c in solution_set.components)


def truncate(solution_set, d):
    """Restrict a solution set to the members of degree <= d (for stability probes)."""
    if d > solution_set.shape.degree_bound:
        raise ValueError("cannot truncate above the degree bound")
    shape = ElementaryShape(solution_set.shape.kind, d)
    keep = d + 2
    comps = {}
    for c in solution_set.components:
        # intersect with the coordinate subspace c_{d+1} = ... = 0
        n = len(c.particular)
        free = len(c.directions)
        eqs = []
        for k in range(keep, n):
            row = {tuple(1 if i == j + 1 else 0 for i in range(free + 1)): c.directions[j][k] for j in range(free) if not c.directions[j][k].is_zero()}
            const = c.particular[k]
            p = MPoly(free + 1, row)
            if not const.is_zero():
                p = p + MPoly.const(free + 1, const)
            eqs.append(p)
        try:
            branches = _propagate(_Branch(free + 1, eqs, has_unit=False), ["_"] + [f"t{j}" for j in range(free)])
        except SolverIncomplete:  # pragma: no cover - linear system cannot stall
            raise
        for b in branches:
            sub = _component_from_branch(b)
            if sub is None:
                continue
            # map back: vector = particular + sum t_j dir_j with t given by sub's family
            part = list(c.particular)
            for j in range(free):
                t = sub.particular[j + 1]
                part = [a + t * bb for a, bb in zip(part, c.directions[j])]
            dirs = []
            for sd in sub.directions:
                v = [SCALAR_ZERO] * n
                for j in range(free):
                    if not sd[j + 1].is_zero():
                        v = [a + sd[j + 1] * bb for a, bb in zip(v, c.directions[j])]
                dirs.append(v)
            part, dirs = part[:keep], [v[:keep] for v in dirs]
            if not c.unit_pinned and part[UNIT].is_zero() and all(v[UNIT].is_zero() for v in dirs):
                continue
            dirs = _rref(dirs) if dirs else []
            for dv in dirs:
                piv = _pivot(dv)
                t = part[piv]
                if not t.is_zero():
                    part = [a - t * bb for a, bb in zip(part, dv)]
            comp = SolutionComponent(tuple(part), tuple(dirs), c.unit_constraint, c.open_conditions, 0)
            comps.setdefault(comp.key(), comp)
    return SolutionSet(shape, tuple(comps[k] for k in sorted(comps)), solution_set.residual)


def same_family(lhs, rhs):
    """Equality of the member sets, ignoring bookkeeping such as linear rank."""
    return lhs.shape == rhs.shape and [c.key() for c in lhs.components] == [c.key() for c in rhs.components]


# -- the polynomial functional equations --------------------------------------------


@dataclass(frozen=True)
class PolyFamily:
    """Solutions ``particular + span(basis)`` of a linear equation for a polynomial g.

    ``fixed`` records auxiliary scalars (such as alpha) forced by the equation.
    """

    particular: Poly2
    basis: tuple
    fixed: tuple = ()

    def is_zero_space(self):
        return not self.particular and not self.basis

    def render(self):
        parts = [p.render() for p in self.basis]
        fixed = ", ".join(f"{k} = {v.render()}" for k, v in self.fixed)
        text = f"{self.particular.render()} + span{{{', '.join(parts)}}}"
        return f"{text}; {fixed}" if fixed else text


def _family_from_linear(eqs, n, offset, names):
    """Solve a linear system whose unknowns ``offset..n-1`` are the coefficients of g."""
    comps = _solve_system(eqs, n, names, has_unit=False)
    if not comps:
        return None
    (comp,) = comps
    if offset and any(not d[k].is_zero() for d in comp.directions for k in range(offset)):
        raise SolverIncomplete("auxiliary unknown not determined", residual=())

    def to_poly(vec):
        return Poly2({(k - offset, 0): vec[k] for k in range(offset, n)})

    basis = []
    for d in comp.directions:
        basis.append(to_poly(d))
    fixed = tuple((names[k], comp.particular[k]) for k in range(offset))
    return PolyFamily(to_poly(comp.particular), tuple(basis), fixed)


def _g_unknowns(n, offset, nv_unknown):
    """g = sum c_k X^k as an MPoly over (X, unknowns)."""
    nv = 1 + nv_unknown
    g = MPoly(nv)
    for k in range(n):
        e = [0] * nv
        e[0] = k
        e[1 + offset + k] = 1
        g = g + MPoly(nv, {tuple(e): SCALAR_ONE})
    return g


def _x(nv, k=1):
    e = [0] * nv
    e[0] = k
    return MPoly(nv, {tuple(e): SCALAR_ONE})


def _equations_in_x(expr, nv):
    out = []
    for _, coeff in sorted(expr.coefficient_groups([0]).items()):
        out.append(MPoly(nv - 1, {e[1:]: c for e, c in coeff.terms.items()}))
    return out


def solve_euler(b, d):
    """Polynomials g of degree <= d with ``X g'(X) = b g(X)``."""
    b = Scalar.rational(as_rational(b))
    nu = d + 1
    nv = 1 + nu
    g = _g_unknowns(d + 1, 0, nu)
    expr = _x(nv) * g.partial(0) - g.scale(b)
    return _family_from_linear(_equations_in_x(expr, nv), nu, 0, [f"c{k}" for k in range(nu)])


def solve_affine_l37(a, d):
    """Pairs (alpha, g) with ``alpha X + a X g'(X) = a g(X) + X``, deg g <= d."""
    a = as_rational(a)
    if a == 0:
        raise ZeroParameter("a must be nonzero")
    a = Scalar.rational(a)
    nu = d + 2
    nv = 1 + nu
    alpha = MPoly.var(nv, 1)
    g = _g_unknowns(d + 1, 1, nu)
    x = _x(nv)
    expr = alpha * x + (x * g.partial(0)).scale(a) - g.scale(a) - x
    return _family_from_linear(_equations_in_x(expr, nv), nu, 1, ["alpha"] + [f"c{k}" for k in range(d + 1)])


def solve_l38(a, d):
    """Polynomials g of degree <= d with ``a X g'(X) + g'(X) = a g(X)``."""
    a = as_rational(a)
    if a == 0:
        raise ZeroParameter("a must be nonzero")
    a = Scalar.rational(a)
    nu = d + 1
    nv = 1 + nu
    g = _g_unknowns(d + 1, 0, nu)
    gp = g.partial(0)
    expr = (_x(nv) * gp).scale(a) + gp - g.scale(a)
    return _family_from_linear(_equations_in_x(expr, nv), nu, 0, [f"c{k}" for k in range(nu)])


def solve_qdiff(p, m, d):
    """Polynomials f of degree <= d with ``f(E(p) X) = E(p m) f(X)``."""
    p = as_rational(p)
    if p == 0:
        raise ZeroParameter("p must be nonzero")
    nu = d + 1
    nv = 1 + nu
    f = _g_unknowns(d + 1, 0, nu)
    scaled = f.substitute(0, _x(nv).scale(exp_symbol(p)))
    expr = scaled - f.scale(exp_symbol(p * m))
    return _family_from_linear(_equations_in_x(expr, nv), nu, 0, [f"c{k}" for k in range(nu)])


__all__ = [
    "AnyNonzero",
    "ElementaryShape",
    "FiniteSet",
    "PolyFamily",
    "PowerEquation",
    "SolutionComponent",
    "SolutionSet",
    "commutation_equations",
    "contains",
    "default_degree_bound",
    "elementary_commutant",
    "sample_members",
    "solution_set_equal",
    "solve_affine_l37",
    "solve_euler",
    "solve_l38",
    "solve_qdiff",
    "truncate",
    "verify_component",
]
