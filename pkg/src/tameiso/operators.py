"""Derivations and endomorphisms of K[X, Y].

A :class:`Derivation` is stored as its values on the generators and acts by
``D(P) = D(X) dP/dX + D(Y) dP/dY``.  An :class:`Endomorphism` is stored as
the images of the generators and acts by substitution.

Composition follows ring-map order: ``compose(phi, psi)`` is the map
``P -> phi(psi(P))``, so its X-image is ``psi(X)`` evaluated at phi's images.
"""

from dataclasses import dataclass

from . import _matrix
from .errors import DegreeCapExceeded, NonUnit, NotElementary, NotLocallyFinite
from .poly2 import ONE_POLY, POLY_X, POLY_Y, ZERO_POLY, Poly2, degree_cap, monomial_key
from .scalars import SCALAR_ZERO

DEFAULT_DIM_CAP = 64
DEFAULT_DEG_CAP = 64


@dataclass(frozen=True)
class Derivation:
    dX: Poly2
    dY: Poly2

    def __call__(self, p):
        return deriv_apply(self, p)

    def __add__(self, other):
        return Derivation(self.dX + other.dX, self.dY + other.dY)

    def __sub__(self, other):
        return Derivation(self.dX - other.dX, self.dY - other.dY)

    def __neg__(self):
        return Derivation(-self.dX, -self.dY)

    def scale(self, c):
        return Derivation(self.dX.scale(c), self.dY.scale(c))

    def is_zero(self):
        return self.dX.is_zero() and self.dY.is_zero()

    def max_degree(self):
        return max(self.dX.total_degree(), self.dY.total_degree())

    def render(self):
        return f"dX = {self.dX.render()} ; dY = {self.dY.render()}"

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class Endomorphism:
    imX: Poly2
    imY: Poly2

    @classmethod
    def identity(cls):
        return IDENTITY

    def __call__(self, p):
        return p.substitute(self.imX, self.imY)

    def compose(self, inner):
        return endo_compose(self, inner)

    def is_identity(self):
        return self.imX == POLY_X and self.imY == POLY_Y

    def max_degree(self):
        return max(self.imX.total_degree(), self.imY.total_degree())

    def render(self):
        return f"X -> {self.imX.render()} ; Y -> {self.imY.render()}"

    def __str__(self):
        return self.render()


IDENTITY = Endomorphism(POLY_X, POLY_Y)
ZERO_DERIVATION = Derivation(ZERO_POLY, ZERO_POLY)

# Elementary shapes, named by which generator moves.
RHO = "RHO"  # (aX + r(Y), Y)
THETA = "THETA"  # (X, bY + s(X))


def elementary_shape(e):
    """Classify ``e`` as ``(kind, unit, poly)`` or return None.

    ``kind`` is RHO for ``(unit*X + r(Y), Y)`` and THETA for
    ``(X, unit*Y + s(X))``.  The identity is reported as RHO.  A zero unit is
    still reported; :func:`elementary_inverse` rejects it.
    """
    if e.imY == POLY_Y:
        rest = e.imX - POLY_X.scale(e.imX.coeff(1, 0))
        if rest.free_of("X"):
            return RHO, e.imX.coeff(1, 0), rest
    if e.imX == POLY_X:
        rest = e.imY - POLY_Y.scale(e.imY.coeff(0, 1))
        if rest.free_of("Y"):
            return THETA, e.imY.coeff(0, 1), rest
    return None


def make_elementary(kind, unit, poly):
    if kind == RHO:
        return Endomorphism(POLY_X.scale(unit) + poly, POLY_Y)
    if kind == THETA:
        return Endomorphism(POLY_X, POLY_Y.scale(unit) + poly)
    raise ValueError(f"unknown elementary kind {kind!r}")


def deriv_apply(d, p):
    out = ZERO_POLY
    if d.dX:
        px = p.partial("X")
        if px:
            out = out + d.dX * px
    if d.dY:
        py = p.partial("Y")
        if py:
            out = out + d.dY * py
    return out


def bracket(d1, d2):
    return Derivation(
        deriv_apply(d1, d2.dX) - deriv_apply(d2, d1.dX),
        deriv_apply(d1, d2.dY) - deriv_apply(d2, d1.dY),
    )


def endo_compose(outer, inner):
    """The endomorphism ``P -> outer(inner(P))``."""
    return Endomorphism(
        inner.imX.substitute(outer.imX, outer.imY),
        inner.imY.substitute(outer.imX, outer.imY),
    )


def elementary_inverse(e):
    shape = elementary_shape(e)
    if shape is None:
        raise NotElementary(f"{e.render()} is not elementary")
    kind, unit, poly = shape
    if unit.is_zero():
        raise NonUnit(f"{e.render()} has zero unit coefficient")
    inv = unit.inverse()
    return make_elementary(kind, inv, poly.scale(-inv))


def word_inverse(word):
    """Inverse of a composition ``word[0] o word[1] o ...`` of elementary maps."""
    return [elementary_inverse(e) for e in reversed(word)]


def compose_word(word):
    out = IDENTITY
    for e in word:
        out = endo_compose(out, e)
    return out


def commute_check(lhs, rhs):
    """Do two operators commute?  Both are checked on X and Y only.

    For a derivation D and endomorphism phi the maps ``phi o D`` and
    ``D o phi`` both satisfy ``L(PQ) = phi(P) L(Q) + phi(Q) L(P)``, so
    agreement on generators implies agreement everywhere.
    """
    if isinstance(lhs, Derivation) and isinstance(rhs, Derivation):
        return bracket(lhs, rhs).is_zero()
    if isinstance(lhs, Endomorphism) and isinstance(rhs, Endomorphism):
        return endo_compose(lhs, rhs) == endo_compose(rhs, lhs)
    if isinstance(lhs, Endomorphism):
        lhs, rhs = rhs, lhs
    d, phi = lhs, rhs
    for g, dg in ((POLY_X, d.dX), (POLY_Y, d.dY)):
        if phi(dg) != deriv_apply(d, phi(g)):
            return False
    return True


def conjugate_derivation(phi, phi_inv, d):
    """The derivation ``phi D phi^{-1}``."""
    return Derivation(phi(deriv_apply(d, phi_inv.imX)), phi(deriv_apply(d, phi_inv.imY)))


# -- invariant subspaces ------------------------------------------------------


class _Echelon:
    """Linearly independent polynomials with distinct leading monomials."""

    def __init__(self):
        self.basis = []
        self.pivot = {}  # leading monomial -> index into basis

    def reduce(self, p):
        """Remove every pivot monomial from ``p``; return ``(remainder, coords)``."""
        coords = {}
        terms = dict(p.terms)
        done = set()
        while True:
            cands = [m for m in terms if m in self.pivot and m not in done]
            if not cands:
                break
            m = min(cands, key=monomial_key)  # largest remaining pivot monomial
            c = terms[m]
            idx = self.pivot[m]
            coords[idx] = coords.get(idx, SCALAR_ZERO) + c
            for mm, v in self.basis[idx].items():
                nv = terms.get(mm, SCALAR_ZERO) - c * v
                if nv.is_zero():
                    terms.pop(mm, None)
                else:
                    terms[mm] = nv
            done.add(m)
        return Poly2(terms, _clean=True), coords

    def add(self, p):
        lead = p.monomials()[0]
        c = p.coeff(*lead)
        p = p.scale(c.inverse())
        self.pivot[lead] = len(self.basis)
        self.basis.append(p)
        return len(self.basis) - 1


@dataclass(frozen=True)
class InvariantSubspace:
    """A D-stable span; ``matrix[i][j]`` is coordinate i of ``D(basis[j])``."""

    basis: tuple
    matrix: tuple

    @property
    def dim(self):
        return len(self.basis)

    def coordinates(self, p):
        """Coordinates of ``p`` in the basis (ValueError if outside the span)."""
        ech = _Echelon()
        for b in self.basis:
            ech.basis.append(b)
            ech.pivot[b.monomials()[0]] = len(ech.basis) - 1
        rem, coords = ech.reduce(p)
        if rem:
            raise ValueError(f"{p.render()} is not in the span")
        return [coords.get(i, SCALAR_ZERO) for i in range(self.dim)]

    def combine(self, coords):
        out = ZERO_POLY
        for c, b in zip(coords, self.basis):
            if not c.is_zero():
                out = out + b.scale(c)
        return out

    def matrix_rows(self):
        return [list(r) for r in self.matrix]


def invariant_subspace(d, seeds=None, dim_cap=DEFAULT_DIM_CAP, deg_cap=DEFAULT_DEG_CAP):
    """Smallest D-stable subspace containing ``seeds`` (default X and Y).

    Basis vectors are the successive iterates reduced against the span found
    so far and scaled to leading coefficient 1, so e.g. a constant term of
    ``D(X)`` shows up as the basis element ``1``.
    """
    if seeds is None:
        seeds = [POLY_X, POLY_Y]
    if not seeds:
        raise ValueError("need at least one seed")
    ech = _Echelon()
    queue = []
    images = {}

    def offer(p):
        rem, _ = ech.reduce(p)
        if rem:
            if len(ech.basis) >= dim_cap:
                raise NotLocallyFinite(f"invariant subspace exceeds dimension cap {dim_cap}")
            if rem.total_degree() > deg_cap:
                raise NotLocallyFinite(f"iterate degree exceeds cap {deg_cap}")
            queue.append(ech.add(rem))

    try:
        with degree_cap(max(deg_cap, d.max_degree() + deg_cap)):
            for s in seeds:
                offer(s)
            while queue:
                idx = queue.pop(0)
                img = deriv_apply(d, ech.basis[idx])
                images[idx] = img
                offer(img)
    except DegreeCapExceeded as exc:
        raise NotLocallyFinite(str(exc)) from exc
    n = len(ech.basis)
    matrix = _matrix.zeros(n)
    for j in range(n):
        rem, coords = ech.reduce(images[j])
        assert not rem
        for i, c in coords.items():
            matrix[i][j] = c
    return InvariantSubspace(tuple(ech.basis), tuple(tuple(r) for r in matrix))


def is_locally_finite(d, dim_cap=DEFAULT_DIM_CAP, deg_cap=DEFAULT_DEG_CAP):
    """Semi-decision: False means "not locally finite within the caps"."""
    try:
        invariant_subspace(d, dim_cap=dim_cap, deg_cap=deg_cap)
    except NotLocallyFinite:
        return False
    return True


def is_nilpotent_matrix(m):
    n = len(m)
    if n == 0:
        return True
    p = [list(r) for r in m]
    for _ in range(n):
        if _matrix.is_zero(p):
            return True
        p = _matrix.mul(p, m)
    return _matrix.is_zero(p)


def is_locally_nilpotent(d, dim_cap=DEFAULT_DIM_CAP, deg_cap=DEFAULT_DEG_CAP):
    try:
        sub = invariant_subspace(d, dim_cap=dim_cap, deg_cap=deg_cap)
    except NotLocallyFinite:
        return False
    return is_nilpotent_matrix(sub.matrix_rows())


def derivation_from_matrix(sub, m):
    """Derivation whose values on X and Y are read off ``m`` acting on ``sub``."""
    out = []
    for g in (POLY_X, POLY_Y):
        coords = sub.coordinates(g)
        out.append(sub.combine(_matrix.matvec(m, coords)))
    return Derivation(*out)


def endomorphism_from_matrix(sub, m):
    out = []
    for g in (POLY_X, POLY_Y):
        coords = sub.coordinates(g)
        out.append(sub.combine(_matrix.matvec(m, coords)))
    return Endomorphism(*out)


__all__ = [
    "Derivation",
    "Endomorphism",
    "IDENTITY",
    "InvariantSubspace",
    "ONE_POLY",
    "RHO",
    "THETA",
    "ZERO_DERIVATION",
    "bracket",
    "commute_check",
    "compose_word",
    "conjugate_derivation",
    "deriv_apply",
    "elementary_inverse",
    "elementary_shape",
    "endo_compose",
    "invariant_subspace",
    "is_locally_finite",
    "is_locally_nilpotent",
    "make_elementary",
    "word_inverse",
]
