"""Sparse bivariate polynomials in X, Y over :class:`~tameiso.scalars.Scalar`.

Monomials are ``(i, j)`` for ``X^i Y^j``.  The canonical order is graded
lexicographic with X > Y, largest monomial first; rendering, coefficient
listings and JSON all follow it.

Multiplication and substitution enforce a total-degree cap (default 64).
The cap is held in a context variable so that ``with degree_cap(n):``
scopes it to one computation without global state.
"""

import contextvars
from contextlib import contextmanager

from .errors import DegreeCapExceeded
from .scalars import SCALAR_ONE, SCALAR_ZERO, Scalar, _coerce

MINUS_INFINITY = float("-inf")
DEFAULT_DEGREE_CAP = 64

_cap = contextvars.ContextVar("tameiso_degree_cap", default=DEFAULT_DEGREE_CAP)


@contextmanager
def degree_cap(n):
    token = _cap.set(int(n))
    try:
        yield
    finally:
        _cap.reset(token)


def current_degree_cap():
    return _cap.get()


def _check_degree(deg):
    cap = _cap.get()
    if deg > cap:
        raise DegreeCapExceeded(deg, cap)


def monomial_key(m):
    """Sort key placing monomials in descending graded-lex order."""
    i, j = m
    return (-(i + j), -i)


def _as_scalar(c):
    if isinstance(c, Scalar):
        return c
    s = _coerce(c)
    if s is None:
        raise TypeError(f"cannot use {c!r} as a coefficient")
    return s


class Poly2:
    """Immutable sparse polynomial ``sum c_ij X^i Y^j``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None, _clean=False):
        if terms is None:
            terms = {}
        elif not _clean:
            terms = {
                (int(i), int(j)): s
                for (i, j), c in terms.items()
                for s in (_as_scalar(c),)
                if not s.is_zero()
            }
        self._terms = terms
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, c):
        s = _as_scalar(c)
        return cls({(0, 0): s}, _clean=True) if not s.is_zero() else ZERO_POLY

    @classmethod
    def monomial(cls, i, j, c=1):
        s = _as_scalar(c)
        return cls({(i, j): s}, _clean=True) if not s.is_zero() else ZERO_POLY

    @classmethod
    def X(cls):
        return POLY_X

    @classmethod
    def Y(cls):
        return POLY_Y

    @classmethod
    def from_univariate(cls, coeffs, var="X"):
        """Build ``sum coeffs[k] * var^k``."""
        out = {}
        for k, c in enumerate(coeffs):
            out[(k, 0) if var == "X" else (0, k)] = c
        return cls(out)

    # -- access -------------------------------------------------------------
    @property
    def terms(self):
        return dict(self._terms)

    def coeff(self, i, j):
        return self._terms.get((i, j), SCALAR_ZERO)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def monomials(self):
        return sorted(self._terms, key=monomial_key)

    def items(self):
        return [(m, self._terms[m]) for m in self.monomials()]

    def total_degree(self):
        if not self._terms:
            return MINUS_INFINITY
        return max(i + j for i, j in self._terms)

    def degree(self, var="total"):
        if not self._terms:
            return MINUS_INFINITY
        if var == "X":
            return max(i for i, _ in self._terms)
        if var == "Y":
            return max(j for _, j in self._terms)
        if var == "total":
            return max(i + j for i, j in self._terms)
        raise ValueError(f"unknown grading {var!r}")

    def is_constant(self):
        return not self._terms or set(self._terms) == {(0, 0)}

    def constant_term(self):
        return self.coeff(0, 0)

    def is_rational(self):
        return all(c.is_rational() for c in self._terms.values())

    def free_of(self, var):
        idx = 0 if var == "X" else 1
        return all(m[idx] == 0 for m in self._terms)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly2):
            other = Poly2.const(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v.is_zero():
                    del out[m]
                else:
                    out[m] = v
        return Poly2(out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly2({m: -c for m, c in self._terms.items()}, _clean=True)

    def __sub__(self, other):
        if not isinstance(other, Poly2):
            other = Poly2.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = _as_scalar(c)
        if c.is_zero():
            return ZERO_POLY
        if c.is_one():
            return self
        return Poly2({m: v * c for m, v in self._terms.items()}, _clean=True)

    def __mul__(self, other):
        if not isinstance(other, Poly2):
            s = _coerce(other) if not isinstance(other, Scalar) else other
            if s is None:
                return NotImplemented
            return self.scale(s)
        if not self._terms or not other._terms:
            return ZERO_POLY
        _check_degree(self.total_degree() + other.total_degree())
        if len(other._terms) > len(self._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out = {}
        for (i2, j2), c2 in b.items():
            for (i1, j1), c1 in a.items():
                m = (i1 + i2, j1 + j2)
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return Poly2({m: v for m, v in out.items() if not v.is_zero()}, _clean=True)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        if self._terms:
            _check_degree(self.total_degree() * n)
        result, base = ONE_POLY, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly2):
            if isinstance(other, (int, Scalar)):
                return self == Poly2.const(other)
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(frozenset(self._terms.items()))
            self._hash = h
        return h

    # -- calculus and substitution -----------------------------------------
    def partial(self, var):
        out = {}
        if var == "X":
            for (i, j), c in self._terms.items():
                if i:
                    out[(i - 1, j)] = c * i
        elif var == "Y":
            for (i, j), c in self._terms.items():
                if j:
                    out[(i, j - 1)] = c * j
        else:
            raise ValueError(f"unknown variable {var!r}")
        return Poly2(out, _clean=True)

    def substitute(self, image_x, image_y):
        """Evaluate at ``X = image_x, Y = image_y`` (a ring homomorphism)."""
        if not self._terms:
            return ZERO_POLY
        px = _PowerCache(image_x)
        py = _PowerCache(image_y)
        # group by power of X so each X-power multiplies one Y-polynomial
        by_i = {}
        for (i, j), c in self._terms.items():
            by_i.setdefault(i, []).append((j, c))
        acc = ZERO_POLY
        for i in sorted(by_i):
            inner = ZERO_POLY
            for j, c in by_i[i]:
                inner = inner + py.get(j).scale(c)
            if inner:
                acc = acc + px.get(i) * inner
        return acc

    def coefficients(self):
        return [(m, self._terms[m]) for m in self.monomials()]

    # -- rendering ----------------------------------------------------------
    def render(self):
        return render_poly(self)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Poly2({self.render()})"


class _PowerCache:
    def __init__(self, base):
        self.base = base
        self.pows = [ONE_POLY, base]

    def get(self, n):
        while len(self.pows) <= n:
            self.pows.append(self.pows[-1] * self.base)
        return self.pows[n]


ZERO_POLY = Poly2({}, _clean=True)
ONE_POLY = Poly2({(0, 0): SCALAR_ONE}, _clean=True)
POLY_X = Poly2({(1, 0): SCALAR_ONE}, _clean=True)
POLY_Y = Poly2({(0, 1): SCALAR_ONE}, _clean=True)


def _monomial_text(i, j):
    parts = []
    if i:
        parts.append("X" if i == 1 else f"X^{i}")
    if j:
        parts.append("Y" if j == 1 else f"Y^{j}")
    return "*".join(parts)


def render_poly(p):
    if p.is_zero():
        return "0"
    out = []
    for idx, ((i, j), c) in enumerate(p.items()):
        mono = _monomial_text(i, j)
        neg = False
        if c.is_single_term():
            e, q = c.num.terms[0]
            if q < 0:
                neg = True
                c = -c
        if c.is_single_term():
            ctext = c.render()
        else:
            ctext = f"({c.render()})"
        if not mono:
            body = ctext
        elif c.is_one():
            body = mono
        else:
            body = f"{ctext}*{mono}"
        if idx == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# -- functional surface ------------------------------------------------------


def poly_arith(lhs, rhs, op):
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    raise ValueError(f"unknown polynomial operation {op!r}")


def partial(p, var):
    return p.partial(var)


def substitute(p, image_x, image_y):
    return p.substitute(image_x, image_y)


def degree(p, var="total"):
    return p.degree(var)


def coefficients(p):
    return p.coefficients()


def from_coefficients(seq):
    return Poly2({m: c for m, c in seq})
