"""Exact coefficient field: Q extended by formal exponentials E(q), q in Q.

An :class:`ExpPolynomial` is a finite sum ``sum c_q E(q)`` (a group-ring
element of the additive group Q).  A :class:`Scalar` is a quotient of two
of them.  The symbols obey ``E(p) E(q) = E(p+q)`` and ``E(0) = 1`` and are
otherwise independent, so ``E(p) - E(q)`` vanishes only when ``p == q``.

Normalization: a quotient is reduced by the gcd of numerator and
denominator after rescaling all exponents by a common denominator ``N`` (so
both become Laurent polynomials in ``t = E(1/N)``); the denominator is then
shifted to lowest exponent 0 and scaled to lowest coefficient 1.  Equality
of scalars is therefore structural.
"""

from math import lcm

import gmpy2
from gmpy2 import mpq

from . import _upoly
from .errors import DivisionByZero

__all__ = [
    "ExpPolynomial",
    "Scalar",
    "as_rational",
    "exp_symbol",
    "scalar_arith",
    "scalar_from_rational",
    "scalar_is_zero",
    "scalar_roots",
    "ZERO",
    "ONE",
]

_Q0 = mpq(0)
_Q1 = mpq(1)


def as_rational(value):
    """Coerce an int, Fraction, mpq or ``"p/q"`` string to ``mpq``."""
    if isinstance(value, str):
        return mpq(value.strip())
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return mpq(int(value.numerator), int(value.denominator))
    raise TypeError(f"not a rational: {value!r}")


def _fmt_q(q):
    return str(q)


class ExpPolynomial:
    """Finite sum of rational multiples of formal exponentials.

    ``terms`` is a tuple of ``(exponent, coefficient)`` pairs with distinct
    exponents in ascending order and no zero coefficients.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        self.terms = terms

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(sorted((e, c) for e, c in d.items() if c != 0)))

    @classmethod
    def constant(cls, c):
        c = as_rational(c)
        return cls(((_Q0, c),) if c != 0 else ())

    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    def min_exponent(self):
        return self.terms[0][0]

    def __eq__(self, other):
        return isinstance(other, ExpPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __add__(self, other):
        if not other.terms:
            return self
        if not self.terms:
            return other
        d = dict(self.terms)
        for e, c in other.terms:
            d[e] = d.get(e, _Q0) + c
        return ExpPolynomial.from_dict(d)

    def __neg__(self):
        return ExpPolynomial(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self.terms or not other.terms:
            return ExpPolynomial()
        if len(other.terms) == 1:
            f, b = other.terms[0]
            return ExpPolynomial(tuple((e + f, c * b) for e, c in self.terms))
        if len(self.terms) == 1:
            return other * self
        d = {}
        for e, c in self.terms:
            for f, b in other.terms:
                k = e + f
                d[k] = d.get(k, _Q0) + c * b
        return ExpPolynomial.from_dict(d)

    def scale(self, c, shift=_Q0):
        """Multiply by the monomial ``c * E(shift)``."""
        return ExpPolynomial(tuple((e + shift, x * c) for e, x in self.terms))

    def render(self):
        if not self.terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self.terms):
            neg = c < 0
            a = -c if neg else c
            if e == 0:
                body = _fmt_q(a)
            elif a == 1:
                body = f"E({_fmt_q(e)})"
            else:
                body = f"{_fmt_q(a)}*E({_fmt_q(e)})"
            if i == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"ExpPolynomial({self.render()})"


_EP_ONE = ExpPolynomial(((_Q0, _Q1),))
_EP_ZERO = ExpPolynomial()


def _to_upoly(ep, base, n):
    """Coefficient list of ``E(-base) * ep`` as a polynomial in ``t = E(1/n)``."""
    out = {}
    for e, c in ep.terms:
        k = (e - base) * n
        out[int(k)] = c
    top = max(out)
    return [out.get(i, _Q0) for i in range(top + 1)]


def _from_upoly(coeffs, base, n):
    return ExpPolynomial(tuple((base + mpq(i, n), c) for i, c in enumerate(coeffs) if c != 0))


def _normalize(num, den):
    """Canonical ``(num, den)`` for the quotient ``num/den`` (``den`` nonzero)."""
    if not num.terms:
        return _EP_ZERO, _EP_ONE
    if len(den.terms) == 1:
        e, c = den.terms[0]
        return num.scale(1 / c, -e), _EP_ONE
    n = 1
    for e, _ in num.terms + den.terms:
        n = lcm(n, int(e.denominator))
    bn, bd = num.min_exponent(), den.min_exponent()
    pn = _to_upoly(num, bn, n)
    pd = _to_upoly(den, bd, n)
    g = _upoly.gcd(pn, pd)
    if len(g) > 1:
        pn = _upoly.divmod_(pn, g)[0]
        pd = _upoly.divmod_(pd, g)[0]
    c0 = pd[0]
    if c0 != 1:
        pn = [x / c0 for x in pn]
        pd = [x / c0 for x in pd]
    # numerator may have acquired a zero constant term only if g had one; it cannot,
    # since pd[0] != 0 forces g[0] != 0.
    return _from_upoly(pn, bn - bd, n), _from_upoly(pd, _Q0, n)


class Scalar:
    """Element of Q(E): an exact quotient of two :class:`ExpPolynomial` values.

    Instances are immutable and always normalized.  Arithmetic with ``int``
    and rational operands is supported.
    """

    __slots__ = ("num", "den", "_q", "_hash")

    def __init__(self, num, den=_EP_ONE, _normalized=False):
        if not _normalized:
            if den.is_zero():
                raise DivisionByZero("scalar with zero denominator")
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        q = None
        if den is _EP_ONE or den.terms == _EP_ONE.terms:
            t = num.terms
            if not t:
                q = _Q0
            elif len(t) == 1 and t[0][0] == 0:
                q = t[0][1]
        self._q = q
        self._hash = None

    @classmethod
    def rational(cls, q):
        q = as_rational(q) if not isinstance(q, type(_Q0)) else q
        return _rat(q)

    # -- predicates ---------------------------------------------------------
    def is_zero(self):
        return not self.num.terms

    def is_one(self):
        return self._q is not None and self._q == 1

    def is_rational(self):
        return self._q is not None

    def as_rational(self):
        if self._q is None:
            raise ValueError(f"scalar {self.render()} is not rational")
        return self._q

    def is_monomial(self):
        """True for ``c * E(q)`` (including nonzero rationals)."""
        return self.den.terms == _EP_ONE.terms and len(self.num.terms) == 1

    def is_laurent(self):
        return self.den.terms == _EP_ONE.terms

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Scalar):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        a, b = self._q, other._q
        if a is not None and b is not None:
            return _rat(a + b)
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        if self.den == other.den:
            num = self.num + other.num
            if self.den.terms == _EP_ONE.terms:
                return Scalar(num, _EP_ONE, _normalized=True)
            return Scalar(num, self.den)
        return Scalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        if self._q is not None:
            return _rat(-self._q)
        return Scalar(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        if self._q is not None and other._q is not None:
            return _rat(self._q - other._q)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        a, b = self._q, other._q
        if a is not None and b is not None:
            return _rat(a * b)
        if not self.num.terms or not other.num.terms:
            return SCALAR_ZERO
        if a is not None:
            return Scalar(other.num.scale(a), other.den, _normalized=True)
        if b is not None:
            return Scalar(self.num.scale(b), self.den, _normalized=True)
        if self.den.terms == _EP_ONE.terms and other.den.terms == _EP_ONE.terms:
            return Scalar(self.num * other.num, _EP_ONE, _normalized=True)
        return Scalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num.terms:
            raise DivisionByZero("inverse of the zero scalar")
        if self._q is not None:
            return _rat(1 / self._q)
        return Scalar(self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        if not other.num.terms:
            raise DivisionByZero("division by the zero scalar")
        if self._q is not None and other._q is not None:
            return _rat(self._q / other._q)
        if other._q is not None:
            return Scalar(self.num.scale(1 / other._q), self.den, _normalized=True)
        return Scalar(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if self._q is not None:
            return _rat(self._q**n)
        result, base = SCALAR_ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Scalar):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        if self._q is not None or other._q is not None:
            return self._q == other._q and self._q is not None
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.num.terms, self.den.terms))
            self._hash = h
        return h

    def __bool__(self):
        return bool(self.num.terms)

    # -- rendering ----------------------------------------------------------
    def render(self):
        if self.den.terms == _EP_ONE.terms:
            return self.num.render()
        return f"({self.num.render()})/({self.den.render()})"

    def is_single_term(self):
        return self.is_laurent() and len(self.num.terms) <= 1

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Scalar({self.render()})"


def _rat(q):
    if q == 0:
        return SCALAR_ZERO
    return Scalar(ExpPolynomial(((_Q0, q),)), _EP_ONE, _normalized=True)


_INT_TYPES = (int, type(_Q0), type(gmpy2.mpz(0)))


def _coerce(value):
    if isinstance(value, _INT_TYPES):
        return _rat(mpq(value))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return _rat(as_rational(value))
    return None


SCALAR_ZERO = Scalar(_EP_ZERO, _EP_ONE, _normalized=True)
SCALAR_ONE = Scalar(_EP_ONE, _EP_ONE, _normalized=True)
ZERO = SCALAR_ZERO
ONE = SCALAR_ONE


def scalar_from_rational(q):
    return _rat(as_rational(q))


def exp_symbol(q):
    """The formal exponential ``E(q)``."""
    q = as_rational(q)
    return Scalar(ExpPolynomial(((q, _Q1),)), _EP_ONE, _normalized=True)


def scalar_arith(lhs, rhs, op):
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise ValueError(f"unknown scalar operation {op!r}")


def scalar_is_zero(s):
    return s.is_zero()


def _rational_root(q, s):
    """Rational ``r >= 0`` with ``r**s == q`` for ``q >= 0``, or None."""
    rn, exact_n = gmpy2.iroot(gmpy2.mpz(q.numerator), s)
    rd, exact_d = gmpy2.iroot(gmpy2.mpz(q.denominator), s)
    if exact_n and exact_d:
        return mpq(rn, rd)
    return None


def scalar_roots(s, c):
    """All ``x`` in the field with ``x**s == c``, sorted by rendering.

    Only monomial ``c`` (a rational times one exponential) can have roots
    here besides the trivial ``c == 0``; anything else returns ``[]``.
    """
    if s < 1:
        raise ValueError("root index must be positive")
    if c.is_zero():
        return [SCALAR_ZERO]
    if not c.is_monomial():
        return []
    e, k = c.num.terms[0]
    sym = exp_symbol(e / s)
    roots = []
    if k > 0:
        r = _rational_root(k, s)
        if r is not None:
            roots.append(sym * _rat(r))
            if s % 2 == 0:
                roots.append(sym * _rat(-r))
    elif s % 2 == 1:
        r = _rational_root(-k, s)
        if r is not None:
            roots.append(sym * _rat(-r))
    return sorted(roots, key=lambda x: x.render())
