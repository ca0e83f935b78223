"""Square matrices of Scalars as lists of rows."""

from .scalars import SCALAR_ONE, SCALAR_ZERO


def zeros(n):
    return [[SCALAR_ZERO] * n for _ in range(n)]


def identity(n):
    m = zeros(n)
    for i in range(n):
        m[i][i] = SCALAR_ONE
    return m


def add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(a, c):
    return [[x * c for x in row] for row in a]


def mul(a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = a[i]
        acc = [SCALAR_ZERO] * m
        for t in range(k):
            c = row[t]
            if c.is_zero():
                continue
            brow = b[t]
            for j in range(m):
                if not brow[j].is_zero():
                    acc[j] = acc[j] + c * brow[j]
        out.append(acc)
    return out


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), SCALAR_ZERO) for row in a]


def is_zero(a):
    return all(x.is_zero() for row in a for x in row)


def is_rational(a):
    return all(x.is_rational() for row in a for x in row)


def equal(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def poly_eval(coeffs, m):
    """Evaluate ``sum coeffs[k] m^k`` (rational coefficients, low degree first) by Horner."""
    from .scalars import Scalar

    n = len(m)
    acc = zeros(n)
    ident = identity(n)
    for c in reversed(coeffs):
        acc = add(mul(acc, m), scale(ident, Scalar.rational(c)))
    return acc


def render(a):
    return [[x.render() for x in row] for row in a]
