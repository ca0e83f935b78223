"""Dense univariate polynomials over Q.

A polynomial is a list of ``mpq`` coefficients, lowest degree first, with no
trailing zeros; the zero polynomial is ``[]``.  These helpers back the scalar
normalization (gcd of Laurent polynomials) and the Chinese-remainder
construction of the semisimple part of a matrix.
"""

from gmpy2 import mpq

ZERO = mpq(0)
ONE = mpq(1)


def trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def add(p, q):
    if len(p) < len(q):
        p, q = q, p
    r = list(p)
    for i, c in enumerate(q):
        r[i] += c
    return trim(r)


def sub(p, q):
    return add(p, [-c for c in q])


def scale(p, c):
    if c == 0:
        return []
    return [c * x for x in p]


def mul(p, q):
    if not p or not q:
        return []
    r = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            r[i + j] += a * b
    return trim(r)


def power(p, n):
    r = [ONE]
    for _ in range(n):
        r = mul(r, p)
    return r


def divmod_(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    lead = q[-1]
    if len(r) <= dq:
        return [], trim(r)
    quot = [ZERO] * (len(r) - dq)
    for k in range(len(r) - 1, dq - 1, -1):
        c = r[k]
        if c == 0:
            continue
        c = c / lead
        quot[k - dq] = c
        for j in range(dq + 1):
            r[k - dq + j] -= c * q[j]
    return trim(quot), trim(r[:dq])


def monic(p):
    if not p:
        return []
    lead = p[-1]
    return [c / lead for c in p]


def gcd(p, q):
    """Monic gcd (zero if both inputs vanish)."""
    while q:
        p, q = q, divmod_(p, q)[1]
    return monic(p)


def xgcd(p, q):
    """Return ``(g, s, t)`` with ``s*p + t*q = g`` and ``g`` monic."""
    r0, r1 = list(p), list(q)
    s0, s1 = [ONE], []
    t0, t1 = [], [ONE]
    while r1:
        quo, rem = divmod_(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, sub(s0, mul(quo, s1))
        t0, t1 = t1, sub(t0, mul(quo, t1))
    if not r0:
        return [], [], []
    lead = r0[-1]
    return monic(r0), scale(s0, 1 / lead), scale(t0, 1 / lead)


def evaluate(p, x):
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p):
    return trim([p[i] * i for i in range(1, len(p))])


def from_roots(roots):
    r = [ONE]
    for x in roots:
        r = mul(r, [-x, ONE])
    return r


def _divisors(n):
    n = abs(int(n))
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(p):
    """Rational roots of ``p`` with multiplicities, as ``[(root, mult), ...]``.

    Roots are sorted ascending.  Irreducible factors of degree >= 2 are simply
    not reported; callers compare multiplicities against the degree.
    """
    p = trim(list(p))
    if not p:
        raise ValueError("the zero polynomial has every root")
    found = []
    k = 0
    while k < len(p) and p[k] == 0:
        k += 1
    if k:
        found.append((ZERO, k))
        p = p[k:]
    if len(p) <= 1:
        return found
    # clear denominators
    from math import lcm

    den = 1
    for c in p:
        den = lcm(den, int(c.denominator))
    ints = [int(c * den) for c in p]
    cands = set()
    for a in _divisors(ints[0]):
        for b in _divisors(ints[-1]):
            cands.add(mpq(a, b))
            cands.add(mpq(-a, b))
    for x in sorted(cands):
        m = 0
        while len(p) > 1 and evaluate(p, x) == 0:
            p = divmod_(p, [-x, ONE])[0]
            m += 1
        if m:
            found.append((x, m))
    found.sort()
    return found
