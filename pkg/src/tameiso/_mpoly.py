"""Sparse multivariate polynomials over Scalar, keyed by exponent tuples.

Used by the commutant solver, where an elementary map with unknown
coefficients is pushed through a commutation identity.  Variables 0 and 1
are X and Y when the polynomial comes from :func:`lift`; the remaining
variables are the unknowns.
"""

from .poly2 import _check_degree
from .scalars import SCALAR_ONE, SCALAR_ZERO


class MPoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = terms if terms is not None else {}

    @classmethod
    def const(cls, nvars, c):
        if c.is_zero():
            return cls(nvars)
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars, k, c=SCALAR_ONE):
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, {tuple(e): c})

    def copy(self):
        return MPoly(self.nvars, dict(self.terms))

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v.is_zero():
                    del out[e]
                else:
                    out[e] = v
        return MPoly(self.nvars, out)

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if c.is_zero():
            return MPoly(self.nvars)
        return MPoly(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not self.terms or not other.terms:
            return MPoly(self.nvars)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return MPoly(self.nvars, {e: v for e, v in out.items() if not v.is_zero()})

    def xy_degree(self):
        return max((e[0] + e[1] for e in self.terms), default=0)

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def variables(self):
        seen = set()
        for e in self.terms:
            for k, x in enumerate(e):
                if x:
                    seen.add(k)
        return sorted(seen)

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant(self):
        return self.terms.get((0,) * self.nvars, SCALAR_ZERO)

    def partial(self, k):
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                out[tuple(ne)] = c * e[k]
        return MPoly(self.nvars, out)

    def min_power(self, k):
        return min((e[k] for e in self.terms), default=0)

    def divide_power(self, k, n):
        if n == 0:
            return self
        out = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[k] -= n
            out[tuple(ne)] = c
        return MPoly(self.nvars, out)

    def substitute(self, k, value, cache=None):
        """Replace variable ``k`` by the MPoly ``value``."""
        powers = cache if cache is not None else [MPoly.const(self.nvars, SCALAR_ONE)]
        out = MPoly(self.nvars)
        groups = {}
        for e, c in self.terms.items():
            p = e[k]
            ne = list(e)
            ne[k] = 0
            groups.setdefault(p, {})[tuple(ne)] = c
        for p, terms in groups.items():
            rest = MPoly(self.nvars, terms)
            if p == 0:
                out = out + rest
                continue
            while len(powers) <= p:
                powers.append(powers[-1] * value)
            out = out + rest * powers[p]
        return out

    def coefficient_groups(self, keep):
        """Split into ``{exps over keep: MPoly in the other variables}``."""
        out = {}
        for e, c in self.terms.items():
            key = tuple(e[k] for k in keep)
            ne = list(e)
            for k in keep:
                ne[k] = 0
            out.setdefault(key, {})[tuple(ne)] = c
        return {key: MPoly(self.nvars, t) for key, t in out.items()}

    def evaluate(self, values):
        """Full evaluation; ``values[k]`` is a Scalar for every variable that occurs."""
        acc = SCALAR_ZERO
        for e, c in self.terms.items():
            t = c
            for k, x in enumerate(e):
                if x:
                    t = t * values[k] ** x
            acc = acc + t
        return acc

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.terms == other.terms

    def __repr__(self):
        return f"MPoly({self.terms!r})"


class PowerCache:
    def __init__(self, base):
        self.base = base
        self.pows = [MPoly.const(base.nvars, SCALAR_ONE), base]

    def get(self, n):
        while len(self.pows) <= n:
            _check_degree((len(self.pows)) * self.base.xy_degree())
            self.pows.append(self.pows[-1] * self.base)
        return self.pows[n]


def lift(p, nvars):
    """Embed a Poly2 as an MPoly whose first two variables are X and Y."""
    pad = (0,) * (nvars - 2)
    return MPoly(nvars, {(i, j) + pad: c for (i, j), c in p.terms.items()})


def subs_xy(p, image_x, image_y, cx=None, cy=None):
    """Evaluate ``p`` (an MPoly in X, Y and unknowns) at ``X = image_x, Y = image_y``."""
    cx = cx or PowerCache(image_x)
    cy = cy or PowerCache(image_y)
    nv = p.nvars
    groups = {}
    for e, c in p.terms.items():
        groups.setdefault((e[0], e[1]), {})[(0, 0) + e[2:]] = c
    out = MPoly(nv)
    for (i, j), terms in groups.items():
        coeff = MPoly(nv, terms)
        piece = coeff * cx.get(i) if i else coeff
        if j:
            piece = piece * cy.get(j)
        out = out + piece
    return out
