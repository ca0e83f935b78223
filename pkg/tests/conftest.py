import random

import pytest
import sympy
from gmpy2 import mpq

from tameiso.operators import RHO, THETA, make_elementary
from tameiso.poly2 import Poly2
from tameiso.scalars import Scalar, exp_symbol

DEFAULT_SEED = 20260418

X_, Y_ = sympy.symbols("X Y")


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=DEFAULT_SEED, help="seed for the randomized property tests")


@pytest.fixture
def seed(request):
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed):
    return random.Random(seed)


# -- random values ---------------------------------------------------------------


def rand_q(rng, height=5, nonzero=False):
    while True:
        q = mpq(rng.randint(-height, height), rng.randint(1, height))
        if q or not nonzero:
            return q


def rand_exp_poly_scalar(rng, terms=2):
    out = Scalar.rational(0)
    for _ in range(rng.randint(1, terms)):
        out = out + Scalar.rational(rand_q(rng)) * exp_symbol(mpq(rng.randint(-4, 4), rng.choice((1, 2))))
    return out


def rand_scalar(rng, nonzero=False):
    while True:
        s = rand_exp_poly_scalar(rng)
        if rng.random() < 0.4:
            d = rand_exp_poly_scalar(rng)
            if not d.is_zero():
                s = s / d
        if not nonzero or not s.is_zero():
            return s


def rand_poly(rng, deg=3, terms=4, scalars=False):
    d = {}
    for _ in range(rng.randint(0, terms)):
        i = rng.randint(0, deg)
        j = rng.randint(0, deg - i)
        d[(i, j)] = rand_scalar(rng) if scalars else Scalar.rational(rand_q(rng))
    return Poly2(d)


def rand_elementary(rng, deg=2):
    kind = rng.choice((RHO, THETA))
    unit = Scalar.rational(rand_q(rng, nonzero=True))
    var = (0, 1) if kind == RHO else (1, 0)
    poly = Poly2({(var[0] * k, var[1] * k): Scalar.rational(rand_q(rng)) for k in range(rng.randint(0, deg) + 1)})
    return make_elementary(kind, unit, poly)


# -- sympy oracle converters --------------------------------------------------------


def scalar_to_sympy(s):
    """E(q) becomes exp(q) so sympy can check identities on its own."""

    def ep(e):
        return sum((sympy.Rational(int(c.numerator), int(c.denominator)) * sympy.exp(sympy.Rational(int(q.numerator), int(q.denominator)))
                    for q, c in e.terms), sympy.Integer(0))

    return ep(s.num) / ep(s.den)


def poly_to_sympy(p):
    return sum((scalar_to_sympy(c) * X_**i * Y_**j for (i, j), c in p.terms.items()), sympy.Integer(0))


def sympy_zero(expr):
    return sympy.simplify(sympy.expand(expr)) == 0


def rational_poly_from_sympy(expr):
    poly = sympy.Poly(sympy.expand(expr), X_, Y_)
    return Poly2({m: Scalar.rational(mpq(int(c.p), int(c.q))) for m, c in poly.terms()})


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
