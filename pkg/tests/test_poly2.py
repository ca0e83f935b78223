import pytest

from tameiso.errors import DegreeCapExceeded
from tameiso.poly2 import (
    MINUS_INFINITY,
    POLY_X,
    POLY_Y,
    ZERO_POLY,
    Poly2,
    coefficients,
    degree,
    degree_cap,
    from_coefficients,
    partial,
    poly_arith,
    substitute,
)
from tameiso.scalars import Scalar, exp_symbol

from conftest import X_, Y_, poly_to_sympy, rand_poly, sympy_zero

X, Y = POLY_X, POLY_Y


def test_arith_examples():
    assert poly_arith(X + Y, X - Y, "mul") == X**2 - Y**2
    p = X**3 + Y.scale(2)
    assert poly_arith(p, ZERO_POLY, "add") == p
    assert poly_arith((X + 1) ** 2, X**2 + X.scale(2) + 1, "sub") == ZERO_POLY


def test_partial_examples():
    assert partial(X**3 * Y, "X") == (X**2 * Y).scale(3)
    assert partial(X**4 + 2, "Y") == ZERO_POLY
    assert partial(X.scale(2) + 5, "X") == Poly2.const(2)


def test_substitute_examples():
    assert substitute(X**2, X + 2, Y) == X**2 + X.scale(4) + 4
    assert substitute(X.scale(3) + 1, X, Y) == X.scale(3) + 1
    e1, e2 = exp_symbol(1), exp_symbol(2)
    p = Y.scale(2) + X**2  # amY + X^m with a = 1, m = 2
    got = substitute(p, X.scale(e1), Y.scale(e2) + (X**2).scale(e2))
    assert got == Y.scale(e2 * 2) + (X**2).scale(e2 * 3)


def test_degree_examples():
    assert degree(X**2 * Y**3, "total") == 5
    assert degree(ZERO_POLY, "X") == MINUS_INFINITY
    assert degree(X**4 + X.scale(2) ** 2, "X") == 4


def test_coefficients_examples():
    one, two = Scalar.rational(1), Scalar.rational(2)
    assert coefficients(X + Y.scale(2)) == [((1, 0), one), ((0, 1), two)]
    assert coefficients(ZERO_POLY) == []
    assert coefficients((X + Y) ** 2) == [((2, 0), one), ((1, 1), two), ((0, 2), one)]


def test_coefficients_round_trip(rng):
    for _ in range(100):
        p = rand_poly(rng, scalars=True)
        assert from_coefficients(coefficients(p)) == p


def test_ring_axioms(rng):
    for _ in range(100):
        a, b, c = (rand_poly(rng, scalars=rng.random() < 0.3) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert a - a == ZERO_POLY


def test_mul_against_sympy(rng):
    for _ in range(100):
        a, b = rand_poly(rng), rand_poly(rng)
        assert sympy_zero(poly_to_sympy(a * b) - poly_to_sympy(a) * poly_to_sympy(b))


def test_leibniz(rng):
    for _ in range(100):
        a, b = rand_poly(rng, scalars=True), rand_poly(rng)
        for v in ("X", "Y"):
            assert (a * b).partial(v) == a * b.partial(v) + b * a.partial(v)


def test_substitute_homomorphism(rng):
    for _ in range(100):
        p, q = rand_poly(rng), rand_poly(rng)
        ix, iy = rand_poly(rng, deg=2), rand_poly(rng, deg=2)
        assert substitute(p * q, ix, iy) == substitute(p, ix, iy) * substitute(q, ix, iy)
        assert substitute(p + q, ix, iy) == substitute(p, ix, iy) + substitute(q, ix, iy)


def test_substitute_against_sympy(rng):
    for _ in range(30):
        p, ix, iy = rand_poly(rng), rand_poly(rng, deg=2), rand_poly(rng, deg=2)
        want = poly_to_sympy(p).subs({X_: poly_to_sympy(ix), Y_: poly_to_sympy(iy)}, simultaneous=True)
        assert sympy_zero(poly_to_sympy(substitute(p, ix, iy)) - want)


def test_composed_substitution(rng):
    for _ in range(100):
        p = rand_poly(rng, deg=2)
        ax, ay = rand_poly(rng, deg=2), rand_poly(rng, deg=2)
        bx, by = rand_poly(rng, deg=1), rand_poly(rng, deg=1)
        lhs = substitute(substitute(p, ax, ay), bx, by)
        rhs = substitute(p, substitute(ax, bx, by), substitute(ay, bx, by))
        assert lhs == rhs


def test_canonical_order_and_render():
    p = Y + X**2 + X * Y + 1 + X
    assert [m for m, _ in coefficients(p)] == [(2, 0), (1, 1), (1, 0), (0, 1), (0, 0)]
    assert p.render() == "X^2 + X*Y + X + Y + 1"
    q = X.scale(exp_symbol(1) - 1) - Y.scale(2)
    assert q.render() == "(-1 + E(1))*X - 2*Y"
    assert ZERO_POLY.render() == "0"


def test_degree_cap():
    with degree_cap(5):
        with pytest.raises(DegreeCapExceeded):
            _ = X**6
        with pytest.raises(DegreeCapExceeded):
            substitute(X**3, X**2, Y)
        assert (X**5).total_degree() == 5
    assert (X**6).total_degree() == 6
