import pytest
from gmpy2 import mpq

from tameiso.errors import NonRationalLiteral, ParseError, UnknownSymbol
from tameiso.harness.parser import parse, parse_derivation, parse_endomorphism, parse_poly, render
from tameiso.operators import Derivation, Endomorphism
from tameiso.poly2 import POLY_X, POLY_Y, ZERO_POLY
from tameiso.scalars import Scalar

from conftest import rand_poly

X, Y = POLY_X, POLY_Y


def test_examples():
    assert parse("dX = 0 ; dY = X^2", "derivation") == Derivation(ZERO_POLY, X**2)
    phi = parse("X -> 2*X + Y^2 ; Y -> Y", "endomorphism")
    assert phi == Endomorphism(X.scale(2) + Y**2, Y)
    assert parse("(X + 1)^2 - 2*X") == X**2 + 1


def test_exponent_must_be_natural():
    with pytest.raises(ParseError) as exc:
        parse_derivation("dX = X^(1/2) ; dY = 0")
    assert exc.value.position == 7


def test_literals_and_symbols():
    assert parse_poly("-3/4*X") == X.scale(Scalar.rational(mpq(-3, 4)))
    assert parse_poly("2*-3") == parse_poly("-6")
    assert parse_poly("E(1/2)^2*Y") == parse_poly("E(1)*Y")
    assert parse_poly("(E(1) - 1)/2*X").render() == "(-1/2 + 1/2*E(1))*X"
    with pytest.raises(NonRationalLiteral):
        parse_poly("0.5*X")
    with pytest.raises(UnknownSymbol):
        parse_poly("Z + 1")
    with pytest.raises(ParseError):
        parse_poly("X / Y")
    with pytest.raises(ParseError):
        parse_poly("X +")
    with pytest.raises(ParseError):
        parse_poly("1/0")
    with pytest.raises(ParseError):
        parse_endomorphism("X -> X ; Y -> Y ; Z")


def test_round_trip_poly(rng):
    for _ in range(200):
        p = rand_poly(rng, deg=4, terms=5, scalars=rng.random() < 0.5)
        assert parse_poly(render(p)) == p


def test_round_trip_derivation(rng):
    for _ in range(200):
        d = Derivation(rand_poly(rng, scalars=rng.random() < 0.3), rand_poly(rng, scalars=rng.random() < 0.3))
        assert parse_derivation(d.render()) == d


def test_round_trip_endomorphism(rng):
    for _ in range(200):
        e = Endomorphism(rand_poly(rng, scalars=rng.random() < 0.3), rand_poly(rng, scalars=rng.random() < 0.3))
        assert parse_endomorphism(e.render()) == e
