"""Recursive-descent parser for polynomial, derivation and endomorphism text.

Grammar::

    poly     := ['-'] term (('+' | '-') term)*
    term     := factor (('*' | '/') factor)*
    factor   := base ('^' nat)?
    base     := ['-'] nat ('/' nat)? | 'X' | 'Y' | 'E' '(' rational ')' | '(' poly ')'
    rational := ['-'] nat ['/' nat]

    derivation   := 'dX' '=' poly ';' 'dY' '=' poly
    endomorphism := 'X' '->' poly ';' 'Y' '->' poly

Juxtaposition is not multiplication.  Division is only allowed by factors
free of X and Y (it is how non-polynomial scalar coefficients render).
"""

import re

from gmpy2 import mpq

from ..errors import NonRationalLiteral, ParseError, UnknownSymbol
from ..operators import Derivation, Endomorphism
from ..poly2 import POLY_X, POLY_Y, Poly2
from ..scalars import exp_symbol

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<dec>\d+\.\d*|\.\d+)"
    r"|(?P<nat>\d+)"
    r"|(?P<arrow>->)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()=;])"
    r")"
)


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "dec":
            raise NonRationalLiteral(f"decimal literal {value!r}; write rationals as p/q", start)
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.next()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = tok[1] if tok[0] != "end" else "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", tok[2])
        return tok

    def at(self, kind, value=None):
        tok = self.peek()
        return tok[0] == kind and (value is None or tok[1] == value)

    # poly := ['-'] term (('+'|'-') term)*
    def poly(self):
        neg = False
        if self.at("op", "-"):
            self.next()
            neg = True
        acc = self.term()
        if neg:
            acc = -acc
        while self.at("op", "+") or self.at("op", "-"):
            op = self.next()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while self.at("op", "*") or self.at("op", "/"):
            _, op, pos = self.next()
            f = self.factor()
            if op == "*":
                acc = acc * f
            else:
                if not f.is_constant():
                    raise ParseError("can only divide by a scalar", pos)
                if f.is_zero():
                    raise ParseError("division by zero", pos)
                acc = acc.scale(f.constant_term().inverse())
        return acc

    def factor(self):
        b = self.base()
        if self.at("op", "^"):
            self.next()
            tok = self.next()
            if tok[0] != "nat":
                raise ParseError("exponent must be a natural number", tok[2])
            b = b ** int(tok[1])
        return b

    def nat(self):
        tok = self.next()
        if tok[0] != "nat":
            got = tok[1] if tok[0] != "end" else "end of input"
            raise ParseError(f"expected a natural number, got {got!r}", tok[2])
        return int(tok[1])

    def base(self):
        tok = self.peek()
        kind, value, pos = tok
        if kind == "nat":
            self.next()
            q = mpq(int(value))
            if self.at("op", "/") and self.tokens[self.i + 1][0] == "nat":
                self.next()
                den = self.nat()
                if den == 0:
                    raise ParseError("zero denominator", pos)
                q = q / den
            return Poly2.const(q)
        if kind == "name":
            self.next()
            if value == "X":
                return POLY_X
            if value == "Y":
                return POLY_Y
            if value == "E":
                self.expect("op", "(")
                q = self.rational()
                self.expect("op", ")")
                return Poly2.const(exp_symbol(q))
            raise UnknownSymbol(f"unknown symbol {value!r}", pos)
        if kind == "op" and value == "-" and self.tokens[self.i + 1][0] == "nat":
            # signed rational literal, e.g. "2*-3"
            self.next()
            return -self.base()
        if kind == "op" and value == "(":
            self.next()
            p = self.poly()
            self.expect("op", ")")
            return p
        got = value if kind != "end" else "end of input"
        raise ParseError(f"unexpected {got!r}", pos)

    def rational(self):
        sign = 1
        if self.at("op", "-"):
            self.next()
            sign = -1
        q = mpq(self.nat())
        if self.at("op", "/"):
            self.next()
            den = self.nat()
            if den == 0:
                raise ParseError("zero denominator", self.peek()[2])
            q = q / den
        return sign * q

    def finish(self):
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected trailing {tok[1]!r}", tok[2])


def parse_poly(text):
    p = _Parser(text)
    out = p.poly()
    p.finish()
    return out


def parse_derivation(text):
    p = _Parser(text)
    p.expect("name", "dX")
    p.expect("op", "=")
    dx = p.poly()
    p.expect("op", ";")
    p.expect("name", "dY")
    p.expect("op", "=")
    dy = p.poly()
    p.finish()
    return Derivation(dx, dy)


def parse_endomorphism(text):
    p = _Parser(text)
    p.expect("name", "X")
    p.expect("arrow")
    ix = p.poly()
    p.expect("op", ";")
    p.expect("name", "Y")
    p.expect("arrow")
    iy = p.poly()
    p.finish()
    return Endomorphism(ix, iy)


def parse(text, kind="poly"):
    if kind == "poly":
        return parse_poly(text)
    if kind == "derivation":
        return parse_derivation(text)
    if kind == "endomorphism":
        return parse_endomorphism(text)
    raise ValueError(f"unknown kind {kind!r}")


def render(value):
    return value.render()
