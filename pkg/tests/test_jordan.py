import pytest
import sympy
from gmpy2 import mpq

from tameiso import _matrix
from tameiso.errors import IrrationalSpectrum, NonRationalEntries, NotLocallyFinite
from tameiso.harness.parser import parse_derivation as D
from tameiso.harness.registry import standard_registry
from tameiso.jordan import (
    charpoly,
    jordan_chevalley_matrix,
    jordan_decompose,
    jordan_report,
    matrix_spectrum,
)
from tameiso.operators import ZERO_DERIVATION, bracket, invariant_subspace, is_locally_nilpotent
from tameiso.poly2 import POLY_X, POLY_Y
from tameiso.scalars import Scalar, exp_symbol

from conftest import rand_q


def mat(rows):
    return [[Scalar.rational(mpq(x)) for x in row] for row in rows]


def to_sympy(m):
    return sympy.Matrix([[sympy.Rational(int(x.as_rational().numerator), int(x.as_rational().denominator)) for x in row]
                         for row in m])


def test_spectrum_examples():
    assert matrix_spectrum(mat([[1, 1], [0, 1]])).eigenvalues == ((1, 2),)
    assert matrix_spectrum(mat([[0, 1], [1, 0]])).eigenvalues == ((-1, 1), (1, 1))
    sub = invariant_subspace(D("dX = 2*X ; dY = 6*Y + X^3"))
    assert set(sub.basis) == {POLY_X, POLY_Y, POLY_X**3}
    assert matrix_spectrum(sub.matrix_rows()).eigenvalues == ((2, 1), (6, 2))


def test_spectrum_errors():
    with pytest.raises(IrrationalSpectrum):
        matrix_spectrum(mat([[0, 2], [1, 0]]))
    with pytest.raises(NonRationalEntries):
        matrix_spectrum([[exp_symbol(1)]])


def test_spectrum_against_sympy(rng):
    for _ in range(100):
        n = rng.randint(1, 4)
        # upper triangular conjugated by a unipotent matrix keeps the spectrum rational
        t = [[mpq(0)] * n for _ in range(n)]
        for i in range(n):
            t[i][i] = mpq(rng.randint(-3, 3))
            for j in range(i + 1, n):
                t[i][j] = rand_q(rng, 3)
        u = sympy.eye(n)
        for i in range(n):
            for j in range(i):
                u[i, j] = rng.randint(-2, 2)
        st = sympy.Matrix(n, n, lambda i, j: sympy.Rational(int(t[i][j].numerator), int(t[i][j].denominator)))
        sm = u * st * u.inv()
        m = [[Scalar.rational(mpq(int(sm[i, j].p), int(sm[i, j].q))) for j in range(n)] for i in range(n)]
        want = sympy.Poly(sm.charpoly().as_expr(), sympy.Symbol("lambda")).all_coeffs()[::-1]
        got = charpoly(m)
        assert [sympy.Rational(int(c.numerator), int(c.denominator)) for c in got] == want
        spec = matrix_spectrum(m)
        assert {sympy.Rational(int(v.numerator), int(v.denominator)): k for v, k in spec.eigenvalues} == sm.eigenvals()


def check_jc(m):
    s, n = jordan_chevalley_matrix(m)
    assert _matrix.equal(_matrix.add(s, n), m)
    assert _matrix.equal(_matrix.mul(s, n), _matrix.mul(n, s))
    assert to_sympy(n) ** len(m) == sympy.zeros(len(m))
    assert to_sympy(s).is_diagonalizable()
    return s, n


def test_jordan_chevalley_examples():
    diag = mat([[2, 0], [0, 5]])
    s, n = check_jc(diag)
    assert _matrix.equal(s, diag) and _matrix.is_zero(n)
    s, n = check_jc(mat([[1, 1], [0, 1]]))
    assert _matrix.equal(s, mat([[1, 0], [0, 1]])) and _matrix.equal(n, mat([[0, 1], [0, 0]]))
    sub = invariant_subspace(D("dX = 2*X ; dY = 6*Y + X^3"))
    s, n = check_jc(sub.matrix_rows())
    assert sorted(s[i][i].as_rational() for i in range(3)) == [2, 6, 6]
    assert sum(1 for row in n for x in row if not x.is_zero()) == 1


def test_jordan_chevalley_against_sympy(rng):
    for _ in range(30):
        n = rng.randint(2, 4)
        blocks = []
        size = 0
        while size < n:
            k = rng.randint(1, n - size)
            blocks.append((rng.randint(-2, 2), k))
            size += k
        jm = sympy.zeros(n)
        i = 0
        for lam, k in blocks:
            for r in range(k):
                jm[i + r, i + r] = lam
                if r + 1 < k:
                    jm[i + r, i + r + 1] = 1
            i += k
        p = sympy.Matrix(n, n, lambda i, j: 1 if i == j else (rng.randint(-1, 1) if i > j else 0))
        sm = p * jm * p.inv()
        m = [[Scalar.rational(mpq(int(sm[i, j].p), int(sm[i, j].q))) for j in range(n)] for i in range(n)]
        s, _ = check_jc(m)
        ds = sympy.diag(*[lam for lam, k in blocks for _ in range(k)])
        assert to_sympy(s) == p * ds * p.inv()


def test_decompose_examples():
    pair = jordan_decompose(D("dX = 2*X ; dY = 6*Y + X^3"))
    assert pair.semisimple == D("dX = 2*X ; dY = 6*Y")
    assert pair.nilpotent == D("dX = 0 ; dY = X^3")
    d = D("dX = 0 ; dY = X^2 + 1")
    assert jordan_decompose(d).semisimple.is_zero() and jordan_decompose(d).nilpotent == d
    d = D("dX = 3*X ; dY = 5*Y")
    assert jordan_decompose(d).semisimple == d and jordan_decompose(d).nilpotent.is_zero()
    assert jordan_decompose(ZERO_DERIVATION).semisimple.is_zero()
    with pytest.raises(NotLocallyFinite):
        jordan_decompose(D("dX = X^2 ; dY = 0"))


def test_registry_certified_and_idempotent():
    for form in standard_registry():
        d = form.derivation
        if d.is_zero():
            continue
        rep = jordan_report(d)
        assert rep.certified, form.label()
        ds, dn = rep.pair.semisimple, rep.pair.nilpotent
        assert ds + dn == d and bracket(ds, dn).is_zero() and is_locally_nilpotent(dn)
        if not ds.is_zero():
            again = jordan_decompose(ds)
            assert again.semisimple == ds and again.nilpotent.is_zero()
        if not dn.is_zero():
            again = jordan_decompose(dn)
            assert again.semisimple.is_zero() and again.nilpotent == dn


def test_uniqueness_probe(rng):
    # commuting (semisimple, nilpotent) pairs taken from the normal forms
    pairs = []
    for _ in range(10):
        kind = rng.randrange(3)
        if kind == 0:
            a, m = rng.randint(1, 3), rng.randint(1, 4)
            c = rng.randint(1, 5)
            pairs.append((D(f"dX = {a}*X ; dY = {a * m}*Y"), D(f"dX = 0 ; dY = {c}*X^{m}")))
        elif kind == 1:
            a = rng.randint(-3, 3) or 1
            pairs.append((D(f"dX = {a}*X ; dY = {a}*Y"), D("dX = Y ; dY = 0")))
        else:
            a, b = rng.randint(1, 4), rng.randint(-3, 3)
            pairs.append((D(f"dX = {a}*X ; dY = {b}*Y"), D("dX = 0 ; dY = 0")))
    for s, n in pairs:
        assert bracket(s, n).is_zero()
        pair = jordan_decompose(s + n)
        assert pair.semisimple == s and pair.nilpotent == n
