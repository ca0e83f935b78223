"""Jordan-Chevalley decomposition of locally finite derivations.

The derivation is restricted to the invariant subspace generated by X and Y.
The semisimple part of that matrix is ``S = p(M)`` for the polynomial ``p``
with ``p = lam_i  mod (t - lam_i)^{m_i}`` for every eigenvalue (Chinese
remainder theorem); the nilpotent part is ``M - S``.  Only rational spectra
are supported.
"""

from dataclasses import dataclass

from gmpy2 import mpq

from . import _matrix, _upoly
from .errors import IrrationalSpectrum, NonRationalEntries
from .operators import (
    ZERO_DERIVATION,
    Derivation,
    bracket,
    derivation_from_matrix,
    invariant_subspace,
    is_locally_nilpotent,
    is_nilpotent_matrix,
)
from .scalars import Scalar


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: tuple  # ((value: mpq, multiplicity: int), ...) ascending
    charpoly: tuple  # coefficients, low degree first

    def distinct(self):
        return [v for v, _ in self.eigenvalues]


@dataclass(frozen=True)
class JordanPair:
    semisimple: Derivation
    nilpotent: Derivation


def _rational_matrix(m):
    if not _matrix.is_rational(m):
        raise NonRationalEntries("matrix has entries with exponential symbols")
    return [[x.as_rational() for x in row] for row in m]


def charpoly(m):
    """Characteristic polynomial ``det(tI - M)`` of a rational matrix (Faddeev-LeVerrier)."""
    q = _rational_matrix(m) if m and isinstance(m[0][0], Scalar) else m
    n = len(q)
    if n == 0:
        return [mpq(1)]
    coeffs = [mpq(0)] * (n + 1)
    coeffs[n] = mpq(1)
    # M_k = A M_{k-1} + c_{n-k+1} I ;  c_{n-k} = -tr(A M_k) / k
    mk = [[mpq(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        am = [[sum(q[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            am[i][i] += coeffs[n - k + 1]
        mk = am
        amk = [[sum(q[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(amk[i][i] for i in range(n)) / k
    return coeffs


def matrix_spectrum(m):
    cp = charpoly(_rational_matrix(m))
    roots = _upoly.rational_roots(cp)
    if sum(k for _, k in roots) != len(cp) - 1:
        raise IrrationalSpectrum("characteristic polynomial has non-rational roots")
    return SpectrumReport(tuple(roots), tuple(cp))


def semisimple_polynomial(spectrum):
    """The CRT polynomial ``p`` with ``p = lam mod (t-lam)^mult`` for each eigenvalue."""
    factors = [(lam, _upoly.power([-lam, mpq(1)], k)) for lam, k in spectrum.eigenvalues]
    if len(factors) == 1:
        return [factors[0][0]]
    total = _upoly.from_roots([])
    for _, f in factors:
        total = _upoly.mul(total, f)
    p = []
    for lam, f in factors:
        cof = _upoly.divmod_(total, f)[0]
        g, s, _ = _upoly.xgcd(cof, f)
        assert g == [1]
        # e_i = s * cof is 1 mod f and 0 mod the others
        e = _upoly.divmod_(_upoly.mul(s, cof), total)[1]
        p = _upoly.add(p, _upoly.scale(e, lam))
    return _upoly.divmod_(p, total)[1]


def jordan_chevalley_matrix(m):
    """Return ``(S, N)``: S semisimple, N nilpotent, ``S + N = M``, ``SN = NS``."""
    spec = matrix_spectrum(m)
    p = semisimple_polynomial(spec)
    s = _matrix.poly_eval(p, m)
    n = _matrix.sub(m, s)
    return s, n


def diagonalizable_certificate(s, spectrum):
    """``prod (S - lam I) == 0`` over the distinct eigenvalues."""
    n = len(s)
    acc = _matrix.identity(n)
    ident = _matrix.identity(n)
    for lam in spectrum.distinct():
        acc = _matrix.mul(acc, _matrix.sub(s, _matrix.scale(ident, Scalar.rational(lam))))
    return _matrix.is_zero(acc)


@dataclass(frozen=True)
class JordanReport:
    pair: JordanPair
    spectrum: SpectrumReport
    basis: tuple
    sum_ok: bool
    bracket_zero: bool
    nilpotent_ok: bool
    diagonalizable: bool

    @property
    def certified(self):
        return self.sum_ok and self.bracket_zero and self.nilpotent_ok and self.diagonalizable


def jordan_report(d, dim_cap=64, deg_cap=64):
    sub = invariant_subspace(d, dim_cap=dim_cap, deg_cap=deg_cap)
    m = sub.matrix_rows()
    spec = matrix_spectrum(m)
    s = _matrix.poly_eval(semisimple_polynomial(spec), m)
    nmat = _matrix.sub(m, s)
    ds = derivation_from_matrix(sub, s)
    dn = derivation_from_matrix(sub, nmat)
    pair = JordanPair(ds, dn)
    return JordanReport(
        pair=pair,
        spectrum=spec,
        basis=sub.basis,
        sum_ok=(ds + dn) == d,
        bracket_zero=bracket(ds, dn).is_zero(),
        nilpotent_ok=is_nilpotent_matrix(nmat) and is_locally_nilpotent(dn, dim_cap, deg_cap),
        diagonalizable=diagonalizable_certificate(s, spec),
    )


def jordan_decompose(d, dim_cap=64, deg_cap=64):
    if d.is_zero():
        return JordanPair(ZERO_DERIVATION, ZERO_DERIVATION)
    return jordan_report(d, dim_cap, deg_cap).pair
