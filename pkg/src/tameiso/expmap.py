"""The exponential automorphism ``exp(D) = sum D^j / j!``.

Two independent routes:

* Taylor: sum the iterates on X and Y until they vanish (locally nilpotent D).
* Matrix: on the invariant subspace of {X, Y}, split ``M = S + N`` and take
  ``exp(M) = (sum_i E(lam_i) P_i) * (sum_k N^k / k!)`` with the spectral
  projectors ``P_i = prod_{j != i} (S - lam_j) / (lam_i - lam_j)``.
"""

from dataclasses import dataclass
from math import factorial

from . import _matrix
from .errors import NotLocallyNilpotent
from .jordan import matrix_spectrum, semisimple_polynomial
from .operators import (
    IDENTITY,
    Derivation,
    Endomorphism,
    compose_word,
    conjugate_derivation,
    deriv_apply,
    endo_compose,
    endomorphism_from_matrix,
    invariant_subspace,
    is_nilpotent_matrix,
    word_inverse,
)
from .poly2 import POLY_X, POLY_Y, ZERO_POLY
from .scalars import Scalar, exp_symbol


@dataclass(frozen=True)
class ExpCertificate:
    inverse_checked: bool
    lnd_path_used: bool


@dataclass(frozen=True)
class ExpResult:
    automorphism: Endomorphism
    certificate: ExpCertificate


def _taylor(d, p, max_terms):
    out = ZERO_POLY
    term = p
    for j in range(max_terms + 1):
        if not term:
            return out
        out = out + term.scale(Scalar.rational(1) / factorial(j))
        term = deriv_apply(d, term)
    raise NotLocallyNilpotent(f"iterates did not vanish within {max_terms} steps")


def exp_lnd(d, max_terms=64):
    """Finite Taylor sum on the generators."""
    return Endomorphism(_taylor(d, POLY_X, max_terms), _taylor(d, POLY_Y, max_terms))


def exp_matrix(m):
    """``exp`` of a square Scalar matrix with rational spectrum."""
    n = len(m)
    spec = matrix_spectrum(m)
    s = _matrix.poly_eval(semisimple_polynomial(spec), m)
    nil = _matrix.sub(m, s)
    ident = _matrix.identity(n)
    lams = spec.distinct()
    exp_s = _matrix.zeros(n)
    for i, lam in enumerate(lams):
        proj = ident
        for j, mu in enumerate(lams):
            if j == i:
                continue
            factor = _matrix.sub(s, _matrix.scale(ident, Scalar.rational(mu)))
            proj = _matrix.scale(_matrix.mul(proj, factor), Scalar.rational(1) / Scalar.rational(lam - mu))
        exp_s = _matrix.add(exp_s, _matrix.scale(proj, exp_symbol(lam)))
    exp_n = ident
    power = ident
    for k in range(1, n + 1):
        power = _matrix.mul(power, nil)
        if _matrix.is_zero(power):
            break
        exp_n = _matrix.add(exp_n, _matrix.scale(power, Scalar.rational(1) / factorial(k)))
    return _matrix.mul(exp_s, exp_n)


def exp_via_matrix(d, dim_cap=64, deg_cap=64):
    sub = invariant_subspace(d, dim_cap=dim_cap, deg_cap=deg_cap)
    return endomorphism_from_matrix(sub, exp_matrix(sub.matrix_rows()))


def exp_derivation(d, dim_cap=64, deg_cap=64, check_inverse=True):
    """exp(D) for a locally finite D with rational spectrum."""
    if d.is_zero():
        return ExpResult(IDENTITY, ExpCertificate(check_inverse, True))
    sub = invariant_subspace(d, dim_cap=dim_cap, deg_cap=deg_cap)
    m = sub.matrix_rows()
    lnd = is_nilpotent_matrix(m)
    if lnd:
        auto = exp_lnd(d, max_terms=sub.dim + 1)
        inv = exp_lnd(-d, max_terms=sub.dim + 1) if check_inverse else None
    else:
        auto = endomorphism_from_matrix(sub, exp_matrix(m))
        inv = exp_via_matrix(-d, dim_cap, deg_cap) if check_inverse else None
    checked = False
    if check_inverse:
        checked = endo_compose(auto, inv).is_identity() and endo_compose(inv, auto).is_identity()
    return ExpResult(auto, ExpCertificate(checked, lnd))


def exp_auto(d, **caps):
    return exp_derivation(d, check_inverse=False, **caps).automorphism


def conjugation_identity_check(word, d, dim_cap=64, deg_cap=64):
    """Check ``phi exp(D) phi^{-1} == exp(phi D phi^{-1})`` for ``phi = word[0] o word[1] o ...``."""
    phi = compose_word(word)
    phi_inv = compose_word(word_inverse(word))
    lhs = endo_compose(endo_compose(phi, exp_auto(d, dim_cap=dim_cap, deg_cap=deg_cap)), phi_inv)
    conj = conjugate_derivation(phi, phi_inv, d)
    rhs = exp_auto(conj, dim_cap=dim_cap, deg_cap=deg_cap)
    return lhs == rhs


__all__ = [
    "Derivation",
    "ExpCertificate",
    "ExpResult",
    "conjugation_identity_check",
    "exp_auto",
    "exp_derivation",
    "exp_lnd",
    "exp_matrix",
    "exp_via_matrix",
]
