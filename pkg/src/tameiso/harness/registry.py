"""Normal forms of locally finite derivations and the expected generator families.

A template is a parameterized elementary endomorphism together with the
target it is claimed to commute with and a provenance note.  Templates are
data: ``verify_form`` instantiates each one at three rational parameter
tuples and checks the results by substitution.
"""

import json
from dataclasses import dataclass
from importlib import resources
from math import gcd

from gmpy2 import mpq

from ..errors import InvalidParams, TameisoError
from ..operators import Derivation
from ..poly2 import POLY_X, POLY_Y, Poly2
from ..scalars import Scalar, as_rational, scalar_roots

TRIANGULAR_F = "TRIANGULAR_F"
FLOW_B = "FLOW_B"
RESONANT_AM = "RESONANT_AM"
LINEAR_DIAG = "LINEAR_DIAG"
LINEAR_JORDAN_Y = "LINEAR_JORDAN_Y"
LINEAR_JORDAN_1 = "LINEAR_JORDAN_1"

FAMILIES = (TRIANGULAR_F, FLOW_B, RESONANT_AM, LINEAR_DIAG, LINEAR_JORDAN_Y, LINEAR_JORDAN_1)

_PARAMS = {
    TRIANGULAR_F: ("f",),
    FLOW_B: ("b",),
    RESONANT_AM: ("a", "m"),
    LINEAR_DIAG: ("a", "b"),
    LINEAR_JORDAN_Y: ("a",),
    LINEAR_JORDAN_1: ("a",),
}


@dataclass(frozen=True)
class NormalForm:
    family: str
    params: tuple  # ((name, value), ...) in declaration order
    derivation: Derivation

    def param(self, name):
        return dict(self.params)[name]

    def label(self):
        parts = []
        for k, v in self.params:
            parts.append(f"{k}={v.render() if isinstance(v, Poly2) else _fmt(v)}")
        return f"{self.family}({', '.join(parts)})"

    def params_json(self):
        return {k: (v.render() if isinstance(v, Poly2) else _fmt(v)) for k, v in self.params}

    @property
    def is_lnd(self):
        return self.family == TRIANGULAR_F or (self.family == FLOW_B and self.param("b") == 0)


def _fmt(q):
    q = mpq(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _rational_param(family, name, value):
    try:
        return as_rational(value)
    except (TypeError, ValueError, TameisoError) as exc:
        raise InvalidParams(f"{family}: parameter {name} must be rational, got {value!r}") from exc


def make_normal_form(family, params):
    """Build the derivation of a normal-form family from its parameters."""
    if family not in _PARAMS:
        raise InvalidParams(f"unknown family {family!r}")
    params = dict(params)
    want = _PARAMS[family]
    missing = [k for k in want if k not in params]
    extra = [k for k in params if k not in want]
    if missing or extra:
        raise InvalidParams(f"{family} takes parameters {', '.join(want)}")
    if family == TRIANGULAR_F:
        f = params["f"]
        if not isinstance(f, Poly2):
            from .parser import parse_poly

            f = parse_poly(str(f))
        if not f.free_of("Y") or not f.is_rational():
            raise InvalidParams("f must be a polynomial in X with rational coefficients")
        if not f:
            raise InvalidParams("f must be nonzero")
        return NormalForm(family, (("f", f),), Derivation(Poly2({}), f))
    vals = {k: _rational_param(family, k, params[k]) for k in want}
    X, Y = POLY_X, POLY_Y
    if family == FLOW_B:
        b = vals["b"]
        d = Derivation(Poly2.const(1), Y.scale(b))
    elif family == RESONANT_AM:
        a, m = vals["a"], vals["m"]
        if a == 0:
            raise InvalidParams("RESONANT_AM requires a != 0")
        if m.denominator != 1 or m < 1:
            raise InvalidParams("RESONANT_AM requires an integer m >= 1")
        m = int(m)
        vals["m"] = mpq(m)
        d = Derivation(X.scale(a), Y.scale(a * m) + X**m)
    elif family == LINEAR_DIAG:
        a, b = vals["a"], vals["b"]
        if a == 0 and b == 0:
            raise InvalidParams("LINEAR_DIAG needs a or b nonzero")
        d = Derivation(X.scale(a), Y.scale(b))
    else:
        a = vals["a"]
        if a == 0:
            raise InvalidParams(f"{family} requires a != 0")
        tail = Y if family == LINEAR_JORDAN_Y else Poly2.const(1)
        d = Derivation(X.scale(a) + tail, Y.scale(a))
    return NormalForm(family, tuple((k, vals[k]) for k in want), d)


def parse_params(text):
    """``"a=2,b=1"`` -> ``{"a": "2", "b": "1"}``."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise InvalidParams(f"bad parameter {item!r}; expected name=value")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


# -- standard instances -------------------------------------------------------


def standard_registry():
    entries = [
        (TRIANGULAR_F, {"f": f}) for f in ("1", "2*X + 3", "X^2", "X^3", "X^4 + 2*X^2 + 1")
    ]
    entries += [(FLOW_B, {"b": b}) for b in (0, 1, 2)]
    entries += [(RESONANT_AM, {"a": a, "m": m}) for a, m in ((1, 1), (2, 3), (1, 4))]
    entries += [(LINEAR_DIAG, {"a": a, "b": b}) for a, b in ((1, 1), (2, 1), (3, 1), (1, 0), (0, 2))]
    entries += [(LINEAR_JORDAN_Y, {"a": a}) for a in (1, 2)]
    entries += [(LINEAR_JORDAN_1, {"a": a}) for a in (1, 2)]
    return [make_normal_form(fam, p) for fam, p in entries]


# -- expected families -----------------------------------------------------------

# Three parameter tuples per template; all entries nonzero so scalings stay units.
SAMPLES = ((mpq(2), mpq(-3), mpq(1, 2)), (mpq(-1, 3), mpq(5), mpq(3)), (mpq(7, 2), mpq(1, 5), mpq(-2)))

D_SIDE = "D"
EXP_SIDE = "exp"


@dataclass(frozen=True)
class Template:
    """An expected family of elementary maps, written as an endomorphism literal.

    ``map`` has placeholders ``{p} {q} {t}`` for the free parameters, ``{z}``
    for a root of unity, and ``{a} {b} {m} {ratio}`` for the form's own
    parameters.  ``printed`` templates are generator families as stated in
    the source; the others are families derived by hand, used as cross-checks.
    """

    key: str
    family: str
    when: str
    side: str
    shape: str
    source: str
    quote: str
    text: str
    map: str
    printed: bool = True
    flag: str = ""
    roots_of_unity: str = ""

    def applies(self, form):
        fam = self.family
        if fam.endswith("*"):
            if not form.family.startswith(fam[:-1]):
                return False
        elif fam != form.family:
            return False
        return _WHEN[self.when](form)

    def members(self, form):
        from .parser import parse_endomorphism

        env = _form_env(form)
        if self.roots_of_unity:
            s = _symmetry_order(form.param("f")) if self.roots_of_unity == "f" else int(form.param("m"))
            roots = scalar_roots(s, Scalar.rational(1)) if s else []
            return [parse_endomorphism(self.map.format(z=f"({z.render()})", **env)) for z in roots]
        out = []
        for p, q, t in SAMPLES:
            text = self.map.format(p=f"({_fmt(p)})", q=f"({_fmt(q)})", t=f"({_fmt(t)})", **env)
            out.append(parse_endomorphism(text))
        return out


def _form_env(form):
    env = {}
    for k, v in form.params:
        if k == "f":
            continue
        env[k] = str(int(v)) if k == "m" else f"({_fmt(v)})"
    if form.family == LINEAR_DIAG and form.param("b") != 0:
        ratio = form.param("a") / form.param("b")
        if ratio.denominator == 1:
            env["ratio"] = str(int(ratio))
    return env


def _symmetry_order(f):
    """Largest s with f = h(X^s); 0 for constants."""
    g = 0
    for (i, _j) in f.terms:
        g = gcd(g, i)
    return g


def _ab(form):
    return form.param("a"), form.param("b")


_WHEN = {
    "always": lambda f: True,
    "f_const": lambda f: f.param("f").total_degree() == 0,
    "f_nonconst": lambda f: f.param("f").total_degree() >= 1,
    "f_deg_le_1": lambda f: f.param("f").total_degree() <= 1,
    "f_deg_ge_2": lambda f: f.param("f").total_degree() >= 2,
    "b_nonzero": lambda f: f.param("b") != 0,
    "b_zero": lambda f: f.param("b") == 0 and (f.family != LINEAR_DIAG or f.param("a") != 0),
    "a_zero": lambda f: f.param("a") == 0,
    "ab_nonzero": lambda f: _ab(f)[0] != 0 and _ab(f)[1] != 0,
    "a_eq_b": lambda f: _ab(f)[0] == _ab(f)[1],
    "a_ne_b": lambda f: 0 not in _ab(f) and _ab(f)[0] != _ab(f)[1],
    "ratio_posint": lambda f: (
        0 not in _ab(f) and (_ab(f)[0] / _ab(f)[1]).denominator == 1 and _ab(f)[0] / _ab(f)[1] > 0
    ),
}


def _load():
    raw = json.loads(resources.files(__package__).joinpath("theorems.json").read_text(encoding="utf-8"))
    flags = raw["flags"]
    out = {}
    for entry in raw["templates"]:
        entry = dict(entry)
        if entry.get("flag") and entry["flag"] not in flags:
            raise ValueError(f"template {entry['key']} names an unknown flag {entry['flag']!r}")
        out[entry["key"]] = Template(**entry)
    return flags, out


FLAGS, TEMPLATES = _load()


def templates_for(form):
    return [t for t in TEMPLATES.values() if t.applies(form)]
