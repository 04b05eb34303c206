from fractions import Fraction

import sympy
from hypothesis import HealthCheck, settings, strategies as st

from idealgen.field import FieldConfig
from idealgen.poly import Polynomial, Ring

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

F7 = FieldConfig.prime(7)


def sym_gens(nvars):
    return sympy.symbols(f"x1:{nvars + 1}")


def to_sympy(f, gens=None):
    gens = gens or sym_gens(f.ring.nvars)
    expr = sympy.Integer(0)
    for m, c in f.terms.items():
        term = sympy.Rational(c.numerator, c.denominator) if f.field.kind == "Q" else sympy.Integer(c)
        for g, e in zip(gens, m):
            term *= g ** e
        expr += term
    return expr


def from_sympy(expr, ring):
    gens = sym_gens(ring.nvars)
    p = sympy.Poly(expr, *gens)
    terms = {}
    for m, c in p.terms():
        c = sympy.Rational(c)
        terms[m] = ring.field(Fraction(int(c.p), int(c.q)))
    return Polynomial(ring, terms)


def monomials(nvars, max_exp=3):
    return st.tuples(*[st.integers(0, max_exp)] * nvars)


def polys(ring, max_terms=4, max_exp=3, coeff=5):
    if ring.field.is_prime_field:
        c = st.integers(0, ring.field.p - 1)
    else:
        c = st.fractions(-coeff, coeff, max_denominator=3)
    return st.dictionaries(monomials(ring.nvars, max_exp), c, max_size=max_terms).map(
        lambda d: Polynomial(ring, d))


R2 = Ring(2)
R3 = Ring(3)
