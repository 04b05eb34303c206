"""Bounded exhaustive irreducibility checks for small polynomials.

Over Q, polynomials in a single variable are handled by a rational-root
test followed by Kronecker's method: any integer factor h of degree <= k is
determined by its values at k + 1 integer points, and each value must
divide the value of f there. Candidates are also pruned by the Mignotte
bound |h_i| <= C(k, i) * ||f||_2. Over F_p, polynomials in at most two
variables are handled by trying every normalised candidate factor of
degree <= deg(f) / 2.

Anything else, or any search larger than ``budget`` candidates, comes back
as ``unknown``.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .poly import DEGREVLEX, Polynomial, monomials_up_to, remainder

IRREDUCIBLE, REDUCIBLE, UNKNOWN = "irreducible", "reducible", "unknown"

DEFAULT_BUDGET = 200_000


class NotApplicable(ValueError):
    """Irreducibility is not defined for zero or constant polynomials."""


@dataclass
class OracleResult:
    verdict: str
    factor: Polynomial | None = None
    cofactor: Polynomial | None = None
    transcript: dict = field(default_factory=dict)


def divisors(n):
    n = abs(n)
    if n == 0:
        raise ValueError("0 has infinitely many divisors")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


# -- univariate helpers on coefficient lists (low degree first) -------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _udivmod(a, b):
    a = [Fraction(x) for x in a]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = Fraction(b[-1])
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for i, bi in enumerate(b):
                a[k + i] -= c * bi
    return _trim(q), _trim(a[: len(b) - 1])


def _ueval(a, t):
    v = 0
    for c in reversed(a):
        v = v * t + c
    return v


def _lagrange_basis(points):
    """Coefficient lists L_i with L_i(points[j]) = [i == j]."""
    basis = []
    for i, ti in enumerate(points):
        poly = [Fraction(1)]
        denom = 1
        for j, tj in enumerate(points):
            if j == i:
                continue
            poly = [Fraction(0)] + poly
            for k in range(len(poly) - 1):
                poly[k] -= tj * poly[k + 1]
            denom *= ti - tj
        basis.append([c / denom for c in poly])
    return basis


def primitive_integer_coeffs(coeffs):
    """Scale a rational coefficient list to coprime integers with positive lead."""
    den = 1
    for c in coeffs:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _pick_points(f, count, max_abs=10**12):
    cands = []
    for t in range(-(2 * count + 2), 2 * count + 3):
        v = _ueval(f, t)
        if v and abs(v) <= max_abs:
            cands.append((len(divisors(v)), abs(t), t, v))
    cands.sort()
    if len(cands) < count:
        return None
    return [(t, v) for _, _, t, v in cands[:count]]


def _kronecker(f, k, budget):
    """Search integer factors of degree 1..k of the primitive integer list f."""
    pts = _pick_points(f, k + 1)
    if pts is None:
        return UNKNOWN, None, {"reason": "no usable evaluation points"}
    norm2 = math.isqrt(sum(c * c for c in f)) + 1
    bounds = [math.comb(k, i) * norm2 for i in range(k + 1)]
    choices = []
    for idx, (_, v) in enumerate(pts):
        ds = divisors(v)
        # h and -h are both factors: fix the sign at the first point
        choices.append(ds if idx == 0 else ds + [-d for d in ds])
    total = math.prod(len(c) for c in choices)
    transcript = {
        "method": "kronecker",
        "points": [t for t, _ in pts],
        "values": [v for _, v in pts],
        "max_factor_degree": k,
        "mignotte_bound": norm2,
        "candidates": total,
    }
    if total > budget:
        transcript["reason"] = f"{total} candidates exceed budget {budget}"
        return UNKNOWN, None, transcript
    basis = _lagrange_basis([t for t, _ in pts])
    lead = f[-1]
    tested = 0
    for values in product(*choices):
        coeffs = [sum(v * b[i] for v, b in zip(values, basis)) for i in range(k + 1)]
        if any(c.denominator != 1 for c in coeffs):
            continue
        h = _trim([int(c) for c in coeffs])
        if len(h) < 2:
            continue
        if any(abs(c) > b for c, b in zip(h, bounds)) or lead % h[-1]:
            continue
        tested += 1
        q, r = _udivmod(f, h)
        if not r:
            transcript["divisions"] = tested
            return REDUCIBLE, h, transcript
    transcript["divisions"] = tested
    return IRREDUCIBLE, None, transcript


def _univariate_q(f, var, budget):
    ring = f.ring
    coeffs = primitive_integer_coeffs(f.univariate_coeffs(var))
    deg = len(coeffs) - 1

    def result(verdict, h=None, transcript=None):
        if h is None:
            return OracleResult(verdict, transcript=transcript or {})
        hp = ring.from_univariate(h, var)
        return OracleResult(verdict, hp, f.exact_div(hp), transcript or {})

    if deg == 1:
        return result(IRREDUCIBLE, transcript={"method": "degree one"})
    if coeffs[0] == 0:
        return result(REDUCIBLE, [0, 1], {"method": "zero constant term"})
    roots_tried = 0
    for p in divisors(coeffs[0]):
        for q in divisors(coeffs[-1]):
            for num in (p, -p):
                roots_tried += 1
                if math.gcd(p, q) == 1 and _ueval(coeffs, Fraction(num, q)) == 0:
                    return result(REDUCIBLE, [-num, q], {"method": "rational root", "root": f"{num}/{q}"})
    if deg <= 3:
        return result(IRREDUCIBLE, transcript={"method": "rational root test", "roots_tried": roots_tried})
    verdict, h, transcript = _kronecker(coeffs, deg // 2, budget)
    transcript["roots_tried"] = roots_tried
    return result(verdict, h, transcript)


def _prime_field(f, variables, budget):
    ring = f.ring
    p = ring.field.p
    half = f.degree() // 2
    order = DEGREVLEX
    key = order.key
    monos = []
    for e in monomials_up_to(len(variables), half):
        full = [0] * ring.nvars
        for v, x in zip(variables, e):
            full[v] = x
        monos.append(tuple(full))
    monos.sort(key=key)
    total = sum(p ** k for k, m in enumerate(monos) if any(m))
    transcript = {"method": "F_p enumeration", "max_factor_degree": half, "candidates": total}
    if total > budget:
        transcript["reason"] = f"{total} candidates exceed budget {budget}"
        return OracleResult(UNKNOWN, transcript=transcript)
    one = ring.field.one()
    tested = 0
    for k, lead in enumerate(monos):
        if not any(lead):
            continue
        lower = monos[:k]
        for coeffs in product(range(p), repeat=len(lower)):
            terms = {m: c for m, c in zip(lower, coeffs) if c}
            terms[lead] = one
            h = Polynomial(ring, terms, _clean=True)
            tested += 1
            if not remainder(f, [h], order):
                transcript["tested"] = tested
                return OracleResult(REDUCIBLE, h, f.exact_div(h, order), transcript)
    transcript["tested"] = tested
    return OracleResult(IRREDUCIBLE, transcript=transcript)


def irreducible_oracle(f, budget=DEFAULT_BUDGET):
    """Decide irreducibility of f where a bounded exhaustive search can.

    Returns an :class:`OracleResult`; a ``reducible`` verdict carries a
    non-constant factor with ``factor * cofactor == f``.
    """
    if not f or f.is_constant():
        raise NotApplicable("zero and constants are neither irreducible nor reducible")
    variables = f.variables()
    if f.field.is_prime_field:
        if len(variables) <= 2:
            return _prime_field(f, variables, budget)
        return OracleResult(UNKNOWN, transcript={"reason": "more than two variables over F_p"})
    if len(variables) == 1:
        return _univariate_q(f, variables[0], budget)
    return OracleResult(UNKNOWN, transcript={"reason": "multivariate over Q"})
