"""Sparse multivariate polynomials over Q or F_p.

A monomial is a tuple of exponents ``(a1, ..., ar)``. A polynomial is an
immutable map from monomials to nonzero coefficients. Terms are kept in an
unordered dict; an ordering is only applied when a leading term is asked
for or when the polynomial is rendered.

Text grammar (parsed by :func:`parse_poly`)::

    poly   := ["+" | "-"] term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := number ["/" number] | "x" index ["^" number]

e.g. ``"3/2*x1^2*x3 - x2 + 7"``. Rendering elides unit coefficients and
unit exponents, writes rationals as ``p/q`` and F_p elements as their least
non-negative residue.
"""

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from itertools import combinations_with_replacement

from .field import QQ, FieldConfig

NEG_INF = float("-inf")  # degree of the zero polynomial


class RingMismatch(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message, text=None, pos=None):
        if text is not None and pos is not None:
            message = f"{message} at column {pos + 1} in {text!r}"
        super().__init__(message)
        self.pos = pos


# ---------------------------------------------------------------------------
# monomials
# ---------------------------------------------------------------------------

def mono_mul(a, b):
    return tuple(map(operator.add, a, b))


def mono_div(a, b):
    """Return a / b, assuming b divides a."""
    return tuple(map(operator.sub, a, b))


def mono_divides(b, a):
    """True if the monomial b divides a."""
    return all(x <= y for x, y in zip(b, a))


def mono_lcm(a, b):
    return tuple(map(max, a, b))


def mono_degree(a):
    return sum(a)


def monomials_up_to(nvars, degree):
    """All exponent tuples of total degree <= ``degree``, by increasing degree.

    Their number is C(nvars + degree, degree).
    """
    out = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def count_monomials_up_to(nvars, degree):
    return math.comb(nvars + degree, degree)


# ---------------------------------------------------------------------------
# orders
# ---------------------------------------------------------------------------

def _lex_key(m):
    return m


def _lex_key_perm(pr, m):
    return tuple(m[i] for i in pr)


def _degrevlex_key(m):
    return (sum(m), tuple(-e for e in reversed(m)))


def _degrevlex_key_perm(pr, m):
    return (sum(m), tuple(-m[i] for i in reversed(pr)))


@dataclass(frozen=True)
class MonomialOrder:
    """Lex or degree-reverse-lex order.

    ``priority`` lists variable indices (0-based) from most to least
    significant; ``None`` means x1 > x2 > ... > xr.
    """

    kind: str = "lex"
    priority: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "degrevlex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.priority is not None:
            pr = tuple(self.priority)
            if sorted(pr) != list(range(len(pr))):
                raise ValueError(f"priority must be a permutation, got {pr}")
            object.__setattr__(self, "priority", pr)

    @property
    def key(self):
        """A function mapping a monomial to a sort key increasing with the order."""
        pr = self.priority
        if self.kind == "lex":
            return _lex_key if pr is None else partial(_lex_key_perm, pr)
        if pr is None:
            return _degrevlex_key
        return partial(_degrevlex_key_perm, pr)

    def cmp(self, a, b):
        """Return -1, 0 or 1 as a <, =, > b."""
        if len(a) != len(b):
            raise ValueError(f"monomials of different lengths: {a} vs {b}")
        if self.priority is not None and len(self.priority) != len(a):
            raise ValueError("order priority does not match the variable count")
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def __str__(self):
        return self.kind


LEX = MonomialOrder("lex")
DEGREVLEX = MonomialOrder("degrevlex")


def monomial_cmp(order, a, b):
    return order.cmp(a, b)


def order_from_name(name):
    return MonomialOrder(name)


# ---------------------------------------------------------------------------
# rings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ring:
    """K[x1, ..., x_nvars]."""

    nvars: int
    field: FieldConfig = QQ

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError("a ring needs at least one variable")

    def zero(self):
        return Polynomial(self, {}, _clean=True)

    def one(self):
        return self.const(1)

    def const(self, c):
        return Polynomial(self, {(0,) * self.nvars: c})

    def gen(self, i):
        """The variable x_{i+1} (0-based index)."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.field.one()}, _clean=True)

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exps, c=1):
        return Polynomial(self, {tuple(exps): c})

    def parse(self, text):
        return parse_poly(text, self)

    def from_univariate(self, coeffs, var):
        """Build sum coeffs[k] * x_var^k."""
        terms = {}
        for k, c in enumerate(coeffs):
            e = [0] * self.nvars
            e[var] = k
            terms[tuple(e)] = c
        return Polynomial(self, terms)

    def __str__(self):
        return f"{self.field}[x1..x{self.nvars}]"


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Polynomial:
    """Immutable sparse polynomial. Supports ``+ - *``, ``**`` and ``==``."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms=None, *, _clean=False):
        self.ring = ring
        if _clean:
            self.terms = terms
        else:
            field = ring.field
            clean = {}
            for m, c in (terms or {}).items():
                m = tuple(m)
                if len(m) != ring.nvars:
                    raise ValueError(f"monomial {m} does not fit {ring}")
                if any(e < 0 for e in m):
                    raise ValueError(f"negative exponent in {m}")
                c = field(c)
                if c:
                    clean[m] = c
            self.terms = clean
        self._hash = None

    # -- basic queries -----------------------------------------------------

    @property
    def field(self):
        return self.ring.field

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self):
        """Total degree; ``-inf`` for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(map(sum, self.terms))

    def degree_in(self, var):
        if not self.terms:
            return NEG_INF
        return max(m[var] for m in self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_coeff(self):
        return self.terms.get((0,) * self.ring.nvars, self.field.zero())

    def variables(self):
        """Sorted indices of the variables that occur."""
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return sorted(used)

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), self.field.zero())

    def leading_term(self, order=LEX):
        if not self.terms:
            raise ValueError("the zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def leading_monomial(self, order=LEX):
        return self.leading_term(order)[0]

    def leading_coeff(self, order=LEX):
        return self.leading_term(order)[1]

    def sorted_terms(self, order=LEX):
        """Terms from largest to smallest."""
        key = order.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def monic(self, order=LEX):
        if not self.terms:
            return self
        lc = self.leading_coeff(order)
        if lc == 1:
            return self
        return self.scale(self.field.inv(lc))

    def max_coeff_bits(self):
        """Bit size of the largest numerator/denominator (residue over F_p)."""
        bits = 0
        for c in self.terms.values():
            if isinstance(c, Fraction):
                bits = max(bits, abs(c.numerator).bit_length(), c.denominator.bit_length())
            else:
                bits = max(bits, int(c).bit_length())
        return bits

    # -- arithmetic --------------------------------------------------------

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        red = self.field.reduce
        for m, c in b.items():
            s = red(out.get(m, 0) + c)
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        neg = self.field.neg
        return Polynomial(self.ring, {m: neg(c) for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return self.ring.zero()
        red = self.field.reduce
        out = {}
        get = out.get
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = tuple(map(operator.add, ma, mb))
                out[m] = get(m, 0) + ca * cb
        if self.field.is_prime_field:
            out = {m: red(c) for m, c in out.items()}
        return Polynomial(self.ring, {m: c for m, c in out.items() if c}, _clean=True)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        """Multiply by a field element."""
        field = self.field
        c = field(c)
        if not c:
            return self.ring.zero()
        red = field.reduce
        return Polynomial(self.ring, {m: red(v * c) for m, v in self.terms.items()}, _clean=True)

    def mul_term(self, mono, c):
        """Multiply by the single term c * x^mono."""
        if not c:
            return self.ring.zero()
        red = self.field.reduce
        return Polynomial(
            self.ring,
            {tuple(map(operator.add, m, mono)): red(v * c) for m, v in self.terms.items()},
            _clean=True,
        )

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def exact_div(self, other, order=LEX):
        """Return q with self = q * other, raising ArithmeticError otherwise."""
        q, r = divide(self, [other], order)
        if r:
            raise ArithmeticError("division is not exact")
        return q[0]

    def evaluate(self, point):
        """Evaluate at a point given as a sequence of field elements."""
        field = self.field
        point = [field(x) for x in point]
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = field.reduce(v * x**e)
            total = field.reduce(total + v)
        return field(total)

    def univariate_coeffs(self, var):
        """Coefficient list in x_var, low degree first. Requires no other variable."""
        if not self.terms:
            return []
        out = [self.field.zero()] * (self.degree_in(var) + 1)
        for m, c in self.terms.items():
            if any(e for i, e in enumerate(m) if i != var):
                raise ValueError(f"polynomial involves variables other than x{var + 1}")
            out[m[var]] = c
        return out

    # -- comparison / display ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def render(self, order=LEX):
        return render_poly(self, order)

    def __str__(self):
        return render_poly(self)

    def __repr__(self):
        return f"Polynomial({render_poly(self)!r}, {self.ring})"


def poly_add(f, g):
    return f + g


def poly_sub(f, g):
    return f - g


def poly_mul(f, g):
    return f * g


def scalar_mul(f, c):
    return f.scale(c)


def leading_term(f, order=LEX):
    return f.leading_term(order)


# ---------------------------------------------------------------------------
# division
# ---------------------------------------------------------------------------

def _reduce_terms(p, lts, divisors, field, key, quotients):
    """Core of the division algorithm, working on the term dict ``p``.

    Divisors are tried in list order. Returns the remainder term dict.
    ``quotients`` is a list of dicts updated in place, or None to skip
    bookkeeping.
    """
    red = field.reduce
    inv = [field.inv(c) for _, c in lts]
    rem = {}
    while p:
        lm = max(p, key=key)
        lc = p[lm]
        for i, (dm, _) in enumerate(lts):
            if all(x <= y for x, y in zip(dm, lm)):
                qm = tuple(map(operator.sub, lm, dm))
                qc = red(lc * inv[i])
                if quotients is not None:
                    q = quotients[i]
                    s = red(q.get(qm, 0) + qc)
                    if s:
                        q[qm] = s
                    else:
                        q.pop(qm, None)
                for m, c in divisors[i].terms.items():
                    mm = tuple(map(operator.add, m, qm))
                    v = red(p.get(mm, 0) - qc * c)
                    if v:
                        p[mm] = v
                    else:
                        p.pop(mm, None)
                break
        else:
            rem[lm] = lc
            del p[lm]
    return rem


def divide(f, divisors, order=LEX):
    """Multivariate division: f = sum(q_i * d_i) + r.

    No term of r is divisible by any leading monomial of the divisors.
    """
    if not divisors:
        raise ValueError("need at least one divisor")
    for d in divisors:
        f._check(d)
        if not d:
            raise ZeroDivisionError("division by the zero polynomial")
    lts = [d.leading_term(order) for d in divisors]
    quotients = [{} for _ in divisors]
    rem = _reduce_terms(dict(f.terms), lts, divisors, f.field, order.key, quotients)
    ring = f.ring
    return (
        [Polynomial(ring, q, _clean=True) for q in quotients],
        Polynomial(ring, rem, _clean=True),
    )


def remainder(f, divisors, order=LEX, lts=None):
    """Remainder of f on division by ``divisors`` (no quotients kept)."""
    if not divisors:
        return f
    if lts is None:
        lts = [d.leading_term(order) for d in divisors]
    rem = _reduce_terms(dict(f.terms), lts, divisors, f.field, order.key, None)
    return Polynomial(f.ring, rem, _clean=True)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def _render_monomial(m):
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e:
            parts.append(f"x{i + 1}^{e}")
    return "*".join(parts)


def render_poly(f, order=LEX):
    if not f.terms:
        return "0"
    field = f.field
    out = []
    for k, (m, c) in enumerate(f.sorted_terms(order)):
        neg = not field.is_prime_field and c < 0
        mag = -c if neg else c
        mono = _render_monomial(m)
        if not mono:
            body = field.render(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{field.render(mag)}*{mono}"
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


class _Parser:
    """Recursive-descent parser for the grammar in the module docstring."""

    def __init__(self, text, ring):
        self.text = text.replace("−", "-")
        self.ring = ring
        self.pos = 0

    def error(self, msg):
        raise ParseError(msg, self.text, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def number(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a number")
        return int(self.text[start:self.pos])

    def factor(self):
        ch = self.peek()
        if ch.isdigit():
            num = self.number()
            if self.peek() == "/":
                self.pos += 1
                den = self.number()
                if den == 0:
                    self.error("zero denominator")
                return Fraction(num, den), None
            return Fraction(num), None
        if ch == "x":
            self.pos += 1
            idx = self.number()
            if not 1 <= idx <= self.ring.nvars:
                self.error(f"variable x{idx} not in {self.ring}")
            exp = 1
            if self.peek() == "^":
                self.pos += 1
                exp = self.number()
            return None, (idx - 1, exp)
        self.error(f"unexpected {ch!r}" if ch else "unexpected end of input")

    def term(self):
        coeff = Fraction(1)
        exps = [0] * self.ring.nvars
        while True:
            c, var = self.factor()
            if var is None:
                coeff *= c
            else:
                exps[var[0]] += var[1]
            if self.peek() != "*":
                return coeff, tuple(exps)
            self.pos += 1

    def poly(self):
        terms = {}
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        while True:
            c, m = self.term()
            terms[m] = terms.get(m, 0) + sign * c
            ch = self.peek()
            if not ch:
                break
            if ch not in "+-":
                self.error(f"unexpected {ch!r}")
            sign = -1 if ch == "-" else 1
            self.pos += 1
        field = self.ring.field
        return Polynomial(self.ring, {m: field(c) for m, c in terms.items()})


def parse_poly(text, ring):
    """Parse the text grammar; the inverse of :func:`render_poly`."""
    if not text.strip():
        raise ParseError("empty polynomial", text, 0)
    return _Parser(text, ring).poly()
