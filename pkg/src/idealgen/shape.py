"""Random shape-position Groebner bases.

A shape basis in K[x1..xn] is

    x1 - h1(xn), ..., x_{n-1} - h_{n-1}(xn), gn(xn)

with gn monic of degree d and every hi of degree < d. It is its own reduced
lex Groebner basis and has n*d free coefficients.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from .field import QQ
from .poly import Polynomial, Ring, monomials_up_to


@dataclass(frozen=True)
class CoeffDistribution:
    """Distribution of a single random coefficient.

    ``kind`` is one of ``"int"`` (uniform integer in ``[lo, hi]``),
    ``"rational"`` (numerator in ``[lo, hi]``, denominator in ``[1, den_hi]``)
    or ``"field"`` (uniform element of F_p). With ``zero_weight`` set, a
    coefficient is 0 with exactly that probability and otherwise drawn from
    the base distribution conditioned on being nonzero; ``None`` draws from
    the base distribution as is.
    """

    kind: str = "int"
    lo: int = -5
    hi: int = 5
    den_hi: int = 1
    zero_weight: float | None = 0.3

    def __post_init__(self):
        if self.kind not in ("int", "rational", "field"):
            raise ValueError(f"unknown coefficient distribution {self.kind!r}")
        if self.kind != "field" and self.lo > self.hi:
            raise ValueError("empty coefficient range")
        if self.kind == "rational" and self.den_hi < 1:
            raise ValueError("denominator bound must be >= 1")
        if self.zero_weight is not None and not 0 <= self.zero_weight <= 1:
            raise ValueError("zero_weight must lie in [0, 1]")

    def _base(self, rng, field):
        if self.kind == "field":
            if not field.is_prime_field:
                raise ValueError("uniform field elements need a prime field")
            return rng.randrange(field.p)
        num = rng.randint(self.lo, self.hi)
        if self.kind == "rational":
            while True:
                den = rng.randint(1, self.den_hi)
                if not field.characteristic or den % field.characteristic:
                    return field(Fraction(num, den))
        return field(num)

    def _can_be_nonzero(self, field):
        if self.kind == "field":
            return True
        if not field.is_prime_field:
            return (self.lo, self.hi) != (0, 0)
        return self.hi - self.lo + 1 >= field.p or any(v % field.p for v in range(self.lo, self.hi + 1))

    def sample(self, rng, field=QQ):
        if self.zero_weight is None:
            return field(self._base(rng, field))
        if rng.random() < self.zero_weight or not self._can_be_nonzero(field):
            return field.zero()
        while True:
            c = field(self._base(rng, field))
            if c:
                return c

    def sample_nonzero(self, rng, field=QQ):
        if not self._can_be_nonzero(field):
            raise ValueError("distribution cannot produce a nonzero coefficient")
        while True:
            c = field(self._base(rng, field))
            if c:
                return c

    def to_json(self):
        return {"kind": self.kind, "lo": self.lo, "hi": self.hi,
                "den_hi": self.den_hi, "zero_weight": self.zero_weight}

    @classmethod
    def from_json(cls, obj):
        return cls(**obj)


DEFAULT_DISTRIBUTION = CoeffDistribution()


def random_poly(ring, degree, dist, rng):
    """Dense random polynomial: every monomial of degree <= ``degree`` gets a draw."""
    field = ring.field
    return Polynomial(ring, {m: dist.sample(rng, field) for m in monomials_up_to(ring.nvars, degree)})


def _rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


@dataclass(frozen=True)
class ShapeBasis:
    ring: Ring
    d: int
    h: tuple  # n - 1 polynomials in xn of degree < d
    gn: Polynomial

    @property
    def n(self):
        return self.ring.nvars

    def polys(self):
        ring = self.ring
        return [ring.gen(i) - hi for i, hi in enumerate(self.h)] + [self.gn]

    def free_coefficients(self):
        """The n*d coefficients parametrising the basis (zeros included)."""
        last = self.n - 1
        out = []
        for hi in self.h:
            cs = hi.univariate_coeffs(last) if hi else []
            out.extend(cs + [self.ring.field.zero()] * (self.d - len(cs)))
        out.extend(self.gn.univariate_coeffs(last)[: self.d])
        return out

    def standard_monomials(self):
        e = [0] * self.n
        out = []
        for k in range(self.d):
            e[-1] = k
            out.append(tuple(e))
        return out


def sample_shape_basis(n, d, dist=DEFAULT_DISTRIBUTION, seed=None, field=QQ):
    """Draw a shape basis with n variables and gn of degree d."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if d < 1:
        raise ValueError(f"need d >= 1, got {d}")
    rng = _rng(seed)
    ring = Ring(n, field)
    last = n - 1
    h = tuple(
        ring.from_univariate([dist.sample(rng, field) for _ in range(d)], last)
        for _ in range(n - 1)
    )
    tail = [dist.sample(rng, field) for _ in range(d)]
    gn = ring.from_univariate(tail + [field.one()], last)
    return ShapeBasis(ring, d, h, gn)


def is_shape_position(G):
    """Structural check: x_i - h_i(x_n) for i < n, then monic g_n(x_n), deg h_i < deg g_n."""
    G = list(G)
    if not G:
        return False
    ring = G[0].ring
    n = ring.nvars
    if len(G) != n or any(g.ring != ring for g in G):
        return False
    last = n - 1
    gn = G[-1]
    if not gn or gn.variables() not in ([last], []):
        return False
    d = gn.degree_in(last)
    if d < 1 or gn.coefficient(tuple([0] * last + [d])) != 1:
        return False
    for i, g in enumerate(G[:-1]):
        h = ring.gen(i) - g
        if h and (h.variables() not in ([last], []) or h.degree_in(last) >= d):
            return False
    return True


@dataclass(frozen=True)
class ShapeConfig:
    """How the seed bases G are drawn: d uniform on [d_min, d_max]."""

    d_min: int = 1
    d_max: int = 5
    coeffs: CoeffDistribution | None = None  # None: ints in [-5, 5] over Q, uniform over F_p

    def __post_init__(self):
        if not 1 <= self.d_min <= self.d_max:
            raise ValueError(f"need 1 <= d_min <= d_max, got {self.d_min}, {self.d_max}")

    def distribution(self, field):
        if self.coeffs is not None:
            return self.coeffs
        return CoeffDistribution("field") if field.is_prime_field else DEFAULT_DISTRIBUTION

    def sample(self, n, seed, field=QQ):
        rng = _rng(seed)
        d = rng.randint(self.d_min, self.d_max)
        return sample_shape_basis(n, d, self.distribution(field), rng, field)
