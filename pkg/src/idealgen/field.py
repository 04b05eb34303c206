"""Coefficient fields: the rationals and prime fields."""

from dataclasses import dataclass
from fractions import Fraction


def is_prime(p):
    """Deterministic Miller-Rabin for integers below 3.3e24."""
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldConfig:
    """Either the rationals (``kind="Q"``) or the prime field of order ``p``.

    Elements are ``Fraction`` over Q and ``int`` in ``[0, p)`` over F_p.
    """

    kind: str = "Q"
    p: int | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None:
                raise ValueError("the rationals take no modulus")
        elif self.kind == "Fp":
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"modulus must be a prime, got {self.p!r}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls):
        return cls("Q")

    @classmethod
    def prime(cls, p):
        return cls("Fp", p)

    @property
    def is_prime_field(self):
        return self.kind == "Fp"

    @property
    def characteristic(self):
        return self.p if self.kind == "Fp" else 0

    def __call__(self, value):
        """Coerce an int, Fraction or numeric string into the field."""
        if isinstance(value, str):
            value = Fraction(value)
        if self.kind == "Q":
            if isinstance(value, float):
                raise TypeError("floating point coefficients are not allowed")
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"{value} has no image in F_{self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"cannot coerce {value!r} into F_{self.p}")
        return value % self.p

    def reduce(self, c):
        """Normalise the result of a raw ``+ - *`` on field elements."""
        return c % self.p if self.kind == "Fp" else c

    def inv(self, c):
        if not c:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "Fp":
            return pow(c, -1, self.p)
        return 1 / c

    def div(self, a, b):
        return self.reduce(a * self.inv(b))

    def neg(self, c):
        return (-c) % self.p if self.kind == "Fp" else -c

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def render(self, c):
        if self.kind == "Fp":
            return str(c)
        if c.denominator == 1:
            return str(c.numerator)
        return f"{c.numerator}/{c.denominator}"

    def to_json(self):
        return {"kind": "Q"} if self.kind == "Q" else {"kind": "Fp", "p": self.p}

    @classmethod
    def from_json(cls, obj):
        if obj.get("kind") == "Q":
            return cls("Q")
        return cls("Fp", int(obj["p"]))

    def __str__(self):
        return "QQ" if self.kind == "Q" else f"GF({self.p})"


QQ = FieldConfig.rationals()
