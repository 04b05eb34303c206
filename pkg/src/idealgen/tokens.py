"""Prefix-notation token sequences for polynomials.

Vocabulary: ``+``, ``*``, ``^``, ``/``, variables ``x1 .. xr`` and integer
constants ``C<int>`` (``C-3``, ``C0``, ``C12``). Sums and products are
binary and nested to the right::

    3*x1^2 - 1/2   ->   + * C3 ^ x1 C2 / C-1 C2

A system is encoded as its polynomials separated by ``<sep>``; a training
pair puts ``<io>`` between F and G.
"""

from fractions import Fraction

from .poly import LEX

SEP = "<sep>"
IO = "<io>"


def _const(c, field):
    if field.is_prime_field:
        return [f"C{c}"]
    c = Fraction(c)
    if c.denominator == 1:
        return [f"C{c.numerator}"]
    return ["/", f"C{c.numerator}", f"C{c.denominator}"]


def _chain(op, items):
    out = []
    for item in items[:-1]:
        out.append(op)
        out.extend(item)
    out.extend(items[-1])
    return out


def encode_poly(f, order=LEX):
    if not f:
        return ["C0"]
    terms = []
    for m, c in f.sorted_terms(order):
        factors = [_const(c, f.field)]
        for i, e in enumerate(m):
            if e == 1:
                factors.append([f"x{i + 1}"])
            elif e:
                factors.append(["^", f"x{i + 1}", f"C{e}"])
        terms.append(_chain("*", factors))
    return _chain("+", terms)


def encode_system(polys, order=LEX):
    out = []
    for k, f in enumerate(polys):
        if k:
            out.append(SEP)
        out.extend(encode_poly(f, order))
    return out


def encode_pair(F, G, order=LEX):
    return encode_system(F, order) + [IO] + encode_system(G, order)


def _int(tok):
    if not tok.startswith("C"):
        raise ValueError(f"expected a constant token, got {tok!r}")
    return int(tok[1:])


def decode_poly(tokens, ring):
    """Inverse of :func:`encode_poly`."""
    pos = 0
    field = ring.field

    def expr():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("truncated token sequence")
        tok = tokens[pos]
        pos += 1
        if tok == "+":
            return expr() + expr()
        if tok == "*":
            return expr() * expr()
        if tok == "^":
            base = expr()
            return base ** _int(tokens_next())
        if tok == "/":
            num = _int(tokens_next())
            den = _int(tokens_next())
            return ring.const(field(Fraction(num, den)))
        if tok.startswith("x"):
            return ring.gen(int(tok[1:]) - 1)
        return ring.const(field(_int(tok)))

    def tokens_next():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("truncated token sequence")
        pos += 1
        return tokens[pos - 1]

    result = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens from position {pos}")
    return result


def split_system(tokens):
    groups, cur = [], []
    for tok in tokens:
        if tok == SEP:
            groups.append(cur)
            cur = []
        else:
            cur.append(tok)
    groups.append(cur)
    return groups


def decode_pair(tokens, ring):
    k = tokens.index(IO)
    F = [decode_poly(g, ring) for g in split_system(tokens[:k])]
    G = [decode_poly(g, ring) for g in split_system(tokens[k + 1:])]
    return F, G

