"""Buchberger's algorithm, reduced bases and the ideal-equality check."""

import heapq
from dataclasses import dataclass

from .poly import LEX, mono_lcm, remainder


class BudgetExceeded(RuntimeError):
    """Raised when Buchberger's algorithm processes more S-pairs than allowed."""


DEFAULT_MAX_PAIRS = 100_000


@dataclass(frozen=True)
class GroebnerBasis:
    generators: tuple
    order: object = LEX
    reduced: bool = False

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def normal_form(self, f):
        return remainder(f, list(self.generators), self.order)

    def contains(self, f):
        return not self.normal_form(f)

    def leading_monomials(self):
        return [g.leading_monomial(self.order) for g in self.generators]


def s_polynomial(f, g, order=LEX):
    """(L / LT(f)) f - (L / LT(g)) g with L the lcm of the leading monomials."""
    if not f or not g:
        raise ValueError("S-polynomial of the zero polynomial")
    mf, cf = f.leading_term(order)
    mg, cg = g.leading_term(order)
    lcm = mono_lcm(mf, mg)
    field = f.field
    a = f.mul_term(tuple(x - y for x, y in zip(lcm, mf)), field.inv(cf))
    b = g.mul_term(tuple(x - y for x, y in zip(lcm, mg)), field.inv(cg))
    return a - b


def _coprime(a, b):
    return all(not (x and y) for x, y in zip(a, b))


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def buchberger(F, order=LEX, max_pairs=DEFAULT_MAX_PAIRS):
    """Groebner basis of <F> (monic, not yet inter-reduced).

    Pairs are processed smallest lcm first under ``order`` (for degree
    orders this is smallest lcm degree first; under lex, degree-first
    selection blows up badly on dense systems). A pair is skipped when
    its leading monomials are coprime, or by the chain criterion when a
    third leading monomial divides the lcm and both side pairs are done.
    """
    G = [f.monic(order) for f in F if f]
    if not G:
        raise ValueError("cannot compute a basis of the zero ideal")
    ring = G[0].ring
    if any(g.ring != ring for g in G):
        raise ValueError("polynomials from different rings")
    key = order.key
    lms = [g.leading_monomial(order) for g in G]
    heap = []
    pending = set()

    def push(i, j):
        lcm = mono_lcm(lms[i], lms[j])
        heapq.heappush(heap, (key(lcm), i, j))
        pending.add((i, j))

    for j in range(len(G)):
        for i in range(j):
            push(i, j)

    processed = 0
    while heap:
        _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        if _coprime(lms[i], lms[j]):
            continue
        lcm = mono_lcm(lms[i], lms[j])
        if any(
            k != i and k != j
            and _divides(lms[k], lcm)
            and (min(i, k), max(i, k)) not in pending
            and (min(j, k), max(j, k)) not in pending
            for k in range(len(G))
        ):
            continue
        processed += 1
        if processed > max_pairs:
            raise BudgetExceeded(f"more than {max_pairs} S-pairs")
        r = remainder(s_polynomial(G[i], G[j], order), G, order)
        if r:
            r = r.monic(order)
            G.append(r)
            lms.append(r.leading_monomial(order))
            new = len(G) - 1
            for k in range(new):
                push(k, new)
    return GroebnerBasis(tuple(G), order, reduced=False)


def reduce_basis(gb):
    """The unique reduced Groebner basis, sorted by decreasing leading monomial."""
    order = gb.order
    key = order.key
    gens = sorted((g.monic(order) for g in gb.generators if g), key=lambda g: key(g.leading_monomial(order)))
    minimal = []
    for g in gens:
        lm = g.leading_monomial(order)
        if not any(_divides(h.leading_monomial(order), lm) for h in minimal):
            minimal.append(g)
    reduced = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        reduced.append(remainder(g, others, order).monic(order) if others else g)
    reduced.sort(key=lambda g: key(g.leading_monomial(order)), reverse=True)
    return GroebnerBasis(tuple(reduced), order, reduced=True)


def reduced_groebner(F, order=LEX, max_pairs=DEFAULT_MAX_PAIRS):
    return reduce_basis(buchberger(F, order, max_pairs))


def is_groebner(G, order=LEX):
    """Check Buchberger's criterion on every pair, without shortcuts."""
    G = [g for g in G if g]
    for j in range(len(G)):
        for i in range(j):
            if remainder(s_polynomial(G[i], G[j], order), G, order):
                return False
    return True


def is_reduced(G, order=LEX):
    lms = [g.leading_monomial(order) for g in G]
    for i, g in enumerate(G):
        if g.leading_coeff(order) != 1:
            return False
        for m in g.terms:
            if any(j != i and _divides(lm, m) for j, lm in enumerate(lms)):
                return False
    return True


def ideal_equal(F, G, order=LEX, method="both", max_pairs=DEFAULT_MAX_PAIRS):
    """Decide <F> = <G>.

    ``method="canonical"`` compares reduced Groebner bases,
    ``"inclusion"`` reduces each side modulo a basis of the other, and
    ``"both"`` runs the two and raises if they disagree.
    """
    if not F or not G:
        raise ValueError("ideal_equal needs nonempty generator lists")
    F = [f for f in F if f]
    G = [g for g in G if g]
    if not F or not G:
        return not F and not G
    ring = F[0].ring
    if any(p.ring != ring for p in F + G):
        raise ValueError("polynomials from different rings")
    gb_f = buchberger(F, order, max_pairs)
    gb_g = buchberger(G, order, max_pairs)
    results = []
    if method in ("canonical", "both"):
        results.append(reduce_basis(gb_f).generators == reduce_basis(gb_g).generators)
    if method in ("inclusion", "both"):
        bf, bg = list(gb_f.generators), list(gb_g.generators)
        results.append(
            all(not remainder(f, bg, order) for f in F)
            and all(not remainder(g, bf, order) for g in G)
        )
    if not results:
        raise ValueError(f"unknown method {method!r}")
    if len(set(results)) > 1:
        raise RuntimeError("canonical-form and double-inclusion checks disagree")
    return results[0]


def ideal_contains(F, f, order=LEX, max_pairs=DEFAULT_MAX_PAIRS):
    return buchberger(F, order, max_pairs).contains(f)
