"""Desk-scale experiments around left-regular matrices.

Here (B, A) is a pair with B of shape n x m, A of shape m x n and
(BA - E)G = 0, so A G generates the same ideal as G. Splitting
B = (B1 | B2) and A = [A1; A2] with square B1, A1, the product B1 A1 equals
E + W - B2 A2 where W = BA - E is a matrix of syzygies of G. If det(B1 A1)
is irreducible, one of det(B1), det(A1) is a nonzero constant and an exact
left inverse can be written down.
"""

import random
from collections import Counter
from dataclasses import dataclass, field as dc_field

from .field import QQ
from .forge import derive_seed
from .irreducible import DEFAULT_BUDGET, IRREDUCIBLE, NotApplicable, irreducible_oracle
from .poly import Ring
from .polymat import (
    DimensionError, ElementaryOp, PolyMatrix, BlockSplit, apply_elementary, det_bareiss,
    inverse_regular, mat_mul,
)
from .shape import CoeffDistribution, random_poly, sample_shape_basis

VIA_B1, VIA_A1, INCONCLUSIVE = "InF0_via_B1", "InF0_via_A1", "Inconclusive"

EXPERIMENT_DISTRIBUTION = CoeffDistribution("int", -3, 3, zero_weight=None)


def _gcol(G):
    if isinstance(G, PolyMatrix):
        return G
    G = list(G)
    return PolyMatrix.column(G[0].ring, G)


def syzygy_check(W, G):
    """True iff W G = 0 exactly."""
    g = _gcol(G)
    if W.cols != g.rows:
        raise DimensionError(f"W has {W.cols} columns but G has {g.rows} entries")
    return mat_mul(W, g).is_zero()


def koszul_row(G, i, j, c=None):
    """The syzygy c * (g_j e_i - g_i e_j)."""
    G = list(G)
    ring = G[0].ring
    c = ring.one() if c is None else c
    row = [ring.zero()] * len(G)
    row[i] = c * G[j]
    row[j] = -(c * G[i])
    return row


@dataclass
class WitnessPoint:
    B: PolyMatrix
    A: PolyMatrix
    D: int | None = None

    def residual(self):
        return mat_mul(self.B, self.A) - PolyMatrix.identity(self.B.ring, self.B.rows)

    def check(self, G):
        """(BA - E)G = 0, and the degree bound when D is set."""
        if not syzygy_check(self.residual(), G):
            return False
        if self.D is None:
            return True
        blocks = BlockSplit.of(self.B, self.A)
        return (self.B.max_degree() <= self.D and self.A.max_degree() <= self.D
                and mat_mul(blocks.B1, blocks.A1).max_degree() <= self.D)

    def p(self):
        """The projection (B, A) -> B1 A1."""
        blocks = BlockSplit.of(self.B, self.A)
        return mat_mul(blocks.B1, blocks.A1)


def section_iota(C, m):
    """A witness point with B1 A1 = C and BA = E, for m >= 2n.

    B = (E | E | O), A = [C; E - C; O].
    """
    n = C.rows
    if C.cols != n:
        raise DimensionError("C must be square")
    if m < 2 * n:
        raise ValueError(f"need m >= 2n, got m={m}, n={n}")
    ring = C.ring
    e = PolyMatrix.identity(ring, n)
    pad_b = PolyMatrix.zeros(ring, n, m - 2 * n) if m > 2 * n else None
    pad_a = PolyMatrix.zeros(ring, m - 2 * n, n) if m > 2 * n else None
    b = e.hstack(e.hstack(pad_b))
    a = C.vstack((e - C).vstack(pad_a))
    point = WitnessPoint(b, a, C.max_degree())
    if not mat_mul(b, a).is_identity():
        raise AssertionError("BA != E")
    if point.p() != C:
        raise AssertionError("B1 A1 != C")
    return point


@dataclass
class MembershipResult:
    verdict: str
    det: object
    W: PolyMatrix
    hypothesis_violated: bool
    A_prime: PolyMatrix | None = None
    B_prime: PolyMatrix | None = None
    oracle: object = None
    notes: list = dc_field(default_factory=list)


def membership_by_irreducible_det(B, A, G, budget=DEFAULT_BUDGET):
    """Certify that A G generates <G> through an irreducible det(B1 A1).

    On success exactly one of ``A_prime`` (with B A' = E and A' G = A G) or
    ``B_prime`` (with B' A = E) is set. With n < 3 the verdict is still
    computed but ``hypothesis_violated`` is raised.
    """
    n, m = B.rows, B.cols
    if A.shape != (m, n):
        raise DimensionError(f"B {B.shape} and A {A.shape} do not conform")
    ring = B.ring
    gcol = _gcol(G)
    e = PolyMatrix.identity(ring, n)
    W = mat_mul(B, A) - e
    if not syzygy_check(W, gcol):
        raise ValueError("(BA - E)G != 0")
    blocks = BlockSplit.of(B, A)
    C = e + W - blocks.b2a2()
    if C != mat_mul(blocks.B1, blocks.A1):
        raise AssertionError("E + W - B2 A2 != B1 A1")
    d = det_bareiss(C)
    det_b1, det_a1 = det_bareiss(blocks.B1), det_bareiss(blocks.A1)
    if det_b1 * det_a1 != d:
        raise AssertionError("det(B1 A1) != det(B1) det(A1)")
    result = MembershipResult(INCONCLUSIVE, d, W, n < 3)
    if not d:
        result.notes.append("det is zero")
        return result
    if not d.is_constant():
        result.oracle = irreducible_oracle(d, budget)
        if result.oracle.verdict != IRREDUCIBLE:
            result.notes.append(f"oracle verdict {result.oracle.verdict}")
            return result
    if det_b1.is_constant():
        top = mat_mul(inverse_regular(blocks.B1), e - blocks.b2a2())
        a_prime = top.vstack(blocks.A2)
        if not mat_mul(B, a_prime).is_identity():
            raise AssertionError("B A' != E")
        if mat_mul(a_prime, gcol) != mat_mul(A, gcol):
            raise AssertionError("A' G != A G")
        result.verdict, result.A_prime = VIA_B1, a_prime
    elif det_a1.is_constant():
        pad = PolyMatrix.zeros(ring, n, m - n) if m > n else None
        b_prime = inverse_regular(blocks.A1).hstack(pad)
        if not mat_mul(b_prime, A).is_identity():
            raise AssertionError("B' A != E")
        result.verdict, result.B_prime = VIA_A1, b_prime
    else:
        raise AssertionError("irreducible det with two non-constant factors")
    return result


# ---------------------------------------------------------------------------
# random matrices and experiments
# ---------------------------------------------------------------------------

def random_poly_matrix(ring, rows, cols, D, dist, rng):
    return PolyMatrix(ring, [[random_poly(ring, D, dist, rng) for _ in range(cols)] for _ in range(rows)])


def random_unimodular(ring, size, steps, dist, rng, degree=1):
    """Product of ``steps`` random row additions and constant scalings."""
    u = PolyMatrix.identity(ring, size)
    for _ in range(steps):
        if size > 1 and rng.random() < 0.8:
            i, j = rng.sample(range(size), 2)
            f = random_poly(ring, degree, dist, rng)
            if f:
                u = apply_elementary(ElementaryOp.addrow(size, i, j, f), u)
        else:
            u = apply_elementary(ElementaryOp.scale_row(size, rng.randrange(size), dist.sample_nonzero(rng, ring.field)), u)
    return u


def classify_det(C, budget=DEFAULT_BUDGET):
    d = det_bareiss(C)
    try:
        return irreducible_oracle(d, budget).verdict
    except NotApplicable:
        return "not_applicable"


def det_irreducibility_experiment(n=2, D=1, r=1, trials=10_000, dist=EXPERIMENT_DISTRIBUTION, seed=0,
                                  field=QQ, budget=DEFAULT_BUDGET):
    """Classify det(C) for random n x n matrices C with entries of degree <= D in r variables.

    Trial i uses its own seed derived from ``seed`` and i, so counts do not
    depend on evaluation order.
    """
    ring = Ring(r, field)
    counts = Counter()
    for i in range(trials):
        rng = random.Random(derive_seed(seed, "det", i))
        counts[classify_det(random_poly_matrix(ring, n, n, D, dist, rng), budget)] += 1
    keys = ("irreducible", "reducible", "unknown", "not_applicable")
    applicable = trials - counts["not_applicable"]
    return {
        "experiment": "det_irreducibility",
        "config": {"n": n, "D": D, "r": r, "trials": trials, "seed": seed, "field": field.to_json(),
                   "dist": dist.to_json(), "budget": budget},
        "counts": {k: counts[k] for k in keys},
        "irreducible_fraction": counts["irreducible"] / trials if trials else 0.0,
        "unknown_fraction": counts["unknown"] / applicable if applicable else 0.0,
    }


def section_roundtrip_experiment(n=2, m=4, D=2, trials=1000, dist=EXPERIMENT_DISTRIBUTION, seed=0, field=QQ):
    ring = Ring(n, field)
    passed = 0
    for i in range(trials):
        rng = random.Random(derive_seed(seed, "iota", i))
        C = random_poly_matrix(ring, n, n, D, dist, rng)
        point = section_iota(C, m)
        passed += point.p() == C and mat_mul(point.B, point.A).is_identity()
    return {
        "experiment": "section_roundtrip",
        "config": {"n": n, "m": m, "D": D, "trials": trials, "seed": seed, "field": field.to_json(),
                   "dist": dist.to_json()},
        "passed": passed,
        "trials": trials,
    }


def _irreducible_univariate(ring, var, rng, dist, budget):
    while True:
        deg = rng.choice((2, 3))
        coeffs = [dist.sample(rng, ring.field) for _ in range(deg)] + [ring.field.one()]
        q = ring.from_univariate(coeffs, var)
        if irreducible_oracle(q, budget).verdict == IRREDUCIBLE:
            return q


def construct_membership_instance(seed, case=VIA_B1, n=3, m=None, d=2, field=QQ,
                                  dist=CoeffDistribution("int", -2, 2, zero_weight=0.5),
                                  budget=DEFAULT_BUDGET):
    """Build (B, A, G) with (BA - E)G = 0 and det(B1 A1) an irreducible polynomial.

    One of B1, A1 is unimodular, the other is diag(q, 1, ..) times a
    unimodular matrix with q irreducible in the last variable; ``case``
    picks which. W is a random combination of Koszul syzygies, B2 = (M | R) P^-1
    and A2 = P [E; O] with M = E + W - B1 A1, R random and P unimodular.
    """
    m = 2 * n if m is None else m
    if m < 2 * n:
        raise ValueError("construction needs m >= 2n")
    rng = random.Random(seed)
    G = sample_shape_basis(n, d, dist, rng, field).polys()
    ring = G[0].ring
    e = PolyMatrix.identity(ring, n)

    rows = []
    for _ in range(n):
        row = [ring.zero()] * n
        for _ in range(2):
            i, j = sorted(rng.sample(range(n), 2))
            c = random_poly(ring, 1, dist, rng)
            row = [a + b for a, b in zip(row, koszul_row(G, i, j, c))]
        rows.append(row)
    W = PolyMatrix(ring, rows)

    q = _irreducible_univariate(ring, n - 1, rng, dist, budget)
    diag = PolyMatrix(ring, [[q if i == j == 0 else ring.one() if i == j else ring.zero()
                              for j in range(n)] for i in range(n)])
    unit = random_unimodular(ring, n, 3, dist, rng)
    other = mat_mul(diag, random_unimodular(ring, n, 3, dist, rng))
    b1, a1 = (unit, other) if case == VIA_B1 else (other, unit)

    M = e + W - mat_mul(b1, a1)
    k = m - n
    R = random_poly_matrix(ring, n, k - n, 1, dist, rng) if k > n else None
    P = random_unimodular(ring, k, 4, dist, rng)
    stacked = e.vstack(PolyMatrix.zeros(ring, k - n, n) if k > n else None)
    b2 = mat_mul(M.hstack(R), inverse_regular(P))
    a2 = mat_mul(P, stacked)
    B, A = b1.hstack(b2), a1.vstack(a2)
    if not syzygy_check(mat_mul(B, A) - e, G):
        raise AssertionError("constructed instance violates (BA - E)G = 0")
    return B, A, G
