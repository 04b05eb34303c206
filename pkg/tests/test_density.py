import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import R2, R3, sym_gens, to_sympy
from idealgen.density import (
    INCONCLUSIVE, VIA_A1, VIA_B1, WitnessPoint, construct_membership_instance, det_irreducibility_experiment,
    koszul_row, membership_by_irreducible_det, random_poly_matrix, section_iota, section_roundtrip_experiment,
    syzygy_check,
)
from idealgen.field import FieldConfig
from idealgen.irreducible import IRREDUCIBLE, REDUCIBLE, UNKNOWN, NotApplicable, irreducible_oracle
from idealgen.poly import Ring
from idealgen.polymat import DimensionError, PolyMatrix, mat_mul
from idealgen.shape import CoeffDistribution, sample_shape_basis

R1 = Ring(1)
F2 = Ring(2, FieldConfig.prime(2))


# -- irreducibility oracle ------------------------------------------------------

def test_oracle_examples():
    assert irreducible_oracle(R2.parse("x1^2 + 1")).verdict == IRREDUCIBLE
    res = irreducible_oracle(R2.parse("x1^2 - 1"))
    assert res.verdict == REDUCIBLE and res.factor == R2.parse("x1 - 1")
    res = irreducible_oracle(F2.parse("x1^2 + x2^2"))
    assert res.verdict == REDUCIBLE
    assert res.factor == F2.parse("x1 + x2") == res.cofactor


def test_oracle_rejects_constants():
    with pytest.raises(NotApplicable):
        irreducible_oracle(R2.const(3))
    with pytest.raises(NotApplicable):
        irreducible_oracle(R2.zero())


def test_oracle_quartic_without_roots():
    # x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2) has no rational root
    res = irreducible_oracle(R1.parse("x1^4 + 4"))
    assert res.verdict == REDUCIBLE
    assert res.factor * res.cofactor == R1.parse("x1^4 + 4")
    assert res.factor.degree() == 2
    res = irreducible_oracle(R1.parse("x1^4 + 1"))
    assert res.verdict == IRREDUCIBLE
    assert res.transcript["method"] == "kronecker" and res.transcript["candidates"] > 0


def test_oracle_unknown_cases():
    assert irreducible_oracle(R2.parse("x1^2 + x2^2 + 1")).verdict == UNKNOWN
    assert irreducible_oracle(Ring(3, FieldConfig.prime(2)).parse("x1 + x2 + x3")).verdict == UNKNOWN
    assert irreducible_oracle(R1.parse("x1^8 + 3*x1 + 1"), budget=1).verdict == UNKNOWN


def test_oracle_rational_coefficients():
    res = irreducible_oracle(R1.parse("1/2*x1^2 - 2"))
    assert res.verdict == REDUCIBLE and res.factor * res.cofactor == R1.parse("1/2*x1^2 - 2")


@settings(max_examples=150)
@given(st.lists(st.integers(-6, 6), min_size=2, max_size=6).filter(lambda c: c[-1] != 0 and any(c[:-1])))
def test_oracle_matches_sympy_univariate(coeffs):
    f = R1.from_univariate(coeffs, 0)
    res = irreducible_oracle(f)
    expected = sympy.Poly(to_sympy(f), *sym_gens(1)).is_irreducible
    assert res.verdict == (IRREDUCIBLE if expected else REDUCIBLE)
    if res.verdict == REDUCIBLE:
        assert 1 <= res.factor.degree() < f.degree()
        assert res.factor * res.cofactor == f


def _grid_polys(max_deg):
    """All polynomials over F_2 in two variables of total degree <= max_deg, as 5x5 grids."""
    cells = [(i, j) for i in range(max_deg + 1) for j in range(max_deg + 1 - i)]
    bits = (np.arange(2 ** len(cells))[:, None] >> np.arange(len(cells))) & 1
    grids = np.zeros((len(bits), 5, 5), dtype=np.int64)
    for k, (i, j) in enumerate(cells):
        grids[:, i, j] = bits[:, k]
    return grids


def reducible_f2_quartics():
    """Every product g h over F_2 with deg g, deg h >= 1 and deg g + deg h <= 4.

    Such a product always has a factor of degree <= 2 and a cofactor of degree <= 3.
    """
    small, big = _grid_polys(2), _grid_polys(3)
    small = small[small[:, 1:, :].any(axis=(1, 2)) | small[:, :, 1:].any(axis=(1, 2))]
    big = big[big[:, 1:, :].any(axis=(1, 2)) | big[:, :, 1:].any(axis=(1, 2))]
    out = set()
    for g in small:
        prod = np.zeros((len(big), 9, 9), dtype=np.int64)
        for i, j in zip(*np.nonzero(g)):
            prod[:, i:i + 5, j:j + 5] += big
        prod %= 2
        keep = prod[:, :5, :5]
        ok = ~prod[:, 5:, :].any(axis=(1, 2)) & ~prod[:, :, 5:].any(axis=(1, 2))
        out.update(k.tobytes() for k in keep[ok])
    return out


REDUCIBLE_F2 = None


def _grid(f):
    g = np.zeros((5, 5), dtype=np.int64)
    for (i, j), c in f.terms.items():
        g[i, j] = c
    return g.tobytes()


@settings(max_examples=200)
@given(st.sets(st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(lambda m: sum(m) <= 4), min_size=1))
def test_oracle_matches_enumeration_f2(monos):
    global REDUCIBLE_F2
    if REDUCIBLE_F2 is None:
        REDUCIBLE_F2 = reducible_f2_quartics()
    f = F2.zero()
    for m in monos:
        f = f + F2.monomial(m)
    if f.is_constant():
        return
    res = irreducible_oracle(f)
    assert res.verdict == (REDUCIBLE if _grid(f) in REDUCIBLE_F2 else IRREDUCIBLE)
    if res.verdict == REDUCIBLE:
        assert res.factor * res.cofactor == f


# -- syzygies and witness points -----------------------------------------------

def test_syzygy_examples():
    G = sample_shape_basis(2, 2, seed=1).polys()
    assert syzygy_check(PolyMatrix.zeros(R2, 1, 2), G)
    assert syzygy_check(PolyMatrix(R2, [koszul_row(G, 0, 1)]), G)
    assert not syzygy_check(PolyMatrix(R2, [[1, 0]]), G)
    with pytest.raises(DimensionError):
        syzygy_check(PolyMatrix.zeros(R2, 1, 3), G)


def test_random_rows_rarely_syzygies():
    G = sample_shape_basis(2, 2, seed=1).polys()
    rng = random.Random(0)
    dist = CoeffDistribution("int", -2, 2)
    for _ in range(50):
        W = random_poly_matrix(R2, 1, 2, 1, dist, rng)
        hit = syzygy_check(W, G)
        assert hit == (W[0, 0] * G[0] + W[0, 1] * G[1] == R2.zero())


def test_section_iota_examples():
    e = PolyMatrix.identity(R2, 2)
    p = section_iota(e, 4)
    assert p.A.split_rows(2)[1].split_rows(2)[0].is_zero()
    p = section_iota(PolyMatrix.zeros(R2, 2, 2), 5)
    assert p.A == PolyMatrix.zeros(R2, 2, 2).vstack(e).vstack(PolyMatrix.zeros(R2, 1, 2))
    assert mat_mul(p.B, p.A).is_identity()
    with pytest.raises(ValueError):
        section_iota(e, 3)


@given(st.integers(0, 10_000), st.integers(1, 2), st.integers(0, 2))
def test_section_roundtrip(seed, n, extra):
    rng = random.Random(seed)
    ring = Ring(2)
    C = random_poly_matrix(ring, n, n, 2, CoeffDistribution("int", -3, 3), rng)
    p = section_iota(C, 2 * n + extra)
    assert p.p() == C
    assert mat_mul(p.B, p.A).is_identity()
    assert p.check(sample_shape_basis(2, 2, seed=seed).polys()[:n] if n == 2 else [ring.gen(0)])


def test_witness_point_degree_bound():
    G = sample_shape_basis(2, 2, seed=1).polys()
    b = PolyMatrix.padded_identity(R2, 2, 3)
    a = PolyMatrix.stacked_identity(R2, 3, 2)
    assert WitnessPoint(b, a, 0).check(G)
    assert not WitnessPoint(b, PolyMatrix(R2, [[1, 0], [0, 1], ["x1^2", 0]]), 1).check(G)


# -- membership criterion -------------------------------------------------------

def test_membership_trivial():
    G = sample_shape_basis(3, 2, seed=0).polys()
    b, a = PolyMatrix.padded_identity(R3, 3, 4), PolyMatrix.stacked_identity(R3, 4, 3)
    res = membership_by_irreducible_det(b, a, G)
    assert res.verdict == VIA_B1 and not res.hypothesis_violated
    assert mat_mul(b, res.A_prime).is_identity()


def test_membership_n1_irreducible_det():
    # B = (1 | x1), A = [x1^2 + 1; -x1] gives BA = 1, so W = 0
    G = [R1.parse("x1^3 - 2")]
    b = PolyMatrix(R1, [[1, "x1"]])
    a = PolyMatrix(R1, [["x1^2 + 1"], ["-x1"]])
    res = membership_by_irreducible_det(b, a, G)
    assert res.hypothesis_violated
    assert res.det == R1.parse("x1^2 + 1")
    assert res.verdict == VIA_B1
    assert mat_mul(b, res.A_prime).is_identity()
    assert mat_mul(res.A_prime, PolyMatrix.column(R1, G)) == mat_mul(a, PolyMatrix.column(R1, G))


def test_membership_reducible_det_inconclusive():
    # BA = x1^2 + (1 - x1^2) = 1, but B1 A1 = x1^2 splits into two non-units
    G = [R1.parse("x1")]
    b = PolyMatrix(R1, [["x1", 1]])
    a = PolyMatrix(R1, [["x1"], ["1 - x1^2"]])
    res = membership_by_irreducible_det(b, a, G)
    assert res.det == R1.parse("x1^2")
    assert res.verdict == INCONCLUSIVE


def test_membership_precondition():
    G = sample_shape_basis(2, 2, seed=0).polys()
    b = PolyMatrix(R2, [["x1", 0], [0, 1]])
    with pytest.raises(ValueError):
        membership_by_irreducible_det(b, PolyMatrix.identity(R2, 2), G)


@pytest.mark.parametrize("seed", range(6))
def test_constructed_instances(seed):
    case = VIA_B1 if seed % 2 else VIA_A1
    B, A, G = construct_membership_instance(seed, case)
    res = membership_by_irreducible_det(B, A, G)
    assert res.verdict == case
    assert res.oracle.verdict == IRREDUCIBLE
    gcol = PolyMatrix.column(R3, G)
    if case == VIA_B1:
        assert mat_mul(B, res.A_prime).is_identity()
        assert mat_mul(res.A_prime, gcol) == mat_mul(A, gcol)
    else:
        assert mat_mul(res.B_prime, A).is_identity()
    assert not res.W.is_zero()


# -- determinant irreducibility frequency ----------------------------------------

def exact_irreducible_fraction():
    """Fraction of 2x2 matrices with entries a + b x, a, b in [-3, 3], whose det is irreducible.

    Enumerates all 7^8 matrices; det = al x^2 + be x + ga is irreducible over Q
    iff it has degree 1, or degree 2 with a non-square discriminant.
    """
    v = np.arange(-3, 4)
    g = np.stack(np.meshgrid(*([v] * 8), indexing="ij"), -1).reshape(-1, 8).astype(np.int64)
    a0, a1, b0, b1, c0, c1, d0, d1 = g.T
    al = a1 * d1 - b1 * c1
    be = a0 * d1 + a1 * d0 - b0 * c1 - b1 * c0
    ga = a0 * d0 - b0 * c0
    disc = be * be - 4 * al * ga
    root = np.round(np.sqrt(np.maximum(disc, 0))).astype(np.int64)
    square = (disc >= 0) & (root * root == disc)
    irreducible = ((al == 0) & (be != 0)) | ((al != 0) & ~square)
    return irreducible.mean()


def test_exact_fraction_matches_frozen_value():
    assert exact_irreducible_fraction() == pytest.approx(3809408 / 7 ** 8)


@pytest.mark.slow
def test_det_experiment_golden():
    report = det_irreducibility_experiment(n=2, D=1, r=1, trials=10_000, seed=0)
    counts = report["counts"]
    assert counts == {"irreducible": 6691, "reducible": 3217, "unknown": 0, "not_applicable": 92}
    assert abs(report["irreducible_fraction"] - exact_irreducible_fraction()) < 0.02


def test_det_experiment_constants():
    report = det_irreducibility_experiment(n=1, D=0, r=1, trials=50, seed=0)
    assert report["counts"]["not_applicable"] == 50


def test_det_experiment_is_seeded():
    a = det_irreducibility_experiment(trials=200, seed=4)
    assert a == det_irreducibility_experiment(trials=200, seed=4)
    assert a["config"]["seed"] == 4


def test_section_roundtrip_experiment():
    assert section_roundtrip_experiment(trials=50)["passed"] == 50
