import random

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import R2, from_sympy, polys, to_sympy
from idealgen.field import FieldConfig
from idealgen.poly import Ring
from idealgen.polymat import (
    BlockSplit, DimensionError, ElementaryOp, PolyMatrix, adjugate, apply_elementary, bruhat_compose,
    det_bareiss, det_cofactor, inverse_of_elementary, inverse_regular, left_inverse_from_trace, mat_det,
    mat_mul, matrix_from_trace, permutation_matrix, product_from_trace, unitriangular_inverse,
)
from idealgen.shape import CoeffDistribution, random_poly

DIST = CoeffDistribution("int", -3, 3, zero_weight=0.4)


def rand_matrix(ring, rows, cols, deg, rng):
    return PolyMatrix(ring, [[random_poly(ring, deg, DIST, rng) for _ in range(cols)] for _ in range(rows)])


def rand_ops(ring, m, count, rng):
    ops = []
    for _ in range(count):
        kind = rng.choice(["permute", "scale", "addrow"])
        i, j = rng.sample(range(m), 2)
        if kind == "permute":
            ops.append(ElementaryOp.permute(m, i, j))
        elif kind == "scale":
            ops.append(ElementaryOp.scale_row(m, i, ring.field(rng.choice([-2, -1, 2, 3]))))
        else:
            ops.append(ElementaryOp.addrow(m, i, j, random_poly(ring, 1, DIST, rng) + ring.gen(0)))
    return ops


def test_small_determinant():
    x = R2.gen(0)
    m = PolyMatrix(R2, [[x, 1], [-1, x]])
    assert det_bareiss(m) == det_cofactor(m) == x ** 2 + 1


def test_det_identity_and_zero():
    assert det_bareiss(PolyMatrix.identity(R2, 3)) == R2.one()
    assert not det_bareiss(PolyMatrix.zeros(R2, 3, 3))


def test_det_needs_pivot_swap():
    m = PolyMatrix(R2, [[0, 1, 0], [1, 0, 0], [0, 0, "x1"]])
    assert det_bareiss(m) == -R2.gen(0)


@pytest.mark.parametrize("seed", range(20))
def test_det_against_sympy(seed):
    rng = random.Random(seed)
    size = rng.randint(1, 4)
    m = rand_matrix(R2, size, size, 2, rng)
    expected = sympy.Matrix([[to_sympy(e) for e in row] for row in m.entries]).det(method="berkowitz")
    assert det_bareiss(m) == from_sympy(sympy.expand(expected), R2)


def test_det_over_fp():
    ring = Ring(2, FieldConfig.prime(5))
    rng = random.Random(1)
    for _ in range(20):
        m = rand_matrix(ring, 3, 3, 1, rng)
        assert det_bareiss(m) == det_cofactor(m)


@pytest.mark.parametrize("seed", range(10))
def test_det_multiplicative(seed):
    rng = random.Random(seed)
    a, b = rand_matrix(R2, 3, 3, 1, rng), rand_matrix(R2, 3, 3, 1, rng)
    assert mat_det(mat_mul(a, b)) == mat_det(a) * mat_det(b)


def test_det_rejects_non_square():
    with pytest.raises(DimensionError):
        mat_det(PolyMatrix.zeros(R2, 2, 3))
    with pytest.raises(ValueError):
        mat_det(PolyMatrix.identity(R2, 2), "lu")


def test_adjugate_identity():
    rng = random.Random(3)
    m = rand_matrix(R2, 3, 3, 1, rng)
    d = det_bareiss(m)
    assert mat_mul(m, adjugate(m)) == PolyMatrix(R2, [[d if i == j else 0 for j in range(3)] for i in range(3)])


def test_inverse_regular():
    x1, x2 = R2.gens()
    u = PolyMatrix(R2, [[1, x1 * x2], [0, 2]])
    assert mat_mul(u, inverse_regular(u)).is_identity()
    with pytest.raises(ValueError):
        inverse_regular(PolyMatrix(R2, [[x1, 0], [0, 1]]))


def test_elementary_semantics():
    m = PolyMatrix(R2, [["x1"], ["x2"], ["1"]])
    add = ElementaryOp.addrow(3, 2, 0, R2.gen(1))
    assert apply_elementary(add, m).column_list() == [R2.gen(0), R2.gen(1), R2.gen(0) * R2.gen(1) + 1]
    swap = ElementaryOp.permute(3, 0, 1)
    assert apply_elementary(swap, m).column_list()[:2] == [R2.gen(1), R2.gen(0)]
    sc = ElementaryOp.scale_row(3, 1, R2.field(5))
    assert apply_elementary(sc, m)[1, 0] == 5 * R2.gen(1)


def test_elementary_validation():
    with pytest.raises(ValueError):
        ElementaryOp.permute(3, 1, 1)
    with pytest.raises(ValueError):
        ElementaryOp.scale_row(3, 0, 0)
    with pytest.raises(ValueError):
        ElementaryOp.addrow(3, 0, 3, R2.one())


@given(st.integers(0, 10_000))
def test_left_and_right_action_match_explicit_product(seed):
    rng = random.Random(seed)
    m = rng.randint(2, 4)
    op = rand_ops(R2, m, 1, rng)[0]
    x = rand_matrix(R2, m, m, 1, rng)
    e = op.matrix(R2)
    assert apply_elementary(op, x) == mat_mul(e, x)
    assert apply_elementary(op, x, side="right") == mat_mul(x, e)
    inv = inverse_of_elementary(op, R2.field)
    assert mat_mul(e, inv.matrix(R2)).is_identity()
    assert mat_det(e) == R2.const(op.det(R2.field))


@given(st.integers(0, 10_000))
def test_trace_reconstruction(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    m = rng.randint(max(n, 2), 4)
    ops = rand_ops(R2, m, rng.randint(0, 6), rng)
    u = product_from_trace(ops, R2, m)
    explicit = PolyMatrix.identity(R2, m)
    for op in ops:
        explicit = mat_mul(explicit, op.matrix(R2))
    assert u == explicit
    a = matrix_from_trace(ops, R2, m, n)
    assert a == mat_mul(u, PolyMatrix.stacked_identity(R2, m, n))
    b = left_inverse_from_trace(ops, R2, m, n)
    assert mat_mul(b, a).is_identity()


def test_left_inverse_single_addrow():
    op = ElementaryOp.addrow(3, 2, 0, R2.gen(0))
    b = left_inverse_from_trace([op], R2, 3, 2)
    assert b == PolyMatrix.padded_identity(R2, 2, 3)


def test_unitriangular_inverse():
    rng = random.Random(5)
    u = PolyMatrix(R2, [[1 if i == j else 0 if j < i else random_poly(R2, 1, DIST, rng)
                         for j in range(4)] for i in range(4)])
    assert mat_mul(u, unitriangular_inverse(u)).is_identity()
    with pytest.raises(ValueError):
        unitriangular_inverse(PolyMatrix(R2, [[1, 0], [1, 1]]))


def test_permutation_matrix_action():
    perm = [2, 0, 1]
    m = PolyMatrix(R2, [["x1"], ["x2"], ["1"]])
    assert mat_mul(permutation_matrix(R2, perm), m) == m.permute_rows(perm)


@pytest.mark.parametrize("seed", range(10))
def test_bruhat_left_inverse(seed):
    rng = random.Random(seed)
    m, n = 4, 2
    u1 = PolyMatrix(R2, [[1 if i == j else 0 if j < i else random_poly(R2, 1, DIST, rng)
                          for j in range(m)] for i in range(m)])
    u2 = PolyMatrix(R2, [[1 if i == j else 0 if j < i else random_poly(R2, 1, DIST, rng)
                          for j in range(n)] for i in range(n)])
    perm = list(range(m))
    rng.shuffle(perm)
    a, b = bruhat_compose(u1, perm, u2)
    stacked = u2.vstack(PolyMatrix.zeros(R2, m - n, n))
    assert a == mat_mul(mat_mul(u1, permutation_matrix(R2, perm)), stacked)
    assert mat_mul(b, a).is_identity()


def test_block_split():
    rng = random.Random(0)
    b, a = rand_matrix(R2, 2, 4, 1, rng), rand_matrix(R2, 4, 2, 1, rng)
    blocks = BlockSplit.of(b, a)
    assert blocks.reassemble() == (b, a)
    assert mat_mul(b, a) == mat_mul(blocks.B1, blocks.A1) + blocks.b2a2()
    square = BlockSplit.of(PolyMatrix.identity(R2, 2), PolyMatrix.identity(R2, 2))
    assert square.B2 is None and square.b2a2().is_zero()


def test_json_roundtrip():
    rng = random.Random(2)
    m = rand_matrix(R2, 2, 3, 2, rng)
    assert PolyMatrix.from_json(R2, m.to_json()) == m


def test_dimension_errors():
    with pytest.raises(DimensionError):
        mat_mul(PolyMatrix.zeros(R2, 2, 3), PolyMatrix.zeros(R2, 2, 3))
    with pytest.raises(DimensionError):
        PolyMatrix(R2, [[1, 2], [3]])


@given(polys(R2), polys(R2), polys(R2), polys(R2))
def test_det_2x2_formula(a, b, c, d):
    m = PolyMatrix(R2, [[a, b], [c, d]])
    assert det_bareiss(m) == a * d - b * c
