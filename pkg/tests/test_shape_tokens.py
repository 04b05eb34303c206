import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from conftest import R2, R3, polys
from idealgen.field import QQ, FieldConfig
from idealgen.groebner import reduced_groebner
from idealgen.poly import Ring
from idealgen.shape import (
    CoeffDistribution, ShapeConfig, is_shape_position, random_poly, sample_shape_basis,
)
from idealgen.tokens import IO, SEP, decode_pair, decode_poly, encode_pair, encode_poly, encode_system

FP = FieldConfig.prime(32003)


@given(st.integers(1, 3), st.integers(1, 5), st.integers(0, 2 ** 32))
def test_shape_basis_is_its_own_reduced_basis(n, d, seed):
    basis = sample_shape_basis(n, d, seed=seed)
    G = basis.polys()
    assert is_shape_position(G)
    assert list(reduced_groebner(G)) == G
    assert len(basis.free_coefficients()) == n * d
    assert basis.gn.degree() == d
    assert all(h.degree() < d for h in basis.h if h)


def test_shape_basis_fp():
    basis = sample_shape_basis(3, 4, seed=1, field=FP)
    assert list(reduced_groebner(basis.polys())) == basis.polys()


def test_standard_monomials():
    basis = sample_shape_basis(2, 3, seed=0)
    assert basis.standard_monomials() == [(0, 0), (0, 1), (0, 2)]


def test_shape_sampling_is_seeded():
    assert sample_shape_basis(3, 3, seed=9).polys() == sample_shape_basis(3, 3, seed=9).polys()


def test_shape_errors():
    with pytest.raises(ValueError):
        sample_shape_basis(0, 2)
    with pytest.raises(ValueError):
        sample_shape_basis(2, 0)
    with pytest.raises(ValueError):
        ShapeConfig(3, 2)


def test_n_equals_one():
    basis = sample_shape_basis(1, 3, seed=4)
    assert basis.polys() == [basis.gn]
    assert is_shape_position(basis.polys())


def test_not_shape_position():
    assert not is_shape_position([R2.parse("x1^2 - x2"), R2.parse("x2^3 - 1")])
    assert not is_shape_position([R2.parse("x1 - x2^3"), R2.parse("x2^3 - 1")])
    assert not is_shape_position([R2.parse("x1 - x2"), R2.parse("2*x2^2 - 1")])
    assert not is_shape_position([])


def test_zero_weight_frequency():
    rng = random.Random(0)
    dist = CoeffDistribution("int", -5, 5, zero_weight=0.3)
    draws = [dist.sample(rng) for _ in range(20_000)]
    assert abs(draws.count(0) / len(draws) - 0.3) < 0.02


def test_distribution_ranges():
    rng = random.Random(1)
    dist = CoeffDistribution("rational", -2, 2, den_hi=3, zero_weight=None)
    for _ in range(500):
        c = dist.sample(rng)
        assert c.denominator in (1, 2, 3) and abs(c) <= 2
    fd = CoeffDistribution("field")
    assert all(0 <= fd.sample(rng, FP) < 32003 for _ in range(100))
    with pytest.raises(ValueError):
        fd.sample(rng, QQ)
    with pytest.raises(ValueError):
        CoeffDistribution("int", 3, 1)


def test_shape_config_draws_d_uniformly():
    cfg = ShapeConfig(1, 3)
    counts = Counter(cfg.sample(2, seed).d for seed in range(3000))
    assert set(counts) == {1, 2, 3}
    assert min(counts.values()) > 850


def test_random_poly_degree():
    rng = random.Random(2)
    for _ in range(50):
        assert random_poly(R3, 2, CoeffDistribution(), rng).degree() <= 2


# -- tokens -----------------------------------------------------------------

def test_encode_example():
    assert encode_poly(R2.parse("3*x1^2 - 1/2")) == ["+", "*", "C3", "^", "x1", "C2", "/", "C-1", "C2"]
    assert encode_poly(R2.zero()) == ["C0"]


@given(polys(R3))
def test_token_roundtrip(f):
    assert decode_poly(encode_poly(f), R3) == f


@given(polys(Ring(2, FP)))
def test_token_roundtrip_fp(f):
    ring = Ring(2, FP)
    assert decode_poly(encode_poly(f), ring) == f


def test_pair_roundtrip():
    F = [R2.parse("x1 + 1"), R2.parse("x2^2")]
    G = [R2.parse("x1 - x2")]
    toks = encode_pair(F, G)
    assert toks.count(IO) == 1 and toks.count(SEP) == 1
    assert decode_pair(toks, R2) == (F, G)
    assert SEP in encode_system(F)


def test_decode_errors():
    with pytest.raises(ValueError):
        decode_poly(["+", "x1"], R2)
    with pytest.raises(ValueError):
        decode_poly(["x1", "x2"], R2)
    with pytest.raises(ValueError):
        decode_poly(["^", "x1", "x2"], R2)
