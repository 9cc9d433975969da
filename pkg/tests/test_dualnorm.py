from fractions import Fraction

import pytest
from hypothesis import given, settings

from tsirelson.dualnorm import (
    PreconditionError,
    check_block_inequality,
    positive_norming_set,
    tstar_norm,
    tstar_norm_bruteforce,
)
from tsirelson.ratvec import SparseVector, l1_norm, parse_vector, sup_norm
from tsirelson.tnorm import t_norm, validate_functional

from .conftest import random_vector, vectors

E = SparseVector.basis


@pytest.mark.parametrize(
    "text, expected",
    [("5:1", 1), ("2:1 3:1", 2), ("2:1 3:-1", 2), ("1:1", 1), ("3:1/2", Fraction(1, 2)), ("", 0)],
)
def test_values_agree_with_enumeration(text, expected):
    x = parse_vector(text)
    assert tstar_norm(x)[0] == expected
    assert tstar_norm_bruteforce(x) == expected


def test_witness_attains_value():
    x = parse_vector("2:1 3:-1 4:1/2")
    value, cert = tstar_norm(x)
    assert x.dot(cert.primal_witness) == value
    assert t_norm(cert.primal_witness)[0] <= 1
    assert all(validate_functional(f) for f in cert.constraint_set)


def test_bruteforce_cap():
    with pytest.raises(PreconditionError):
        tstar_norm_bruteforce(E(7))


def test_norming_set_sizes():
    # counted independently by hand for small intervals
    assert len(positive_norming_set(1, 1)) == 1
    assert len(positive_norming_set(1, 2)) == 2
    assert len(positive_norming_set(1, 3)) == 4
    assert len(positive_norming_set(2, 3)) == 3


class TestBlockInequality:
    def test_tight_pair(self):
        assert check_block_inequality([E(2), E(3)]) == (2, True)

    def test_three_pieces(self):
        value, ok = check_block_inequality([E(3), E(4), E(5)])
        assert ok and value <= 2

    def test_single(self):
        assert check_block_inequality([E(1)]) == (1, True)

    def test_longer_blocks(self):
        value, ok = check_block_inequality([parse_vector("2:1/2 3:1/2"), parse_vector("4:1/2 6:-1/2")])
        assert ok

    @pytest.mark.parametrize(
        "pieces, reason",
        [
            ([], "empty"),
            ([E(3), E(2)], "successive"),
            ([E(1), E(2)], "admissible"),
            ([E(2), E(3).scale(3)], "unit ball"),
            ([E(2), SparseVector()], "zero"),
        ],
    )
    def test_preconditions(self, pieces, reason):
        with pytest.raises(PreconditionError, match=reason):
            check_block_inequality(pieces)


@settings(max_examples=40, deadline=None)
@given(vectors(max_support=5, max_position=6))
def test_oracle_agreement(x):
    assert tstar_norm(x)[0] == tstar_norm_bruteforce(x)


@settings(max_examples=40, deadline=None)
@given(vectors(max_support=5, max_position=9))
def test_between_sup_and_l1(x):
    # the primal norm lies between sup and l1, so the dual lies between them too
    assert sup_norm(x) <= tstar_norm(x)[0] <= l1_norm(x)


def test_duality_bracket(rng):
    for _ in range(100):
        xs = random_vector(rng, 5, 9)
        x = random_vector(rng, 5, 9)
        assert abs(xs.dot(x)) <= tstar_norm(xs)[0] * t_norm(x)[0]


def test_unconditional(rng):
    for _ in range(30):
        xs = random_vector(rng, 5, 9)
        flipped = SparseVector(tuple((p, c if rng.random() < 0.5 else -c) for p, c in xs.entries))
        assert tstar_norm(flipped)[0] == tstar_norm(xs)[0]


@given(vectors(max_support=4, max_position=8), vectors(max_support=4, max_position=8))
@settings(max_examples=30, deadline=None)
def test_triangle(x, y):
    assert tstar_norm(x + y)[0] <= tstar_norm(x)[0] + tstar_norm(y)[0]


def test_sign_patterns_for_small_n():
    for n in range(2, 5):
        for bits in range(2 ** n):
            x = SparseVector.from_mapping({n + j: (-1 if bits >> j & 1 else 1) for j in range(n)})
            assert tstar_norm(x)[0] <= 2
