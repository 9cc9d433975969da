from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsirelson.ratvec import SparseVector, l1_norm, parse_vector, sup_norm
from tsirelson.tnorm import (
    TRIVIAL,
    Leaf,
    Node,
    SupportTooLarge,
    evaluate_functional,
    functional_from_json,
    functional_to_json,
    functional_vector,
    is_admissible,
    t_norm,
    t_norm_bruteforce,
    t_norm_level,
    validate_functional,
)

from .conftest import rationals, vectors

E = SparseVector.basis
half = Fraction(1, 2)


@pytest.mark.parametrize(
    "pieces, expected",
    [([(2,), (3,)], True), ([(1,), (2,)], False), ([(3,), (5, 6), (9,)], True), ([(2, 4), (3,)], False), ([()], False)],
)
def test_is_admissible(pieces, expected):
    assert is_admissible(pieces) is expected


# frozen values below were produced by t_norm_bruteforce (arbitrary admissible set families)
@pytest.mark.parametrize(
    "x, expected",
    [
        (E(5), Fraction(1)),
        (E(2, 3), Fraction(1)),
        (E(3, 4, 5), Fraction(3, 2)),
        (E(2, 3, 4, 5), Fraction(3, 2)),
        (E(1, 2, 3), Fraction(1)),
        (parse_vector("2:1 5:1 6:1"), Fraction(1)),
        (SparseVector(), Fraction(0)),
    ],
)
def test_t_norm_values(x, expected):
    assert t_norm(x)[0] == expected
    assert t_norm_bruteforce(x) == expected


def test_zero_vector_certificate():
    value, cert = t_norm(SparseVector())
    assert value == 0 and cert == TRIVIAL and validate_functional(cert)


def test_level_norms():
    x = E(3, 4, 5)
    assert t_norm_level(x, 0) == 1
    assert t_norm_level(x, 1) == Fraction(3, 2)
    with pytest.raises(ValueError):
        t_norm_level(x, -1)


def test_bruteforce_cap():
    assert t_norm_bruteforce(SparseVector()) == 0
    with pytest.raises(SupportTooLarge):
        t_norm_bruteforce(E(*range(1, 9)))


def test_evaluate_functional_examples():
    assert evaluate_functional(Leaf(2, 1), E(2, 3)) == 1
    assert evaluate_functional(Node((Leaf(2), Leaf(3))), E(2, 3)) == 1
    assert evaluate_functional(Node((Leaf(3), Leaf(4), Leaf(5))), E(3, 4, 5)) == Fraction(3, 2)


def test_validate_functional_examples():
    assert validate_functional(Node((Leaf(2), Leaf(3))))
    assert not validate_functional(Node((Leaf(1), Leaf(2))))
    assert validate_functional(Leaf(1, -1))
    # children out of order
    assert not validate_functional(Node((Leaf(3), Leaf(2))))
    # overlapping children
    assert not validate_functional(Node((Node((Leaf(3), Leaf(5))), Leaf(4))))


def test_functional_json_round_trip():
    f = Node((Leaf(3, -1), Node((Leaf(4), Leaf(5)))))
    assert functional_from_json(functional_to_json(f)) == f
    assert functional_vector(f) == parse_vector("3:-1/2 4:1/4 5:1/4")


def test_growth_probe():
    for n in range(2, 7):
        assert t_norm(E(*range(n, 2 * n)))[0] >= Fraction(n, 2)


@given(vectors())
def test_certificate_soundness(x):
    value, cert = t_norm(x)
    assert evaluate_functional(cert, x) == value
    assert validate_functional(cert)


@given(vectors(), rationals)
def test_homogeneity(x, q):
    assert t_norm(x.scale(q))[0] == abs(q) * t_norm(x)[0]


@given(vectors(max_support=5), vectors(max_support=5))
def test_triangle(x, y):
    assert t_norm(x + y)[0] <= t_norm(x)[0] + t_norm(y)[0]


@given(vectors(), st.lists(st.booleans(), min_size=7, max_size=7))
def test_sign_invariance(x, flips):
    flipped = SparseVector(tuple((p, -c if f else c) for (p, c), f in zip(x.entries, flips)))
    assert t_norm(flipped)[0] == t_norm(x)[0]


@given(vectors(), st.data())
def test_monotone_under_domination(x, data):
    # shrink each coefficient towards zero
    shrunk = SparseVector.from_mapping(
        {p: c * data.draw(st.fractions(0, 1, max_denominator=4)) for p, c in x.entries}
    )
    assert t_norm(shrunk)[0] <= t_norm(x)[0]


@given(vectors())
def test_sandwich(x):
    v = t_norm(x)[0]
    assert sup_norm(x) <= v <= l1_norm(x)


@given(vectors())
def test_levels_increase_and_stabilize(x):
    levels = [t_norm_level(x, k) for k in range(len(x) + 2)]
    assert levels == sorted(levels)
    assert all(v == t_norm(x)[0] for v in levels[max(len(x), 1):])


@settings(max_examples=60, deadline=None)
@given(vectors())
def test_matches_bruteforce(x):
    assert t_norm(x)[0] == t_norm_bruteforce(x)
