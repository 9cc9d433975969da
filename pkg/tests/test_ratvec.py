from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tsirelson.ratvec import (
    SparseVector,
    VectorFormatError,
    finite_set,
    format_rational,
    is_block,
    parse_vector,
    restrict,
    sup_norm,
    support,
)

from .conftest import rationals, vectors

E = SparseVector.basis


class TestParse:
    def test_basis_sum(self):
        assert parse_vector("2:1 3:1") == E(2, 3)

    def test_empty_is_zero(self):
        assert parse_vector("") == SparseVector.zero()
        assert parse_vector("   ") == SparseVector.zero()

    def test_fractions(self):
        x = parse_vector("1:3/2 4:-1")
        assert x.entries == ((1, Fraction(3, 2)), (4, Fraction(-1)))

    def test_json_form(self):
        x = parse_vector('[{"pos": 1, "num": 3, "den": 2}, {"pos": 4, "num": -1, "den": 1}]')
        assert x == parse_vector("1:3/2 4:-1")

    def test_zero_coefficients_are_dropped(self):
        assert parse_vector("1:0 2:1") == E(2)

    @pytest.mark.parametrize("text", ["1", "a:1", "0:1", "-2:1", "1:1/0", "1:1 1:2", "1:1/2/3"])
    def test_rejects(self, text):
        with pytest.raises(VectorFormatError):
            parse_vector(text)

    @given(vectors())
    def test_text_round_trip(self, x):
        assert parse_vector(x.to_text()) == x

    @given(vectors())
    def test_json_round_trip(self, x):
        import json

        assert parse_vector(json.dumps(x.to_json())) == x


def test_invariants_enforced():
    with pytest.raises(ValueError):
        SparseVector(((3, Fraction(1)), (2, Fraction(1))))
    with pytest.raises(ValueError):
        SparseVector(((1, Fraction(0)),))


def test_restrict_examples():
    assert restrict(E(2, 3, 5), {3, 5}) == E(3, 5)
    assert restrict(E(2, 3), ()) == SparseVector()
    assert restrict(E(1), {2}) == SparseVector()


def test_support_examples():
    assert support(E(2, 5)) == (2, 5)
    assert support(SparseVector()) == ()
    assert support(parse_vector("1:3/2 4:-1")) == (1, 4)


def test_is_block():
    assert is_block([E(1), E(2, 3), E(5)])
    assert not is_block([E(1, 3), E(2)])
    assert is_block([E(7)])
    with pytest.raises(ValueError):
        is_block([E(1), SparseVector()])


def test_sup_norm_examples():
    assert sup_norm(E(2, 3)) == 1
    assert sup_norm(parse_vector("1:3/2 4:-1")) == Fraction(3, 2)
    assert sup_norm(SparseVector()) == 0


def test_format_rational_keeps_denominator():
    assert format_rational(2) == "2/1"
    assert format_rational(Fraction(-3, 6)) == "-1/2"


def test_finite_set():
    assert finite_set([3, 1, 3]) == (1, 3)
    with pytest.raises(ValueError):
        finite_set([0, 1])


@given(rationals, rationals, rationals)
def test_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a.denominator > 0


@given(vectors(), st.sets(st.integers(1, 12)), st.sets(st.integers(1, 12)))
def test_restrict_composes(x, E1, E2):
    assert restrict(restrict(x, E1), E2) == restrict(x, E1 & E2)


@given(vectors(), vectors(), rationals)
def test_sup_norm_is_a_norm(x, y, q):
    assert sup_norm(x + y) <= sup_norm(x) + sup_norm(y)
    assert sup_norm(x.scale(q)) == abs(q) * sup_norm(x)


@given(vectors(), vectors())
def test_vector_arithmetic(x, y):
    assert x + y - y == x
    assert (x - x) == SparseVector()
    assert x.dot(y) == y.dot(x)
