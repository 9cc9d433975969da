import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tsirelson.metrics import (
    DISTANCES,
    Kind,
    MetricKind,
    Unreachable,
    bfs_distance,
    d_hamming,
    d_johnson,
    d_symdiff,
    d_tree,
    diameter,
    enumerate_points,
    format_point,
    graph_check,
    neighbors,
    parse_alphabet,
    parse_point,
)

points = st.sets(st.integers(1, 9), max_size=4).map(lambda s: tuple(sorted(s)))


@pytest.mark.parametrize(
    "f, m, n, expected",
    [
        (d_tree, (1, 2), (1, 3, 4), 3),
        (d_tree, (1, 2), (1, 2), 0),
        (d_tree, (), (5, 6), 2),
        (d_symdiff, (1, 2), (2, 3), 2),
        (d_symdiff, (1,), (), 1),
        (d_hamming, (1, 3, 5), (1, 4, 5), 1),
        (d_hamming, (1, 2), (1, 2, 9), 1),
        (d_hamming, (4,), (4,), 0),
        (d_johnson, (1, 2), (2, 3), 1),
        (d_johnson, (1, 2, 3), (4, 5, 6), 3),
        (d_johnson, (1, 2, 3), (1, 2, 3), 0),
    ],
)
def test_distance_examples(f, m, n, expected):
    assert f(m, n) == expected


def test_johnson_needs_equal_sizes():
    with pytest.raises(ValueError):
        d_johnson((1,), (1, 2))


def test_scaled_metric():
    assert MetricKind(Kind.JOHNSON, 3).distance((1, 2), (3, 4)) == 6


def test_parsing():
    assert parse_point("1,3,5") == (1, 3, 5)
    assert parse_point("") == ()
    assert format_point((1, 3)) == "1,3"
    assert parse_alphabet("2..5") == (2, 3, 4, 5)
    assert parse_alphabet("7,3") == (3, 7)


class TestNeighbors:
    def test_johnson(self):
        assert neighbors((1, 2), Kind.JOHNSON, range(1, 5)) == [(1, 3), (1, 4), (2, 3), (2, 4)]

    def test_tree(self):
        assert neighbors((1,), Kind.TREE, (1, 2)) == [(), (1, 2)]

    def test_hamming_keeps_increasing_order(self):
        # (2, 3) differs from (1, 2) in both coordinates, so it is at d_H = 2
        assert neighbors((1, 2), Kind.HAMMING, (1, 2, 3)) == [(1, 3)]
        alphabet = range(1, 4)
        at_one = [q for q in enumerate_points(alphabet, 2) if d_hamming((1, 2), q) == 1]
        assert at_one == [(1, 3)]

    def test_outside_alphabet(self):
        with pytest.raises(ValueError):
            neighbors((1, 9), Kind.JOHNSON, range(1, 5))


def test_bfs_examples():
    assert bfs_distance((1, 2), (3, 4), Kind.JOHNSON, range(1, 6)) == 2
    assert bfs_distance((1, 2), (3, 4), Kind.HAMMING, range(1, 6)) == 2
    assert bfs_distance((), (1, 2), Kind.TREE, (1, 2)) == 2


def test_bfs_unreachable():
    # with height 1 the tree never reaches a two-element node
    with pytest.raises(Unreachable):
        bfs_distance((1,), (2, 3), Kind.TREE, (1, 2, 3), height=1)


def test_enumerate_points():
    assert enumerate_points((1, 2, 3), 2) == [(1, 2), (1, 3), (2, 3)]
    assert enumerate_points((1, 2, 3), 0) == [()]
    assert enumerate_points((1, 2), 2, up_to=True) == [(), (1,), (1, 2), (2,)]


@pytest.mark.parametrize("kind", [Kind.JOHNSON, Kind.HAMMING, Kind.TREE])
def test_graph_check_small(kind):
    report = graph_check(kind, 2, range(1, 6))
    assert report.ok and report.pairs > 0 and not report.excluded


def test_hamming_diameter():
    for k in range(1, 4):
        assert diameter(enumerate_points(range(1, 2 * k + 1), k), Kind.HAMMING) == k


@given(points, points, points)
def test_axioms(a, b, c):
    for kind, f in DISTANCES.items():
        if kind is Kind.JOHNSON:
            continue
        assert f(a, b) == f(b, a) >= 0
        assert (f(a, b) == 0) == (a == b)
        assert f(a, c) <= f(a, b) + f(b, c)


def test_johnson_axioms_exhaustive():
    pts = enumerate_points(range(1, 6), 2)
    for a, b, c in itertools.product(pts, repeat=3):
        assert d_johnson(a, c) <= d_johnson(a, b) + d_johnson(b, c)


@given(points, points)
def test_symdiff_parity(a, b):
    # |A ^ B| has the parity of |A| + |B|
    assert d_symdiff(a, b) % 2 == (len(a) + len(b)) % 2
    if len(a) == len(b):
        assert d_symdiff(a, b) == 2 * d_johnson(a, b)
