"""Tree, symmetric-difference, Hamming and Johnson metrics on finite subsets of N.

Points are sorted tuples of positive integers.  The Hamming and Johnson
graphs live on k-subsets, the tree graph on subsets of size at most k; the
BFS helpers below run on the finite subgraph spanned by an alphabet.
"""
from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .ratvec import FiniteSet, finite_set

FinitePoint = FiniteSet


class Kind(str, enum.Enum):
    TREE = "tree"
    SYMDIFF = "symdiff"
    HAMMING = "hamming"
    JOHNSON = "johnson"


@dataclass(frozen=True)
class MetricKind:
    kind: Kind
    scale: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    def distance(self, m: FinitePoint, n: FinitePoint) -> Fraction:
        return self.scale * DISTANCES[self.kind](m, n)


class Unreachable(LookupError):
    pass


def parse_point(text: str) -> FinitePoint:
    """``"1,3,5"`` -> (1, 3, 5); the empty string is the empty set."""
    text = text.strip()
    if not text:
        return ()
    values = [int(t) for t in text.split(",")]
    if any(b <= a for a, b in zip(values, values[1:])) or values[0] < 1:
        raise ValueError(f"point {text!r} is not a strictly increasing list of positive integers")
    return tuple(values)


def format_point(p: FinitePoint) -> str:
    return ",".join(map(str, p))


def parse_alphabet(text: str) -> FiniteSet:
    """``"lo..hi"`` (inclusive) or a comma-separated list."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return finite_set(range(int(lo), int(hi) + 1))
    return finite_set(int(t) for t in text.split(",") if t.strip())


def common_prefix(m: FinitePoint, n: FinitePoint) -> int:
    length = 0
    for a, b in zip(m, n):
        if a != b:
            break
        length += 1
    return length


def d_tree(m: FinitePoint, n: FinitePoint) -> int:
    return len(m) + len(n) - 2 * common_prefix(m, n)


def d_symdiff(m: FinitePoint, n: FinitePoint) -> int:
    return len(set(m).symmetric_difference(n))


def d_hamming(m: FinitePoint, n: FinitePoint) -> int:
    return sum(1 for a, b in zip(m, n) if a != b) + abs(len(m) - len(n))


def d_johnson(m: FinitePoint, n: FinitePoint) -> int:
    if len(m) != len(n):
        raise ValueError("the Johnson metric compares sets of equal cardinality")
    return d_symdiff(m, n) // 2


DISTANCES = {
    Kind.TREE: d_tree,
    Kind.SYMDIFF: d_symdiff,
    Kind.HAMMING: d_hamming,
    Kind.JOHNSON: d_johnson,
}


def enumerate_points(alphabet: Iterable[int], k: int, up_to: bool = False) -> list[FinitePoint]:
    """All k-subsets (or all subsets of size <= k) of the alphabet, lexicographically."""
    if k < 0:
        raise ValueError("k must be >= 0")
    letters = finite_set(alphabet)
    sizes = range(k + 1) if up_to else (k,)
    return sorted(p for r in sizes for p in itertools.combinations(letters, r))


def neighbors(p: FinitePoint, kind: Kind, alphabet: Iterable[int], height: int | None = None) -> list[FinitePoint]:
    """Adjacent vertices of ``p`` inside the graph spanned by ``alphabet``.

    Johnson: swap one element.  Hamming: change one coordinate of the
    increasing tuple, keeping it increasing.  Tree: the immediate
    predecessor and the one-point extensions (up to ``height``, if given).
    """
    letters = finite_set(alphabet)
    if not set(p) <= set(letters):
        raise ValueError(f"point {p} is not inside the alphabet")
    kind = Kind(kind)
    out: set[FinitePoint] = set()
    if kind is Kind.JOHNSON:
        inside = set(p)
        for a in p:
            for b in letters:
                if b not in inside:
                    out.add(tuple(sorted(inside - {a} | {b})))
    elif kind is Kind.HAMMING:
        for i in range(len(p)):
            lo = p[i - 1] if i > 0 else 0
            hi = p[i + 1] if i + 1 < len(p) else None
            for b in letters:
                if b != p[i] and b > lo and (hi is None or b < hi):
                    out.add(p[:i] + (b,) + p[i + 1:])
    elif kind is Kind.TREE:
        if p:
            out.add(p[:-1])
        if height is None or len(p) < height:
            last = p[-1] if p else 0
            out.update(p + (b,) for b in letters if b > last)
    else:
        raise ValueError("the symmetric-difference metric has no graph structure here")
    return sorted(out)


def bfs_distances(source: FinitePoint, kind: Kind, alphabet: Iterable[int], height: int | None = None) -> dict[FinitePoint, int]:
    letters = finite_set(alphabet)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in neighbors(v, kind, letters, height):
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def bfs_distance(p: FinitePoint, q: FinitePoint, kind: Kind, alphabet: Iterable[int], height: int | None = None) -> int:
    dist = bfs_distances(p, kind, alphabet, height)
    if q not in dist:
        raise Unreachable(f"{q} is not reachable from {p} inside the alphabet")
    return dist[q]


@dataclass
class GraphCheck:
    kind: Kind
    k: int
    alphabet: FiniteSet
    pairs: int = 0
    agree: int = 0
    # pairs with no path inside the alphabet
    excluded: list[tuple[FinitePoint, FinitePoint]] = field(default_factory=list)
    mismatches: list[tuple[FinitePoint, FinitePoint, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def graph_check(kind: Kind, k: int, alphabet: Iterable[int]) -> GraphCheck:
    """Compare BFS distances on the finite graph with the closed-form metric, over all pairs."""
    kind = Kind(kind)
    letters = finite_set(alphabet)
    tree = kind is Kind.TREE
    vertices = enumerate_points(letters, k, up_to=tree)
    formula = DISTANCES[kind]
    report = GraphCheck(kind, k, letters)
    for p in vertices:
        dist = bfs_distances(p, kind, letters, k if tree else None)
        for q in vertices:
            if q <= p:
                continue
            report.pairs += 1
            if q not in dist:
                report.excluded.append((p, q))
                continue
            want = formula(p, q)
            if dist[q] == want:
                report.agree += 1
            else:
                report.mismatches.append((p, q, dist[q], want))
    return report


def diameter(points: list[FinitePoint], kind: Kind) -> int:
    formula = DISTANCES[Kind(kind)]
    return max((formula(a, b) for a, b in itertools.combinations(points, 2)), default=0)


def iter_pairs(points: list[FinitePoint]) -> Iterator[tuple[FinitePoint, FinitePoint]]:
    return itertools.combinations(points, 2)
