"""The Figiel-Johnson norm on finitely supported vectors.

``t_norm`` solves the implicit equation

    ||x|| = max(||x||_0, 1/2 * sup sum_j ||E_j x||),  (E_j) admissible,

by a memoized dynamic program over intervals of the support.  Admissible
pieces are taken to be intervals: the norm is 1-unconditional and monotone
in the moduli of the coefficients, so replacing every piece by its interval
hull can only increase the sum and leaves ``min E_1`` untouched.
``t_norm_bruteforce`` enumerates arbitrary set partitions instead and is
kept independent of that argument so it can validate it.

Every computed value comes with a :class:`NormFunctional`, a tree-shaped
element of the norming set that evaluates to the norm on ``x``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .ratvec import FiniteSet, SparseVector

HALF = Fraction(1, 2)
BRUTEFORCE_CAP = 7


class SupportTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Leaf:
    position: int
    sign: int = 1

    def __post_init__(self) -> None:
        if self.position < 1 or self.sign not in (1, -1):
            raise ValueError(f"bad leaf ({self.position}, {self.sign})")


@dataclass(frozen=True)
class Node:
    children: tuple[NormFunctional, ...] = ()


NormFunctional = Union[Leaf, Node]

#: certificate attached to the zero vector
TRIVIAL = Node(())


def functional_support(f: NormFunctional) -> FiniteSet:
    if isinstance(f, Leaf):
        return (f.position,)
    return tuple(sorted({p for c in f.children for p in functional_support(c)}))


def functional_vector(f: NormFunctional) -> SparseVector:
    """Coefficient vector of ``f``: a leaf is +-e*_j, a node halves the sum of its children."""
    if isinstance(f, Leaf):
        return SparseVector(((f.position, Fraction(f.sign)),))
    acc = SparseVector()
    for c in f.children:
        acc = acc + functional_vector(c)
    return acc.scale(HALF)


def evaluate_functional(f: NormFunctional, x: SparseVector) -> Fraction:
    if isinstance(f, Leaf):
        return f.sign * x[f.position]
    return HALF * sum((evaluate_functional(c, x) for c in f.children), Fraction(0))


def validate_functional(f: NormFunctional) -> bool:
    """Check block ordering and admissibility at every node."""
    if isinstance(f, Leaf):
        return True
    supports = []
    for c in f.children:
        if not validate_functional(c):
            return False
        s = functional_support(c)
        if not s:
            return False
        supports.append(s)
    if any(a[-1] >= b[0] for a, b in zip(supports, supports[1:])):
        return False
    return not supports or len(supports) <= supports[0][0]


def functional_to_text(f: NormFunctional) -> str:
    if isinstance(f, Leaf):
        return f"{'+' if f.sign > 0 else '-'}e*{f.position}"
    return "1/2[" + ", ".join(functional_to_text(c) for c in f.children) + "]"


def functional_to_json(f: NormFunctional) -> dict:
    if isinstance(f, Leaf):
        return {"leaf": {"pos": f.position, "sign": f.sign}}
    return {"node": [functional_to_json(c) for c in f.children]}


def functional_from_json(data: dict) -> NormFunctional:
    if "leaf" in data:
        return Leaf(int(data["leaf"]["pos"]), int(data["leaf"]["sign"]))
    return Node(tuple(functional_from_json(c) for c in data["node"]))


def is_admissible(pieces: list[FiniteSet]) -> bool:
    if any(len(E) == 0 for E in pieces):
        return False
    if any(max(a) >= min(b) for a, b in zip(pieces, pieces[1:])):
        return False
    return not pieces or len(pieces) <= min(pieces[0])


# interval dynamic program ----------------------------------------------


class _IntervalSolver:
    """Norms of the sub-vectors ``x[i..j]`` (indices into the support).

    ``level=None`` solves the implicit equation; an integer ``k`` gives the
    inductive norm ``||.||_k``.
    """

    def __init__(self, positions: tuple[int, ...], values: tuple[Fraction, ...]):
        self.pos = positions
        self.val = values
        self._norm: dict[tuple, tuple[Fraction, tuple]] = {}
        self._part: dict[tuple, tuple[Fraction, tuple]] = {}

    def norm(self, i: int, j: int, level: int | None = None) -> tuple[Fraction, tuple]:
        """Return (value, plan); a plan is ("leaf", idx) or ("node", ((u, v, level), ...))."""
        key = (i, j, level)
        hit = self._norm.get(key)
        if hit is not None:
            return hit
        if level == 0 or i == j:
            leaf = max(range(i, j + 1), key=lambda t: (self.val[t], -t))
            out = (self.val[leaf], ("leaf", leaf))
        else:
            sub = None if level is None else level - 1
            out = self.norm(i, j, sub) if sub is not None else None
            if out is None:
                leaf = max(range(i, j + 1), key=lambda t: (self.val[t], -t))
                out = (self.val[leaf], ("leaf", leaf))
            for t in range(i, j + 1):
                most = min(self.pos[t], j - t + 1)
                for m in range(2, most + 1):
                    total, groups = self._partition(t, j, m, sub)
                    if HALF * total > out[0]:
                        out = (HALF * total, ("node", groups))
        self._norm[key] = out
        return out

    def _partition(self, u: int, j: int, r: int, level: int | None) -> tuple[Fraction, tuple]:
        """Best split of ``u..j`` into ``r`` consecutive groups, maximizing the sum of norms."""
        key = (u, j, r, level)
        hit = self._part.get(key)
        if hit is not None:
            return hit
        if r == 1:
            out = (self.norm(u, j, level)[0], ((u, j, level),))
        else:
            out = None
            for v in range(u, j - r + 2):
                head = self.norm(u, v, level)[0]
                rest, groups = self._partition(v + 1, j, r - 1, level)
                if out is None or head + rest > out[0]:
                    out = (head + rest, ((u, v, level),) + groups)
        self._part[key] = out
        return out

    def certificate(self, i: int, j: int, level: int | None, signs: tuple[int, ...]) -> NormFunctional:
        _, plan = self.norm(i, j, level)
        if plan[0] == "leaf":
            t = plan[1]
            return Leaf(self.pos[t], signs[t])
        return Node(tuple(self.certificate(u, v, lv, signs) for u, v, lv in plan[1]))


@lru_cache(maxsize=1 << 16)
def _abs_norm(positions: tuple[int, ...], values: tuple[Fraction, ...]) -> tuple[Fraction, NormFunctional]:
    solver = _IntervalSolver(positions, values)
    value, _ = solver.norm(0, len(positions) - 1)
    return value, solver.certificate(0, len(positions) - 1, None, (1,) * len(positions))


def _resign(f: NormFunctional, signs: dict[int, int]) -> NormFunctional:
    if isinstance(f, Leaf):
        return Leaf(f.position, signs[f.position])
    return Node(tuple(_resign(c, signs) for c in f.children))


def t_norm(x: SparseVector) -> tuple[Fraction, NormFunctional]:
    """Exact norm of ``x`` together with a norming functional attaining it.

    >>> t_norm(SparseVector.basis(3, 4, 5))[0]
    Fraction(3, 2)
    """
    if not x:
        return Fraction(0), TRIVIAL
    # the norm only sees |x|; the shared cache is keyed on it
    value, cert = _abs_norm(x.positions, tuple(abs(c) for c in x.coefficients))
    signs = {p: (1 if c > 0 else -1) for p, c in x.entries}
    return value, _resign(cert, signs)


def t_norm_level(x: SparseVector, k: int) -> Fraction:
    if k < 0:
        raise ValueError("level must be >= 0")
    if not x:
        return Fraction(0)
    solver = _IntervalSolver(x.positions, tuple(abs(c) for c in x.coefficients))
    return solver.norm(0, len(x) - 1, k)[0]


def t_norm_bruteforce(x: SparseVector, cap: int = BRUTEFORCE_CAP) -> Fraction:
    """Norm by enumerating every admissible family of arbitrary finite sets.

    Pieces are subsets of the support (points off the support add nothing
    and can only shrink ``min E_1``); each piece is evaluated recursively.
    """
    if len(x) > cap:
        raise SupportTooLarge(f"support size {len(x)} exceeds brute-force cap {cap}")
    if not x:
        return Fraction(0)
    memo: dict[tuple, Fraction] = {}

    def solve(items: tuple[tuple[int, Fraction], ...]) -> Fraction:
        if items in memo:
            return memo[items]
        best = max(abs(c) for _, c in items)
        n_items = len(items)
        for size in range(1, n_items + 1):
            for chosen in itertools.combinations(items, size):
                first = chosen[0][0]
                for n in range(1, min(size, first) + 1):
                    if n == 1 and size == n_items:
                        # E_1 = supp(x): contributes ||x||/2, never the max
                        continue
                    for cuts in itertools.combinations(range(1, size), n - 1):
                        bounds = (0,) + cuts + (size,)
                        total = sum(
                            (solve(chosen[a:b]) for a, b in zip(bounds, bounds[1:])),
                            Fraction(0),
                        )
                        if HALF * total > best:
                            best = HALF * total
        memo[items] = best
        return best

    return solve(tuple((p, abs(c)) for p, c in x.entries))
