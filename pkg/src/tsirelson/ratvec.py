"""Exact rational scalars and finitely supported vectors.

Scalars are :class:`fractions.Fraction`; a :class:`SparseVector` stores its
nonzero coordinates as ``(position, coefficient)`` pairs with 1-based,
strictly increasing positions.  Finite subsets of the naturals are plain
sorted tuples of ints.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Rational = Fraction
Scalar = Union[int, Fraction]
FiniteSet = tuple[int, ...]


class VectorFormatError(ValueError):
    """Raised for malformed vector text or JSON."""


def finite_set(elements: Iterable[int] = ()) -> FiniteSet:
    """Return ``elements`` as a sorted duplicate-free tuple of positive ints."""
    out = tuple(sorted(set(int(e) for e in elements)))
    if out and out[0] < 1:
        raise ValueError(f"finite sets live in {{1, 2, ...}}, got {out[0]}")
    return out


@dataclass(frozen=True)
class SparseVector:
    entries: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self) -> None:
        prev = 0
        for pos, coef in self.entries:
            if not isinstance(pos, int) or pos < 1:
                raise ValueError(f"position must be an integer >= 1, got {pos!r}")
            if pos <= prev:
                raise ValueError("positions must be strictly increasing")
            if not isinstance(coef, Fraction) or coef == 0:
                raise ValueError(f"coefficient at {pos} must be a nonzero Fraction")
            prev = pos

    # construction -------------------------------------------------------

    @classmethod
    def from_mapping(cls, coeffs: Mapping[int, Scalar]) -> SparseVector:
        items = sorted((int(p), Fraction(c)) for p, c in coeffs.items())
        return cls(tuple((p, c) for p, c in items if c != 0))

    @classmethod
    def basis(cls, *positions: int) -> SparseVector:
        """Sum of unit vectors ``e_j``; repeated positions accumulate."""
        acc: dict[int, Fraction] = {}
        for p in positions:
            acc[p] = acc.get(p, Fraction(0)) + 1
        return cls.from_mapping(acc)

    @classmethod
    def zero(cls) -> SparseVector:
        return cls(())

    # views --------------------------------------------------------------

    def __iter__(self) -> Iterator[tuple[int, Fraction]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __getitem__(self, pos: int) -> Fraction:
        for p, c in self.entries:
            if p == pos:
                return c
            if p > pos:
                break
        return Fraction(0)

    @property
    def positions(self) -> FiniteSet:
        return tuple(p for p, _ in self.entries)

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(c for _, c in self.entries)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.entries)

    # arithmetic ---------------------------------------------------------

    def __add__(self, other: SparseVector) -> SparseVector:
        acc = self.as_dict()
        for p, c in other.entries:
            acc[p] = acc.get(p, Fraction(0)) + c
        return SparseVector.from_mapping(acc)

    def __neg__(self) -> SparseVector:
        return SparseVector(tuple((p, -c) for p, c in self.entries))

    def __sub__(self, other: SparseVector) -> SparseVector:
        return self + (-other)

    def scale(self, q: Scalar) -> SparseVector:
        q = Fraction(q)
        if q == 0:
            return SparseVector()
        return SparseVector(tuple((p, q * c) for p, c in self.entries))

    def __rmul__(self, q: Scalar) -> SparseVector:
        return self.scale(q)

    def dot(self, other: SparseVector) -> Fraction:
        theirs = other.as_dict()
        return sum((c * theirs[p] for p, c in self.entries if p in theirs), Fraction(0))

    def abs(self) -> SparseVector:
        return SparseVector(tuple((p, abs(c)) for p, c in self.entries))

    # formatting ---------------------------------------------------------

    def to_text(self) -> str:
        return " ".join(f"{p}:{c.numerator}/{c.denominator}" for p, c in self.entries)

    def to_json(self) -> list[dict[str, int]]:
        return [{"pos": p, "num": c.numerator, "den": c.denominator} for p, c in self.entries]

    def __str__(self) -> str:
        return self.to_text() or "0"


_TOKEN = re.compile(r"^(-?\d+):(-?\d+)(?:/(-?\d+))?$")


def _build(pairs: Iterable[tuple[int, Fraction]]) -> SparseVector:
    acc: dict[int, Fraction] = {}
    for pos, coef in pairs:
        if pos < 1:
            raise VectorFormatError(f"position must be >= 1, got {pos}")
        if pos in acc:
            raise VectorFormatError(f"duplicate position {pos}")
        acc[pos] = coef
    return SparseVector.from_mapping(acc)


def _fraction(num: int, den: int) -> Fraction:
    if den == 0:
        raise VectorFormatError("zero denominator")
    return Fraction(num, den)


def parse_vector(text: str) -> SparseVector:
    """Parse ``"pos:num pos:num/den ..."`` or the JSON list form.

    >>> parse_vector("1:3/2 4:-1").to_text()
    '1:3/2 4:-1/1'
    """
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            items = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise VectorFormatError(f"bad JSON vector: {exc}") from exc
        pairs = []
        for item in items:
            try:
                pos, num, den = int(item["pos"]), int(item["num"]), int(item.get("den", 1))
            except (KeyError, TypeError, ValueError) as exc:
                raise VectorFormatError(f"bad JSON entry {item!r}") from exc
            pairs.append((pos, _fraction(num, den)))
        return _build(pairs)

    pairs = []
    for token in stripped.split():
        m = _TOKEN.match(token)
        if m is None:
            raise VectorFormatError(f"malformed token {token!r}")
        pos, num, den = int(m[1]), int(m[2]), int(m[3]) if m[3] is not None else 1
        pairs.append((pos, _fraction(num, den)))
    return _build(pairs)


def restrict(x: SparseVector, E: Iterable[int]) -> SparseVector:
    keep = set(E)
    return SparseVector(tuple((p, c) for p, c in x.entries if p in keep))


def support(x: SparseVector) -> FiniteSet:
    return x.positions


def is_block(xs: list[SparseVector]) -> bool:
    """True iff the supports of ``xs`` are successive: max supp(x_{j-1}) < min supp(x_j)."""
    for x in xs:
        if not x:
            raise ValueError("block sequences consist of nonzero vectors")
    return all(a.positions[-1] < b.positions[0] for a, b in zip(xs, xs[1:]))


def sup_norm(x: SparseVector) -> Fraction:
    return max((abs(c) for _, c in x.entries), default=Fraction(0))


def l1_norm(x: SparseVector) -> Fraction:
    return sum((abs(c) for _, c in x.entries), Fraction(0))


def l2_norm_sq(x: SparseVector) -> Fraction:
    return sum((c * c for _, c in x.entries), Fraction(0))


def format_rational(q: Scalar) -> str:
    """Always ``num/den``, including integers (``2/1``)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"
