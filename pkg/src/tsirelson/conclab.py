"""Finite-scale experiments around the 5*Lip concentration bound for maps into T*.

A :class:`MapFamily` produces, for each ``(k, alphabet)``, a map on the
k-subsets of the alphabet.  ``concentration_check`` searches sub-alphabets
for the one whose image has the smallest diameter and compares that with
5 * Lip(f).  All verdicts are exact; for the l2 host every distance,
diameter and Lipschitz constant is carried as a square, and the bound is
25 * Lip^2.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Mapping, Sequence

from .embed import Host, PHI_PAIRS, host_distance, host_norm, l2_pair_extremes, map_hamming, ratio
from .metrics import FinitePoint, Kind, MetricKind, enumerate_points
from .ratvec import FiniteSet, SparseVector, finite_set, format_rational

SEARCH_BUDGET = 20_000
PointMap = Callable[[FinitePoint], SparseVector]


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class MapFamily:
    name: str
    space: Host
    builder: Callable[[int, FiniteSet], PointMap]

    def instance(self, k: int, alphabet: FiniteSet) -> PointMap:
        return self.builder(k, alphabet)


def summing_family(space: Host = Host.TSTAR) -> MapFamily:
    """n -> sum of the basis vectors (dual basis vectors for T*) at the elements of n."""
    return MapFamily("summing", Host(space), lambda k, alphabet: lambda p: SparseVector.basis(*p))


def hamming_family(space: Host = Host.TSTAR) -> MapFamily:
    return MapFamily("hamming-lemma", Host(space), lambda k, alphabet: lambda p: map_hamming(p, PHI_PAIRS))


def constant_family(space: Host = Host.TSTAR, value: SparseVector | None = None) -> MapFamily:
    value = value if value is not None else SparseVector.basis(1)
    return MapFamily("constant", Host(space), lambda k, alphabet: lambda p: value)


def custom_family(table: Mapping[FinitePoint, SparseVector], space: Host = Host.TSTAR) -> MapFamily:
    table = {tuple(p): v for p, v in table.items()}

    def build(k: int, alphabet: FiniteSet) -> PointMap:
        missing = [p for p in enumerate_points(alphabet, k) if p not in table]
        if missing:
            raise ValueError(f"custom table is missing {len(missing)} points, e.g. {missing[0]}")
        return table.__getitem__

    return MapFamily("custom", Host(space), build)


FAMILIES = {"summing": summing_family, "hamming-lemma": hamming_family, "constant": constant_family}


def get_family(name: str, space: Host) -> MapFamily:
    try:
        return FAMILIES[name](Host(space))
    except KeyError:
        raise ValueError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}") from None


class _Images:
    """Images of a family instance with a cache of pairwise image distances."""

    def __init__(self, family: MapFamily, k: int, alphabet: FiniteSet):
        self.space = family.space
        self.k = k
        self.f = family.instance(k, alphabet)
        self._img: dict[FinitePoint, SparseVector] = {}
        self._dist: dict[tuple[FinitePoint, FinitePoint], Fraction] = {}

    def image(self, p: FinitePoint) -> SparseVector:
        if p not in self._img:
            self._img[p] = self.f(p)
        return self._img[p]

    def distance(self, p: FinitePoint, q: FinitePoint) -> Fraction:
        key = (p, q) if p <= q else (q, p)
        if key not in self._dist:
            self._dist[key] = host_distance(self.space, self.image(p), self.image(q))
        return self._dist[key]

    def diameter(self, points: Sequence[FinitePoint]) -> Fraction:
        if self.space is Host.L2 and len(points) > 64:
            return l2_pair_extremes([self.image(p) for p in points])[0]
        return max((self.distance(a, b) for a, b in itertools.combinations(points, 2)), default=Fraction(0))

    def lipschitz(self, points: Sequence[FinitePoint], metric: MetricKind) -> Fraction:
        if self.space is Host.L2 and len(points) > 64 and metric.scale == 1:
            return l2_pair_extremes([self.image(p) for p in points], points, metric.kind)[1]
        best = Fraction(0)
        for a, b in itertools.combinations(points, 2):
            d = metric.distance(a, b)
            if d > 0:
                best = max(best, ratio(self.space, self.distance(a, b), d))
        return best


def _metric(kind: Kind | MetricKind) -> MetricKind:
    return kind if isinstance(kind, MetricKind) else MetricKind(Kind(kind))


def lipschitz_constant(family: MapFamily, k: int, alphabet: Iterable[int], kind: Kind | MetricKind = Kind.JOHNSON) -> Fraction:
    """Exact Lip(f) on [alphabet]^k (squared for l2), maximized over all pairs."""
    letters = finite_set(alphabet)
    if len(letters) <= k:
        raise ValueError(f"alphabet of size {len(letters)} has no adjacent {k}-subsets")
    points = enumerate_points(letters, k)
    return _Images(family, k, letters).lipschitz(points, _metric(kind))


@dataclass
class ConcentrationReport:
    family: str
    space: Host
    k: int
    alphabet: FiniteSet
    lip: Fraction
    full_diameter: Fraction
    best_subalphabet: FiniteSet
    sub_diameter: Fraction
    bound_5lip: Fraction
    holds: bool
    search_mode: str
    squared: bool = field(init=False)

    def __post_init__(self) -> None:
        self.squared = Host(self.space).squared

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "space": Host(self.space).value,
            "squared": self.squared,
            "k": self.k,
            "alphabet": list(self.alphabet),
            "lip": format_rational(self.lip),
            "full_diameter": format_rational(self.full_diameter),
            "best_subalphabet": list(self.best_subalphabet),
            "sub_diameter": format_rational(self.sub_diameter),
            "bound_5lip": format_rational(self.bound_5lip),
            "holds": self.holds,
            "search_mode": self.search_mode,
        }


def concentration_check(
    family: MapFamily,
    k: int,
    alphabet: Iterable[int],
    subsize: int,
    mode: str = "exhaustive",
    kind: Kind | MetricKind = Kind.JOHNSON,
    budget: int = SEARCH_BUDGET,
) -> ConcentrationReport:
    """Find the size-``subsize`` sub-alphabet with the smallest image diameter and test it against 5*Lip."""
    letters = finite_set(alphabet)
    if subsize < 2 * k:
        raise ValueError(f"subsize must be at least 2k = {2 * k}")
    if subsize > len(letters):
        raise ValueError("subsize exceeds the alphabet")
    if mode not in ("exhaustive", "greedy"):
        raise ValueError(f"unknown search mode {mode!r}")
    images = _Images(family, k, letters)
    lip = images.lipschitz(enumerate_points(letters, k), _metric(kind))
    full = images.diameter(enumerate_points(letters, k))

    if mode == "exhaustive":
        n_subsets = comb(len(letters), subsize)
        if n_subsets > budget:
            raise BudgetExceeded(f"{n_subsets} sub-alphabets exceed the budget {budget}; try --mode greedy")
        best = None
        for sub in itertools.combinations(letters, subsize):
            diam = images.diameter(enumerate_points(sub, k))
            if best is None or diam < best[1]:
                best = (sub, diam)
    else:
        current = letters
        diam = full
        while len(current) > subsize:
            trial = None
            for drop in current:
                rest = tuple(a for a in current if a != drop)
                d = images.diameter(enumerate_points(rest, k))
                if trial is None or d < trial[1]:
                    trial = (rest, d)
            current, diam = trial
        best = (current, diam)

    factor = 25 if Host(family.space).squared else 5
    bound = factor * lip
    return ConcentrationReport(
        family.name, family.space, k, letters, lip, full, tuple(best[0]), best[1], bound, best[1] <= bound, mode
    )


@dataclass
class Residual:
    point: FinitePoint
    vector: SparseVector
    blocks: list[SparseVector]
    norm: Fraction


@dataclass
class ExtractionReport:
    subalphabet: FiniteSet
    center: SparseVector
    residuals: list[Residual]
    max_residual: Fraction
    space: Host


def _interval_blocks(x: SparseVector) -> list[SparseVector]:
    """Split ``x`` into maximal runs of consecutive positions."""
    blocks: list[list[tuple[int, Fraction]]] = []
    for p, c in x.entries:
        if blocks and blocks[-1][-1][0] == p - 1:
            blocks[-1].append((p, c))
        else:
            blocks.append([(p, c)])
    return [SparseVector(tuple(b)) for b in blocks]


def extraction_surrogate(family: MapFamily, k: int, alphabet: Iterable[int]) -> ExtractionReport:
    """Center the images at their coordinatewise lower median and report what is left over.

    Diagnostic only: the residual of each point is split into interval
    blocks, loosely mirroring an approximate decomposition y + y1 + ... + yk.
    """
    letters = finite_set(alphabet)
    points = enumerate_points(letters, k)
    f = family.instance(k, letters)
    images = [f(p) for p in points]
    coords = sorted({q for v in images for q in v.positions})
    center = {}
    for q in coords:
        column = sorted(v[q] for v in images)
        center[q] = column[(len(column) - 1) // 2]
    y = SparseVector.from_mapping(center)
    residuals = []
    for p, v in zip(points, images):
        r = v - y
        residuals.append(Residual(p, r, _interval_blocks(r), host_norm(family.space, r)))
    top = max((r.norm for r in residuals), default=Fraction(0))
    return ExtractionReport(letters, y, residuals, top, family.space)


@dataclass
class ContrastRow:
    k: int
    tstar_lip: Fraction | None
    tstar_sub_diameter: Fraction | None
    tstar_ratio: Fraction | None
    l2_lip_sq: Fraction | None
    l2_sub_diameter_sq: Fraction | None
    l2_ratio_sq: Fraction | None


CONTRAST_COLUMNS = ("k", "tstar_lip", "tstar_sub_diameter", "tstar_ratio", "l2_lip_sq", "l2_sub_diameter_sq", "l2_ratio_sq")


def contrast_experiment(ks: Iterable[int], tstar_max: int = 4, l2_max: int = 8) -> list[ContrastRow]:
    """Summing family into T* and into l2 under the Johnson metric, sub-alphabets of size 2k.

    T* uses the alphabet {2k, ..., 2k+7}; l2 uses {2k, ...} with max(8, 2k) letters.
    Columns beyond the size limits are left empty.
    """
    rows = []
    for k in ks:
        if k < 1:
            raise ValueError("k must be >= 1")
        t_lip = t_diam = t_ratio = l_lip = l_diam = l_ratio = None
        if k <= tstar_max:
            rep = concentration_check(summing_family(Host.TSTAR), k, range(2 * k, 2 * k + 8), 2 * k)
            t_lip, t_diam = rep.lip, rep.sub_diameter
            t_ratio = t_diam / t_lip
        if k <= l2_max:
            size = max(8, 2 * k)
            rep = concentration_check(summing_family(Host.L2), k, range(2 * k, 2 * k + size), 2 * k)
            l_lip, l_diam = rep.lip, rep.sub_diameter
            l_ratio = l_diam / l_lip
        rows.append(ContrastRow(k, t_lip, t_diam, t_ratio, l_lip, l_diam, l_ratio))
    return rows


def contrast_csv(rows: Sequence[ContrastRow]) -> str:
    def cell(v) -> str:
        if v is None:
            return ""
        return str(v) if isinstance(v, int) else format_rational(v)

    lines = [",".join(CONTRAST_COLUMNS)]
    for r in rows:
        lines.append(",".join(cell(getattr(r, c)) for c in CONTRAST_COLUMNS))
    return "\n".join(lines) + "\n"
