"""Embedding maps of finite-subset metric spaces into sequence spaces.

The abstract sequence the maps are built from is instantiated as the unit
vector basis of the host.  Hosts are l1, l2, c0, T and T*; the l2 "norm" is
always carried as its exact square so that nothing irrational appears.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .dualnorm import tstar_norm
from .metrics import FinitePoint, Kind, MetricKind
from .ratvec import SparseVector, format_rational, l1_norm, l2_norm_sq, sup_norm
from .tnorm import t_norm

PSI_BUDGET = 50_000


class Host(str, enum.Enum):
    L1 = "l1"
    L2 = "l2"
    C0 = "c0"
    T = "T"
    TSTAR = "Tstar"

    @property
    def squared(self) -> bool:
        """Whether :func:`host_norm` reports the square of the norm."""
        return self is Host.L2


class BudgetExceeded(RuntimeError):
    pass


def host_norm(space: Host, x: SparseVector) -> Fraction:
    space = Host(space)
    if space is Host.L1:
        return l1_norm(x)
    if space is Host.L2:
        return l2_norm_sq(x)
    if space is Host.C0:
        return sup_norm(x)
    if space is Host.T:
        return t_norm(x)[0]
    return tstar_norm(x)[0]


def host_distance(space: Host, u: SparseVector, v: SparseVector) -> Fraction:
    return host_norm(space, u - v)


def as_float(space: Host, value: Fraction) -> float:
    """Decimal approximation of a host value, undoing the square for l2."""
    return math.sqrt(value) if Host(space).squared else float(value)


# pairing functions ------------------------------------------------------


def cantor_pair(i: int, n: int) -> int:
    """Bijection N x N -> N (both sides starting at 1)."""
    if i < 1 or n < 1:
        raise ValueError("arguments start at 1")
    a, b = i - 1, n - 1
    return (a + b) * (a + b + 1) // 2 + b + 1


def subset_rank(A: FinitePoint, height: int | None = None) -> int:
    """Position of ``A`` among the finite sets of size <= ``height``, in colex order.

    Colex order compares sets by their largest differing element, so every
    set is preceded by finitely many others.  With ``height=None`` this is
    ``sum(2**(a-1))``, the binary code of ``A``.
    """
    r = len(A)
    if height is not None and r > height:
        raise ValueError(f"{A} has more than {height} elements")
    if height is None:
        return sum(1 << (a - 1) for a in A)
    return sum(
        sum(comb(a - 1, j) for j in range(height - (r - i) + 1))
        for i, a in enumerate(A, 1)
    )


@dataclass(frozen=True)
class PairingFunction:
    """``pairs``: N x N -> N; ``sets``: finite sets -> N; ``sets-offset``: [N]^{<=k} -> {2k, 2k+1, ...}."""

    variant: str = "sets"
    k: int | None = None

    def __post_init__(self) -> None:
        if self.variant not in ("pairs", "sets", "sets-offset"):
            raise ValueError(f"unknown pairing variant {self.variant!r}")
        if self.variant == "sets-offset" and (self.k is None or self.k < 1):
            raise ValueError("the offset variant needs k >= 1")

    def __call__(self, *args) -> int:
        if self.variant == "pairs":
            return cantor_pair(*args)
        (A,) = args
        if self.variant == "sets":
            return 1 + subset_rank(tuple(A))
        return 2 * self.k + subset_rank(tuple(A), self.k)


PHI_PAIRS = PairingFunction("pairs")
PHI_SETS = PairingFunction("sets")


# the maps ---------------------------------------------------------------


def map_symdiff(n: FinitePoint) -> SparseVector:
    return SparseVector.basis(*n)


def map_tree_lemma(n: FinitePoint, phi: PairingFunction = PHI_SETS) -> SparseVector:
    """Sum of basis vectors over all initial segments of ``n``, including the empty one."""
    return SparseVector.basis(*(phi(n[:r]) for r in range(len(n) + 1)))


def map_hamming(n: FinitePoint, phi: PairingFunction = PHI_PAIRS) -> SparseVector:
    return SparseVector.basis(*(phi(i, a) for i, a in enumerate(n, 1))).scale(Fraction(1, 2))


def map_tree_c0(n: FinitePoint, k: int, phi: PairingFunction | None = None) -> SparseVector:
    """Double sum over s <= u <= n: the initial segment s gets weight |n| - |s| + 1."""
    if len(n) > k:
        raise ValueError(f"point {n} is longer than the tree height {k}")
    phi = phi or PairingFunction("sets-offset", k)
    return SparseVector.from_mapping({phi(n[:r]): len(n) - r + 1 for r in range(len(n) + 1)})


def map_johnson_l2(n: FinitePoint, scaled: bool = False, k: int | None = None) -> tuple[SparseVector, Fraction]:
    """Indicator vector of ``n`` with the squared scale factor (1, or 1/k when scaled)."""
    k = len(n) if k is None else k
    if len(n) != k:
        raise ValueError(f"point {n} does not have {k} elements")
    return SparseVector.basis(*n), (Fraction(1, k) if scaled else Fraction(1))


class NamedMap(NamedTuple):
    f: Callable[[FinitePoint], SparseVector]
    sq_scale: Fraction
    up_to: bool  # domain is [alphabet]^{<=k} rather than [alphabet]^k
    kind: Kind
    l2_only: bool = False


def named_map(name: str, k: int) -> NamedMap:
    """Look up one of the built-in maps by its CLI name."""
    if name == "symdiff":
        return NamedMap(map_symdiff, Fraction(1), True, Kind.SYMDIFF)
    if name == "tree":
        return NamedMap(map_tree_lemma, Fraction(1), True, Kind.TREE)
    if name == "hamming":
        return NamedMap(map_hamming, Fraction(1), False, Kind.HAMMING)
    if name == "tree-c0":
        return NamedMap(lambda n: map_tree_c0(n, k), Fraction(1), True, Kind.TREE)
    if name in ("johnson", "johnson-scaled"):
        scaled = name == "johnson-scaled"
        return NamedMap(lambda n: map_johnson_l2(n, scaled, k)[0], Fraction(1, k) if scaled else Fraction(1),
                        False, Kind.JOHNSON, l2_only=scaled)
    raise ValueError(f"unknown map {name!r}; choose from {', '.join(MAP_NAMES)}")


MAP_NAMES = ("symdiff", "tree", "hamming", "tree-c0", "johnson", "johnson-scaled")


# moduli -----------------------------------------------------------------


@dataclass
class ModulusReport:
    """Finite-sample compression/expansion moduli at the realized source distances.

    For the l2 host every image quantity (rho, omega, lip) is a square.
    """

    space: Host
    distances: list[Fraction]
    rho: list[tuple[Fraction, Fraction]]
    omega: list[tuple[Fraction, Fraction]]
    lip: Fraction
    pairs: int = 0
    sandwich_ok: bool = True
    squared: bool = field(init=False)

    def __post_init__(self) -> None:
        self.squared = Host(self.space).squared

    def rows(self) -> list[tuple[Fraction, Fraction, Fraction]]:
        return [(t, r, w) for (t, r), (_, w) in zip(self.rho, self.omega)]

    def to_csv(self) -> str:
        lines = ["t,rho_sq_or_val,omega_sq_or_val,rho_approx,omega_approx"]
        for t, r, w in self.rows():
            lines.append(
                f"{format_rational(t)},{format_rational(r)},{format_rational(w)},"
                f"{as_float(self.space, r):.6g},{as_float(self.space, w):.6g}"
            )
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "space": self.space.value,
            "squared": self.squared,
            "finite_sample": True,
            "pairs": self.pairs,
            "lip": format_rational(self.lip),
            "sandwich_ok": self.sandwich_ok,
            "rows": [
                {"t": format_rational(t), "rho": format_rational(r), "omega": format_rational(w),
                 "rho_approx": as_float(self.space, r), "omega_approx": as_float(self.space, w)}
                for t, r, w in self.rows()
            ],
        }


def pair_table(
    f: Callable[[FinitePoint], SparseVector],
    points: Sequence[FinitePoint],
    metric: MetricKind,
    space: Host,
    sq_scale: Fraction = Fraction(1),
) -> list[tuple[Fraction, Fraction]]:
    """(source distance, image value) for every unordered pair of distinct points."""
    space = Host(space)
    if sq_scale != 1 and not space.squared:
        raise ValueError("irrational scale factors are only tracked for the l2 host")
    images = {p: f(p) for p in points}
    out = []
    for a, b in itertools.combinations(points, 2):
        out.append((metric.distance(a, b), sq_scale * host_distance(space, images[a], images[b])))
    return out


def ratio(space: Host, image: Fraction, d: Fraction) -> Fraction:
    """image/d, squared on both sides for l2."""
    return image / (d * d) if Host(space).squared else image / d


def compute_moduli(
    f: Callable[[FinitePoint], SparseVector],
    points: Sequence[FinitePoint],
    metric: MetricKind,
    space: Host,
    sq_scale: Fraction = Fraction(1),
) -> ModulusReport:
    if len(points) < 2:
        raise ValueError("need at least two points")
    space = Host(space)
    table = pair_table(f, points, metric, space, sq_scale)
    ts = sorted({d for d, _ in table})
    rho, omega = [], []
    for t in ts:
        rho.append((t, min(img for d, img in table if d >= t)))
        omega.append((t, max(img for d, img in table if d <= t)))
    lip = max((ratio(space, img, d) for d, img in table if d > 0), default=Fraction(0))
    rho_at, omega_at = dict(rho), dict(omega)
    sandwich = all(rho_at[d] <= img <= omega_at[d] for d, img in table)
    return ModulusReport(space, ts, rho, omega, lip, len(table), sandwich)


# vectorized exact l2 path -----------------------------------------------


def _integer_images(vectors: Sequence[SparseVector]) -> tuple[np.ndarray, int]:
    """Dense int64 matrix of ``L * v`` over the joint support, and the scale ``L``."""
    cols = sorted({p for v in vectors for p in v.positions})
    where = {p: j for j, p in enumerate(cols)}
    scale = 1
    for v in vectors:
        for c in v.coefficients:
            scale = math.lcm(scale, c.denominator)
    mat = np.zeros((len(vectors), max(len(cols), 1)), dtype=np.int64)
    for i, v in enumerate(vectors):
        for p, c in v.entries:
            mat[i, where[p]] = int(c * scale)
    bound = int(np.abs(mat).max(initial=0))
    if 4 * (bound ** 2) * mat.shape[1] >= 2 ** 62:
        raise OverflowError("coefficients too large for the int64 fast path")
    return mat, scale


def _membership(P: np.ndarray) -> np.ndarray:
    letters = np.unique(P)
    M = np.zeros((P.shape[0], max(len(letters), 1)), dtype=np.int64)
    for j in range(P.shape[1]):
        M[np.arange(P.shape[0]), np.searchsorted(letters, P[:, j])] = 1
    return M


def _metric_block(P: np.ndarray, M: np.ndarray, rows: slice, kind: Kind) -> np.ndarray:
    """Integer source distances between points[rows] and all points; points share one size k."""
    k = P.shape[1]
    if kind in (Kind.SYMDIFF, Kind.JOHNSON):
        inter = M[rows] @ M.T
        return 2 * (k - inter) if kind is Kind.SYMDIFF else k - inter
    eq = P[rows, None, :] == P[None, :, :]
    if kind is Kind.HAMMING:
        return k - eq.sum(-1)
    return 2 * (k - np.cumprod(eq, axis=-1).sum(-1))


def l2_pair_extremes(
    images: Sequence[SparseVector],
    points: Sequence[FinitePoint] | None = None,
    kind: Kind | None = None,
    chunk: int = 256,
) -> tuple[Fraction, Fraction | None]:
    """Exact (max squared image distance, max squared Lipschitz ratio) over all pairs.

    The ratio needs ``points`` and ``kind``; points must all have the same size.
    """
    mat, scale = _integer_images(images)
    n = len(images)
    gram_diag = (mat * mat).sum(1)
    P = M = None
    if points is not None:
        P = np.array(points, dtype=np.int64).reshape(n, -1)
        M = _membership(P)
    best_sq = 0
    best_ratio: tuple[int, int] | None = None
    for start in range(0, n, chunk):
        rows = slice(start, min(start + chunk, n))
        d2 = gram_diag[rows, None] + gram_diag[None, :] - 2 * (mat[rows] @ mat.T)
        best_sq = max(best_sq, int(d2.max()))
        if P is None:
            continue
        src = _metric_block(P, M, rows, Kind(kind)).astype(np.int64)
        mask = src > 0
        if not mask.any():
            continue
        num, den = d2[mask], src[mask] ** 2
        approx = num / den
        # floats only shortlist candidates; the maximum is settled exactly
        near = approx >= approx.max() * (1 - 1e-9)
        for a, b in set(zip(num[near].tolist(), den[near].tolist())):
            if best_ratio is None or a * best_ratio[1] > best_ratio[0] * b:
                best_ratio = (a, b)
    l2 = scale * scale
    ratio_out = None if P is None else (Fraction(0) if best_ratio is None else Fraction(best_ratio[0], best_ratio[1] * l2))
    return Fraction(best_sq, l2), ratio_out


# fundamental function and psi surrogates --------------------------------


def fundamental_estimate(space: Host, k: int, offset: int) -> Fraction:
    """Host value of e_{offset+1} + ... + e_{offset+k}."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if offset < k:
        raise ValueError("offset must be at least k")
    return host_norm(space, SparseVector.basis(*range(offset + 1, offset + k + 1)))


def psi_estimate(space: Host, k: int, N: int, budget: int = PSI_BUDGET) -> Fraction:
    """Minimum host value of sum(eps_i e_{n_i}) over n_1 < ... < n_k <= N and all signs."""
    if k < 1 or N < k:
        raise ValueError("need 1 <= k <= N")
    work = comb(N, k) * 2 ** k
    if work > budget:
        raise BudgetExceeded(f"{work} candidate vectors exceed the budget {budget}")
    best = None
    for support in itertools.combinations(range(1, N + 1), k):
        for signs in itertools.product((1, -1), repeat=k):
            v = SparseVector.from_mapping(dict(zip(support, signs)))
            value = host_norm(space, v)
            if best is None or value < best:
                best = value
    return best

