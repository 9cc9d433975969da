"""Two-phase tableau simplex over the rationals with Bland's pivoting rule.

The tableau is kept in gmpy2 ``mpq``; inputs and outputs are ``Fraction``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

Row = Sequence[Fraction]
ZERO = mpq(0)
ONE = mpq(1)


class LPError(ArithmeticError):
    pass


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


@dataclass
class ExactLP:
    """maximize ``objective . x`` subject to ``row . x <= bound`` and ``row . x == bound``.

    Variables are free unless ``nonnegative`` is set.
    """

    objective: list[Fraction]
    constraints: list[tuple[list[Fraction], Fraction]] = field(default_factory=list)
    equalities: list[tuple[list[Fraction], Fraction]] = field(default_factory=list)
    nonnegative: bool = False

    def __post_init__(self) -> None:
        n = len(self.objective)
        for row, _ in self.constraints + self.equalities:
            if len(row) != n:
                raise ValueError(f"row of length {len(row)} for {n} variables")


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int], ncols: int):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        p = row[c]
        if p != 1:
            self.rows[r] = row = [v / p if v else v for v in row]
            self.rhs[r] /= p
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                self.rows[i] = [a - f * b if b else a for a, b in zip(other, row)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = c

    def optimize(self, cost: list, allowed: set[int]):
        """Maximize ``cost`` from the current basic feasible solution."""
        while True:
            cb = [cost[b] for b in self.basis]
            entering = None
            for j in sorted(allowed):
                if j in self.basis:
                    continue
                reduced = cost[j] - sum((w * row[j] for w, row in zip(cb, self.rows) if w), ZERO)
                if reduced > 0:
                    entering = j
                    break
            if entering is None:
                return sum((w * b for w, b in zip(cb, self.rhs)), ZERO)
            leave = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if leave is None or key < leave[0]:
                        leave = (key, i)
            if leave is None:
                raise Unbounded("objective is unbounded")
            self.pivot(leave[1], entering)


def solve_lp_exact(lp: ExactLP) -> tuple[Fraction, list[Fraction]]:
    """Exact optimum and an optimal vertex.

    >>> solve_lp_exact(ExactLP([Fraction(1)], [([Fraction(1)], Fraction(1)), ([Fraction(-1)], Fraction(1))]))
    (Fraction(1, 1), [Fraction(1, 1)])
    """
    n = len(lp.objective)
    # free variables are split x = x+ - x-
    width = n if lp.nonnegative else 2 * n

    def expand(row: Row) -> list:
        row = [_q(v) for v in row]
        return row if lp.nonnegative else row + [-v for v in row]

    specs = [(expand(r), _q(b), True) for r, b in lp.constraints]
    specs += [(expand(r), _q(b), False) for r, b in lp.equalities]
    n_slack = sum(1 for _, _, ineq in specs if ineq)
    slack_at, col = {}, width
    for i, (_, _, ineq) in enumerate(specs):
        if ineq:
            slack_at[i] = col
            col += 1
    needs_art = [i for i, (_, b, ineq) in enumerate(specs) if not ineq or b < 0]
    art_at = {i: width + n_slack + t for t, i in enumerate(needs_art)}
    ncols = width + n_slack + len(needs_art)

    rows, rhs, basis = [], [], []
    for i, (r, b, ineq) in enumerate(specs):
        full = r + [ZERO] * (ncols - width)
        if ineq:
            full[slack_at[i]] = ONE
        if b < 0:
            full = [-v for v in full]
            b = -b
        if i in art_at:
            full[art_at[i]] = ONE
            basis.append(art_at[i])
        else:
            basis.append(slack_at[i])
        rows.append(full)
        rhs.append(b)
    tab = _Tableau(rows, rhs, basis, ncols)
    real = set(range(width + n_slack))

    if art_at:
        phase1 = [ZERO] * ncols
        for c in art_at.values():
            phase1[c] = -ONE
        if tab.optimize(phase1, set(range(ncols))) < 0:
            raise Infeasible("constraints admit no solution")
        arts = set(art_at.values())
        # drive zero-level artificials out of the basis, dropping redundant rows
        for i in reversed(range(len(tab.rows))):
            if tab.basis[i] in arts:
                c = next((j for j in sorted(real) if tab.rows[i][j] != 0), None)
                if c is None:
                    del tab.rows[i], tab.rhs[i], tab.basis[i]
                else:
                    tab.pivot(i, c)

    cost = [_q(v) for v in lp.objective]
    cost = cost if lp.nonnegative else cost + [-v for v in cost]
    cost += [ZERO] * (ncols - width)
    optimum = tab.optimize(cost, real)

    values = [ZERO] * ncols
    for i, b in enumerate(tab.basis):
        values[b] = tab.rhs[i]
    vertex = values[:n] if lp.nonnegative else [values[j] - values[n + j] for j in range(n)]
    return _frac(optimum), [_frac(v) for v in vertex]


def _q(v) -> mpq:
    if isinstance(v, Fraction):
        return mpq(v.numerator, v.denominator)
    return mpq(v)


def _frac(v: mpq) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))
