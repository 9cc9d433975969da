"""Dual norm on finitely supported functionals.

``tstar_norm`` maximizes <x*, xi> over the unit ball of the primal norm by
cutting planes: the LP starts from the box |xi_j| <= 1 (valid because the
primal norm dominates the sup norm) and ``t_norm`` acts as an exact
separation oracle, handing back the violated norming functional as the
next cut.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .ratvec import SparseVector, is_block
from .simplex import ExactLP, solve_lp_exact
from .tnorm import NormFunctional, functional_vector, t_norm

ITERATION_CAP = 10_000
BRUTEFORCE_CAP = 6


class CuttingPlaneStalled(RuntimeError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class DualCertificatePair:
    primal_witness: SparseVector
    constraint_set: tuple[NormFunctional, ...] = field(default=())
    value: Fraction = Fraction(0)


@lru_cache(maxsize=1 << 14)
def _abs_dual(positions: tuple[int, ...], weights: tuple[Fraction, ...], cap: int):
    n = len(positions)
    box = []
    for i in range(n):
        row = [Fraction(0)] * n
        row[i] = Fraction(1)
        box.append((row, Fraction(1)))
    cuts: list[NormFunctional] = []
    rows = list(box)
    for _ in range(cap):
        lp = ExactLP(list(weights), rows, nonnegative=True)
        value, xi = solve_lp_exact(lp)
        candidate = SparseVector.from_mapping(dict(zip(positions, xi)))
        t, f = t_norm(candidate)
        if t <= 1:
            return value, candidate, tuple(cuts)
        coeffs = functional_vector(f)
        rows.append(([coeffs[p] for p in positions], Fraction(1)))
        cuts.append(f)
    raise CuttingPlaneStalled(f"no convergence after {cap} cuts on {positions}")


def tstar_norm(xstar: SparseVector, cap: int = ITERATION_CAP) -> tuple[Fraction, DualCertificatePair]:
    """Exact dual norm with a primal witness of norm <= 1 attaining it.

    >>> tstar_norm(SparseVector.basis(2, 3))[0]
    Fraction(2, 1)
    """
    if not xstar:
        return Fraction(0), DualCertificatePair(SparseVector(), (), Fraction(0))
    # the dual basis is 1-unconditional: solve on |x*|, then restore signs
    value, witness, cuts = _abs_dual(xstar.positions, tuple(abs(c) for c in xstar.coefficients), cap)
    signs = {p: (1 if c > 0 else -1) for p, c in xstar.entries}
    signed = SparseVector(tuple((p, signs[p] * c) for p, c in witness.entries))
    return value, DualCertificatePair(signed, cuts, value)


@lru_cache(maxsize=None)
def positive_norming_set(lo: int, hi: int) -> frozenset[tuple[tuple[int, Fraction], ...]]:
    """Coefficient vectors of all nonnegative norming functionals supported in [lo, hi].

    Nodes with a single child are left out; they are half of another member
    and never give a binding constraint.
    """
    out: set[tuple[tuple[int, Fraction], ...]] = {((j, Fraction(1)),) for j in range(lo, hi + 1)}
    for n in range(2, hi - lo + 2):
        for cuts in itertools.combinations(range(lo + 1, hi + 1), n - 1):
            bounds = (lo,) + cuts + (hi + 1,)
            pools = [positive_norming_set(a, b - 1) for a, b in zip(bounds, bounds[1:])]
            for kids in itertools.product(*pools):
                if n > kids[0][0][0]:
                    continue
                acc: dict[int, Fraction] = {}
                for kid in kids:
                    for p, c in kid:
                        acc[p] = acc.get(p, Fraction(0)) + c / 2
                out.add(tuple(sorted(acc.items())))
    return frozenset(out)


def signed_norming_set(top: int) -> list[dict[int, Fraction]]:
    """Every norming functional supported in [1, top], all sign patterns included."""
    out = []
    for f in sorted(positive_norming_set(1, top)):
        for signs in itertools.product((1, -1), repeat=len(f)):
            out.append({p: s * c for (p, c), s in zip(f, signs)})
    return out


def tstar_norm_bruteforce(xstar: SparseVector, cap: int = BRUTEFORCE_CAP) -> Fraction:
    """Dual norm as the gauge of the enumerated norming set.

    Solves min sum(lambda) subject to sum(lambda_f * f) = x*, lambda >= 0, over
    every signed norming functional on [1, max supp x*]; by LP duality this
    equals sup{<x*, x> : f(x) <= 1 for all f}.  No sign reduction is used.
    """
    if not xstar:
        return Fraction(0)
    top = xstar.positions[-1]
    if top > cap:
        raise PreconditionError(f"max support {top} exceeds brute-force cap {cap}")
    funcs = signed_norming_set(top)
    target = xstar.as_dict()
    equalities = [
        ([f.get(p, Fraction(0)) for f in funcs], target.get(p, Fraction(0)))
        for p in range(1, top + 1)
    ]
    lp = ExactLP([Fraction(-1)] * len(funcs), equalities=equalities, nonnegative=True)
    value, _ = solve_lp_exact(lp)
    return -value


def check_block_inequality(xstars: list[SparseVector]) -> tuple[Fraction, bool]:
    """Norm of the sum of an admissible block sequence in the dual unit ball, and whether it is <= 2."""
    if not xstars:
        raise PreconditionError("empty sequence")
    try:
        blocky = is_block(xstars)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from exc
    if not blocky:
        raise PreconditionError("supports are not successive")
    if len(xstars) > xstars[0].positions[0]:
        raise PreconditionError(
            f"not admissible: {len(xstars)} pieces but first support starts at {xstars[0].positions[0]}"
        )
    for j, xs in enumerate(xstars, 1):
        if tstar_norm(xs)[0] > 1:
            raise PreconditionError(f"piece {j} lies outside the dual unit ball")
    total = SparseVector()
    for xs in xstars:
        total = total + xs
    value = tstar_norm(total)[0]
    return value, value <= 2
