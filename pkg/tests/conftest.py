from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from tsirelson.ratvec import SparseVector

_ACCEPTANCE: list[tuple[str, bool, str]] = []


def record_criterion(name: str, passed: bool, detail: str = "") -> None:
    _ACCEPTANCE.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}".rstrip())


rationals = st.builds(
    Fraction,
    st.integers(-12, 12).filter(bool),
    st.integers(1, 4),
)


@st.composite
def vectors(draw, max_support: int = 7, max_position: int = 12) -> SparseVector:
    positions = draw(st.sets(st.integers(1, max_position), max_size=max_support))
    return SparseVector.from_mapping({p: draw(rationals) for p in positions})


def random_vector(rng: random.Random, max_support: int, max_position: int, min_support: int = 1) -> SparseVector:
    """Positions <= max_position, coefficients in [-3, 3] with denominators <= 4."""
    size = rng.randint(min_support, min(max_support, max_position))
    positions = rng.sample(range(1, max_position + 1), size)
    coeffs = {}
    for p in positions:
        den = rng.randint(1, 4)
        num = rng.choice([n for n in range(-3 * den, 3 * den + 1) if n])
        coeffs[p] = Fraction(num, den)
    return SparseVector.from_mapping(coeffs)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)
