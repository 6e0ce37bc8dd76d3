import numpy as np
import pytest
from hypothesis import strategies as st

from uffd.core import CodeMatrix


def sum_example():
    """3 tests, 3 items, c3 = c1 OR c2."""
    return CodeMatrix.from_columns(["100", "010", "110"])


@pytest.fixture
def c3_sum():
    return sum_example()


@st.composite
def matrices(draw, max_t=8, max_n=7, min_n=2):
    t = draw(st.integers(1, max_t))
    n = draw(st.integers(min_n, max_n))
    masks = draw(st.lists(st.integers(0, (1 << t) - 1), min_size=n, max_size=n))
    return CodeMatrix(t, tuple(masks))


def random_matrix(rng: np.random.Generator, t: int, n: int, p: float = 0.5) -> CodeMatrix:
    return CodeMatrix.from_array((rng.random((t, n)) < p).astype(np.uint8))


# optimisations shared across test modules within one session

from functools import lru_cache

from uffd import bounds as _bounds
from uffd.tables import compute_tables


@lru_cache(maxsize=None)
def cached_bound(family: str, d: int):
    return _bounds.bound(family, d)


@lru_cache(maxsize=None)
def cached_tables(d_min: int = 2, d_max: int = 6):
    return compute_tables(d_min, d_max)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
