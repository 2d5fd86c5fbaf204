"""Shared fixtures: canonical path files and a seeded series factory."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import pytest

from kzfox import FreeSeries, RATIONAL
from kzfox.cli import load_path_file

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def load_path():
    def _load(name: str):
        return load_path_file(str(DATA / name))

    return _load


def random_series(rng: random.Random, n: int, degree: int, max_word: int = 3,
                  terms: int = 5) -> FreeSeries:
    """Sparse random rational series, used across the exact-identity tests."""
    coeffs = {}
    for _ in range(terms):
        k = rng.randint(0, max_word)
        w = tuple(rng.randint(1, n) for _ in range(k))
        coeffs[w] = coeffs.get(w, 0) + Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return FreeSeries(n, degree, coeffs, RATIONAL)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260823)
