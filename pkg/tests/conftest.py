import logging
import os
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from bvslab.corpus import load_corpus
from bvslab.dsl import build_map, build_space, parse_map_spec, parse_space_spec
from bvslab.space import SelfMap, make_finite_space

ROOT = os.path.dirname(os.path.dirname(os.path.realpath(__file__)))
CORPUS_DIR = os.path.join(ROOT, "corpus")


def read_corpus(filename: str) -> str:
    with open(os.path.join(CORPUS_DIR, filename), encoding="utf-8") as file:
        return file.read()


def corpus_space(name: str):
    return build_space(parse_space_spec(read_corpus(f"{name}.space")))


def corpus_pair(name: str):
    space = corpus_space(name)
    return space, build_map(parse_map_spec(read_corpus(f"{name}.map")), space)


def F(numerator, denominator=1) -> Fraction:
    return Fraction(numerator, denominator)


@pytest.fixture(scope="session")
def corpus_dir() -> str:
    return CORPUS_DIR


@pytest.fixture
def e2():
    return corpus_pair("e2")


@pytest.fixture
def e4():
    return corpus_pair("e4")


@pytest.fixture
def e6():
    return corpus_pair("e6")


@pytest.fixture
def e8():
    return corpus_pair("e8")


@pytest.fixture
def e9():
    return corpus_pair("e9")


@pytest.fixture
def equilateral():
    return make_finite_space(["a", "b", "c"], [[0, 1, 1], [1, 0, 1], [1, 1, 0]], name="equilateral")


@pytest.fixture(scope="session")
def shipped_entries():
    return {name: load_corpus(name, CORPUS_DIR) for name in ("e2", "e4", "e6", "e8", "e9")}


@pytest.fixture(autouse=True)
def propagate_logs(monkeypatch):
    # The command-line entry point stops "bvslab" records at its own handlers.
    monkeypatch.setattr(logging.getLogger("bvslab"), "propagate", True)


@st.composite
def finite_spaces(draw, min_size=3, max_size=5, max_numerator=8, max_denominator=3):
    size = draw(st.integers(min_value=min_size, max_value=max_size))
    table = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            numerator = draw(st.integers(min_value=1, max_value=max_numerator))
            denominator = draw(st.integers(min_value=1, max_value=max_denominator))
            table[i][j] = table[j][i] = Fraction(numerator, denominator)
    return make_finite_space([f"p{k}" for k in range(size)], table)


@st.composite
def spaces_with_maps(draw, min_size=2, max_size=5, max_denominator=4):
    """A random table space with a self-map whose image is a random subset."""
    space = draw(finite_spaces(min_size, max_size, max_denominator=max_denominator))
    targets = draw(st.lists(st.sampled_from(space.points), min_size=1, max_size=len(space), unique=True))
    images = draw(st.lists(st.sampled_from(targets), min_size=len(space), max_size=len(space)))
    return space, SelfMap.from_table("drawn", dict(zip(space.points, images)))
