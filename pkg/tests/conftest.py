from pathlib import Path

import pytest

from tuplecert.interpretation import parse_interpretation
from tuplecert.parser import parse_term, parse_trs

SYSTEMS = Path(__file__).resolve().parent.parent / "systems"


def system_path(name: str) -> Path:
    return SYSTEMS / name


def load_trs(name: str):
    return parse_trs(system_path(name).read_text(encoding="utf-8"))


def load_interpretation(trs, name: str):
    return parse_interpretation(system_path(name).read_text(encoding="utf-8"), trs)


@pytest.fixture
def systems() -> Path:
    return SYSTEMS


@pytest.fixture(scope="session")
def toy():
    return load_trs("toy.trs")


@pytest.fixture(scope="session")
def toy_interp(toy):
    return load_interpretation(toy, "toy.int")


@pytest.fixture(scope="session")
def add_trs():
    return load_trs("add.trs")


@pytest.fixture(scope="session")
def dbl():
    return load_trs("dbl.trs")


@pytest.fixture(scope="session")
def toyama():
    return load_trs("toyama.trs")


@pytest.fixture
def term(toy):
    """Parse a term over the toy signature."""
    return lambda text: parse_term(toy, text)


@pytest.fixture(scope="session")
def add_interp(add_trs):
    return load_interpretation(add_trs, "add.int")


@pytest.fixture(scope="session")
def exp_size_interp(add_trs):
    return load_interpretation(add_trs, "exp-size.int")


@pytest.fixture(scope="session")
def toy_uncorrected(toy):
    return load_interpretation(toy, "toy-uncorrected.int")


@pytest.fixture
def system():
    """Load `<name>.trs` with its `<name>.int`."""

    def load(name: str):
        trs = load_trs(f"{name}.trs")
        return trs, load_interpretation(trs, f"{name}.int")

    return load
