import pathlib

import pytest

from hardysim import circuitdsl

CIRCUITS = pathlib.Path(__file__).resolve().parent.parent / "circuits"


def load_circuit(name: str):
    return circuitdsl.parse((CIRCUITS / name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def hardy_full():
    return load_circuit("hardy_full.circ")


@pytest.fixture(scope="session")
def hardy_reduced():
    return load_circuit("hardy_reduced.circ")


@pytest.fixture(scope="session")
def hardy_partial_plus():
    return load_circuit("hardy_partial_plus.circ")


@pytest.fixture(scope="session")
def hardy_partial_minus():
    return load_circuit("hardy_partial_minus.circ")
