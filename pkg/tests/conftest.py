from __future__ import annotations

from importlib.resources import files

import pytest

from quipqasm import parse_qasm, parse_quip

DATA = files("quipqasm") / "data"


@pytest.fixture(scope="session")
def qpe_quip():
    return parse_quip((DATA / "qpe.quip").read_text())


@pytest.fixture(scope="session")
def qpe_qasm():
    return parse_qasm((DATA / "qpe.qasm").read_text())


@pytest.fixture(scope="session")
def qpe_quip_text():
    return (DATA / "qpe.quip").read_text()
