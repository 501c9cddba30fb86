from __future__ import annotations

import random

import pytest

from pautomata import make_rule


@pytest.fixture(scope="session")
def rules():
    return {
        name: make_rule(name)
        for name in ("hadamard", "shuffle", "infiltration", "trivial0")
    }


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
