from __future__ import annotations

import itertools

import numpy as np
import pytest

from sddosd.codes import CodeSpec, build_generator, load_shipped


@pytest.fixture(scope="session")
def g84():
    return build_generator(CodeSpec(8, 4))


@pytest.fixture(scope="session")
def g168():
    return load_shipped("rand16_8")


@pytest.fixture(scope="session")
def g6416():
    return build_generator(CodeSpec(64, 16))


def all_codewords(g) -> np.ndarray:
    """Every codeword of a small code, by explicit row sums (no packed arithmetic)."""
    bits = g.bits.astype(np.int64)
    k = bits.shape[0]
    msgs = np.array(list(itertools.product((0, 1), repeat=k)), dtype=np.int64)
    return (msgs @ bits) % 2


def rng(seed=0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, passed: bool, detail: str) -> None:
    line = f"{criterion}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
