import numpy as np
import pytest

from rbqls.rbq import RBQMatrix
from rbqls.structures import FieldMask, StructureKind, lift, unpack

ALL_KINDS = [
    StructureKind.TOEPLITZ,
    StructureKind.SYM_TOEPLITZ,
    StructureKind.HANKEL,
    StructureKind.CIRCULANT,
    StructureKind.DIAGONAL,
    StructureKind.FULL,
]
ALL_MASKS = list(FieldMask)


def rand_rbq(rng, m, n, mask=FieldMask.RBQ):
    parts = [rng.standard_normal((m, n)) if on else None for on in mask.active]
    return RBQMatrix(*parts)


def rand_complex(rng, m, n):
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


def rand_structured(rng, L):
    return unpack(rng.standard_normal(L.p), L)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# K_ST as displayed for n = 6 and n = 7: entry [block row r][column c] lists the
# (1-based) unit vectors summed in that block.
KST6_DISPLAY = [
    [(1,), (2,), (3,), (4,), (5,), (6,)],
    [(2,), (1, 3), (4,), (5,), (6,), ()],
    [(3,), (2, 4), (1, 5), (6,), (), ()],
    [(4,), (3, 5), (2, 6), (1,), (), ()],
    [(5,), (4, 6), (3,), (2,), (1,), ()],
    [(6,), (5,), (4,), (3,), (2,), (1,)],
]
KST7_DISPLAY = [
    [(1,), (2,), (3,), (4,), (5,), (6,), (7,)],
    [(2,), (1, 3), (4,), (5,), (6,), (7,), ()],
    [(3,), (2, 4), (1, 5), (6,), (7,), (), ()],
    [(4,), (3, 5), (2, 6), (1, 7), (), (), ()],
    [(5,), (4, 6), (3, 7), (2,), (1,), (), ()],
    [(6,), (5, 7), (4,), (3,), (2,), (1,), ()],
    [(7,), (6,), (5,), (4,), (3,), (2,), (1,)],
]


def display_to_matrix(display):
    n = len(display)
    K = np.zeros((n * n, n))
    for r, row in enumerate(display):
        for c, units in enumerate(row):
            for u in units:
                K[r * n + u - 1, c] += 1.0
    return K


# constraint matrices of the diagonal and the linear-relation examples (3x3 unknowns)
CONSTRAINT_DIAGONAL = np.array([
    [0, 0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 0],
], dtype=float)
CONSTRAINT_RELATIONS = np.array([
    [1, -1, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 1, -1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, -1, 1],
], dtype=float)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
