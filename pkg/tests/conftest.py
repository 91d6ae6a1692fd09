import numpy as np
import pytest

from icosoku.tiles import tile_table
from icosoku.topology import build_icosahedron, build_tetrahedron

# Brute-force counts over all 4**12 corner assignments of the tetrahedron,
# computed by tetrahedron_oracle() below before the engine existed.
TETRA_COUNT_V0_FIXED = 8040
TETRA_COUNT_FREE = 32160


@pytest.fixture(scope='session')
def ico():
    return build_icosahedron()


@pytest.fixture(scope='session')
def tiles():
    return tile_table()


@pytest.fixture(scope='session')
def tetra():
    return build_tetrahedron()


def tetrahedron_oracle(faces=((0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2))):
    """Count all-distinct-tile solutions on a tetrahedron by enumeration.

    Corner k of the 12 belongs to face k // 3 at position k % 3.  A corner
    assignment is a solution when the vertex sums are a permutation of 1..4
    and the four tiles are pairwise different up to rotation.  Returns
    ``(count, count_with_vertex0_equal_1)``.
    """
    total = v0_fixed = 0
    chunk = 1 << 20
    for start in range(0, 4 ** 12, chunk):
        codes = np.arange(start, start + chunk, dtype=np.int64)
        corners = np.stack([(codes >> (2 * k)) & 3 for k in range(12)], axis=1)
        sums = np.zeros((chunk, 4), dtype=np.int64)
        for f, tri in enumerate(faces):
            for c, v in enumerate(tri):
                sums[:, v] += corners[:, 3 * f + c]
        is_perm = np.all(np.sort(sums, axis=1) == np.arange(1, 5), axis=1)
        keys = []
        for f in range(4):
            a, b, c = corners[:, 3 * f], corners[:, 3 * f + 1], corners[:, 3 * f + 2]
            k0, k1, k2 = a * 16 + b * 4 + c, c * 16 + a * 4 + b, b * 16 + c * 4 + a
            keys.append(np.minimum(np.minimum(k0, k1), k2))
        keys = np.sort(np.stack(keys, axis=1), axis=1)
        distinct = np.all(keys[:, 1:] != keys[:, :-1], axis=1)
        hit = is_perm & distinct
        total += int(hit.sum())
        v0_fixed += int((hit & (sums[:, 0] == 1)).sum())
    return total, v0_fixed


@pytest.fixture(scope='session')
def tetra_oracle_counts():
    return tetrahedron_oracle()


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section('acceptance criteria')
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
