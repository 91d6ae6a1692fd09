from itertools import permutations
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icosoku.engine import Status
from icosoku.harness import (HEADER, SUBSET_COUNT, TOTAL_RANKS, CheckpointError,
                             PermutationSolver, SweepCheckpoint, check_permutations,
                             count_representatives, is_c5_representative, perm_rank,
                             perm_unrank, random_permutations, rotate_arrangement,
                             scan_combinations, sweep, vertex_assignment)
from icosoku.model import verify_adts


def test_rank_extremes():
    assert TOTAL_RANKS == 39916800
    assert perm_unrank(0) == tuple(range(2, 13))
    assert perm_unrank(TOTAL_RANKS - 1) == tuple(range(12, 1, -1))
    with pytest.raises(ValueError):
        perm_unrank(TOTAL_RANKS)
    with pytest.raises(ValueError):
        perm_unrank(-1)


def test_rank_is_lexicographic_on_small_sets():
    ordered = list(permutations(range(2, 7)))
    assert [perm_unrank(r, range(2, 7)) for r in range(len(ordered))] == ordered


@settings(max_examples=500)
@given(st.integers(0, TOTAL_RANKS - 1))
def test_rank_round_trip(r):
    arr = perm_unrank(r)
    assert sorted(arr) == list(range(2, 13))
    assert perm_rank(arr) == r


def test_rank_rejects_repeats():
    with pytest.raises(ValueError):
        perm_rank((2, 2, 3))


def test_representative_examples():
    rest = (7, 8, 9, 10, 11, 12)
    assert is_c5_representative((2, 3, 4, 5, 6) + rest)
    assert not is_c5_representative((6, 2, 3, 4, 5) + rest)
    assert is_c5_representative((1, 2, 3, 4, 5, 6) + rest)


def test_representative_count_by_enumeration():
    # the rule only looks at the five upper-ring pegs; the other six are free
    upper = sum(1 for t in permutations(range(2, 13), 5) if t[0] == min(t))
    assert upper * factorial(6) == TOTAL_RANKS // 5 == 7983360


@settings(max_examples=200)
@given(st.integers(0, TOTAL_RANKS - 1))
def test_exactly_one_rotation_is_representative(r):
    arr = perm_unrank(r)
    orbit = [rotate_arrangement(arr, k) for k in range(5)]
    assert len(set(orbit)) == 5
    assert sum(is_c5_representative(a) for a in orbit) == 1
    assert rotate_arrangement(arr, 5) == arr


def test_count_representatives_small_range():
    assert count_representatives(0, 0) == 0
    assert count_representatives(0, 5040) == sum(
        1 for r in range(5040) if perm_unrank(r)[0] == min(perm_unrank(r)[:5]))


def test_random_permutations_seeded():
    a, b = random_permutations(20, 7), random_permutations(20, 7)
    assert a == b
    assert all(sorted(p) == list(range(1, 13)) for p in a)
    assert random_permutations(20, 8) != a


@pytest.fixture(scope='module')
def solver():
    return PermutationSolver(heuristic='dom_wdeg')


def test_solver_on_representatives(solver, ico, tiles):
    for r in range(0, 400, 37):
        pegs = vertex_assignment(perm_unrank(r))
        status, sol = solver.solve(pegs, 10 ** 6)
        assert status is Status.SAT
        assert tuple(sol.vertex_values) == pegs
        assert verify_adts(ico, tiles, sol)


def test_solver_without_portfolio(ico, tiles):
    plain = PermutationSolver(portfolio=False)
    status, sol = plain.solve(vertex_assignment(perm_unrank(123)), 10 ** 6)
    assert status is Status.SAT and verify_adts(ico, tiles, sol)


def test_solver_budget(solver):
    status, sol = solver.solve(vertex_assignment(perm_unrank(0)), 1)
    assert status is Status.BUDGET and sol is None


def test_check_permutations():
    rep = check_permutations(random_permutations(10, 3), 10 ** 6)
    assert rep.processed == rep.sat == 10
    assert rep.counterexamples == [] and rep.undecided == []


def test_empty_range(tmp_path):
    rep = sweep(10, 10, checkpoint=str(tmp_path / 'ck'))
    assert rep.processed == 0 and rep.counterexamples == []


def test_bad_arguments():
    with pytest.raises(ValueError):
        sweep(5, 4)
    with pytest.raises(ValueError):
        sweep(0, 10, workers=0)
    with pytest.raises(ValueError):
        sweep(0, TOTAL_RANKS + 1)


def test_checkpoint_format_and_resume(tmp_path):
    path = str(tmp_path / 'ck.txt')
    rep = sweep(0, 300, checkpoint=path, flush_every=20)
    assert rep.processed == count_representatives(0, 300)
    assert rep.sat == rep.processed
    lines = open(path).read().splitlines()
    assert lines[0] == HEADER
    assert all(ln.startswith('range ') and ln.endswith('counterexamples none') for ln in lines[1:])
    ck = SweepCheckpoint.load(path)
    assert ck.completed() == [(0, 100), (100, 200), (200, 300)]

    again = sweep(0, 300, checkpoint=path, flush_every=20)
    assert again.verdicts() == rep.verdicts()
    assert again.resumed == again.processed
    assert open(path).read().splitlines() == lines

    more = sweep(0, 400, checkpoint=path, flush_every=20)
    assert more.processed == count_representatives(0, 400)
    assert more.resumed == rep.processed


def test_checkpoint_header_mismatch(tmp_path):
    path = tmp_path / 'ck.txt'
    path.write_text('icosoku-sweep v0 total 5\n')
    with pytest.raises(CheckpointError):
        sweep(0, 10, checkpoint=str(path))


def test_checkpoint_bad_record(tmp_path):
    path = tmp_path / 'ck.txt'
    path.write_text(HEADER + '\nrange 0 10 processed\n')
    with pytest.raises(CheckpointError):
        SweepCheckpoint.load(str(path))


def test_checkpoint_overlap_rejected(tmp_path):
    ck = SweepCheckpoint(str(tmp_path / 'ck'))
    ck.add(0, 10, 2, [])
    with pytest.raises(CheckpointError):
        ck.add(5, 15, 2, [])


def test_worker_count_does_not_change_verdicts():
    one = sweep(1000, 1400, workers=1, flush_every=20)
    two = sweep(1000, 1400, workers=2, flush_every=20)
    assert one.verdicts() == two.verdicts()
    assert one.processed == count_representatives(1000, 1400)


def test_subset_count():
    assert SUBSET_COUNT == 10626


@pytest.fixture(scope='module')
def scan():
    return scan_combinations(10 ** 6)


def test_scan_decides_every_subset(scan, ico, tiles):
    assert len(scan) == SUBSET_COUNT
    assert len({v.types for v in scan}) == SUBSET_COUNT
    sat = [v for v in scan if v.status is Status.SAT]
    assert len(sat) == 8
    assert all(v.status is Status.UNSAT for v in scan if v.status is not Status.SAT)
    for v in sat:
        assert verify_adts(ico, tiles, v.solution)
        assert set(v.solution.face_types) == set(v.types)


def test_scan_single_subset_without_implied(tiles):
    types = tuple(t for t in range(1, 25) if t not in (4, 16, 14, 3))
    (v,) = scan_combinations(10 ** 6, implied=False, subsets=[types])
    assert v.status is Status.SAT
    bad = tuple(range(1, 21))
    (w,) = scan_combinations(10 ** 6, subsets=[bad])
    assert w.status is Status.UNSAT and w.reason == 'dot count'
