import json
from dataclasses import replace

import pytest

from conftest import TETRA_COUNT_FREE, TETRA_COUNT_V0_FIXED
from icosoku.engine import Status, solve_all
from icosoku.model import (ModelOptions, Solution, SolutionFormatError, build_adts_model,
                           dot_feasible_type_sets, rotate_solution, solve_adts, total_dots,
                           verify_adts)
from icosoku.topology import VertexPermutation, rotation_about_apex


@pytest.fixture(scope='module')
def first(ico, tiles):
    status, sol = solve_adts(build_adts_model(ico, tiles), 10 ** 6)
    assert status is Status.SAT
    return sol


def test_model_size(ico, tiles):
    am = build_adts_model(ico, tiles)
    assert am.variable_count == 92
    assert am.constraint_count == 35
    assert am.model.inventory() == {'allDifferent': 2, 'table': 20, 'linearSum': 12, 'assign': 1}


def test_model_size_with_fixed_pegs(ico, tiles):
    am = build_adts_model(ico, tiles, ModelOptions(fixed_vertex_values=tuple(range(1, 13))))
    assert am.variable_count == 92
    assert am.model.inventory()['assign'] == 12


def test_first_solution_verifies(ico, tiles, first):
    assert verify_adts(ico, tiles, first)
    assert first.vertex_values[0] == 1
    assert total_dots(first) == 78
    assert first.stats.backtracks <= first.stats.nodes_visited


def test_fixed_values_are_echoed(ico, tiles):
    pegs = (1, 12, 2, 11, 3, 10, 4, 9, 5, 8, 6, 7)
    status, sol = solve_adts(build_adts_model(ico, tiles, ModelOptions(fixed_vertex_values=pegs)),
                             10 ** 6)
    assert status is Status.SAT
    assert tuple(sol.vertex_values) == pegs
    assert verify_adts(ico, tiles, sol)


@pytest.mark.parametrize('bad', [
    (1, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11),
    tuple(range(1, 12)),
    tuple(range(0, 12)),
])
def test_fixed_values_must_be_permutation(ico, tiles, bad):
    with pytest.raises(ValueError):
        build_adts_model(ico, tiles, ModelOptions(fixed_vertex_values=bad))


def test_allowed_types_checked(ico, tiles):
    with pytest.raises(ValueError):
        build_adts_model(ico, tiles, ModelOptions(allowed_types=frozenset(range(1, 20))))
    with pytest.raises(ValueError):
        build_adts_model(ico, tiles, ModelOptions(allowed_types=frozenset(range(6, 26))))


def test_corner_off_by_one_breaks_vertex_sum(ico, tiles, first):
    corners = [list(c) for c in first.face_corners]
    f = next(i for i, c in enumerate(corners) if c[0] < 3)
    corners[f][0] += 1
    bad = replace(first, face_corners=[tuple(c) for c in corners])
    verdict = verify_adts(ico, tiles, bad)
    assert not verdict
    assert 'b' in verdict.checks_failed()


def test_swapped_types_break_tile_check(ico, tiles, first):
    types = list(first.face_types)
    types[0], types[1] = types[1], types[0]
    verdict = verify_adts(ico, tiles, replace(first, face_types=types))
    assert verdict.checks_failed() == ['c']


def test_duplicate_type_detected(ico, tiles, first):
    types = list(first.face_types)
    types[1] = types[0]
    assert 'd' in verify_adts(ico, tiles, replace(first, face_types=types)).checks_failed()


def test_non_permutation_detected(ico, tiles, first):
    values = list(first.vertex_values)
    values[0] = values[1]
    assert 'a' in verify_adts(ico, tiles, replace(first, vertex_values=values)).checks_failed()


def test_wrong_arity_detected(ico, tiles, first):
    verdict = verify_adts(ico, tiles, replace(first, vertex_values=first.vertex_values[:-1]))
    assert verdict.checks_failed() == ['arity']


def test_total_dots_extremes():
    empty = Solution([0] * 12, [(0, 0, 0)] * 20, [1] * 20)
    full = Solution([0] * 12, [(3, 3, 3)] * 20, [24] * 20)
    assert total_dots(empty) == 0
    assert total_dots(full) == 180


def test_json_round_trip(first):
    back = Solution.from_json(first.to_json())
    assert back.vertex_values == first.vertex_values
    assert back.face_corners == first.face_corners
    assert back.face_types == first.face_types
    doc = json.loads(first.to_json())
    assert set(doc) == {'vertices', 'faces', 'stats'}
    assert set(doc['stats']) == {'nodes', 'backtracks', 'millis'}


@pytest.mark.parametrize('text', ['not json', '[1, 2]', '{"vertices": [1]}',
                                  '{"vertices": [1], "faces": [{"corners": [1, 2], "type": 3}]}'])
def test_json_errors(text):
    with pytest.raises(SolutionFormatError):
        Solution.from_json(text)


def test_rotations_preserve_validity(ico, tiles, first):
    for k in range(5):
        rot = rotate_solution(ico, first, rotation_about_apex(ico, k))
        assert verify_adts(ico, tiles, rot)
        assert sorted(rot.face_types) == sorted(first.face_types)
    assert rotate_solution(ico, first, rotation_about_apex(ico, 0)).face_corners == \
        first.face_corners


def test_rotation_rejects_non_symmetry(ico, first):
    image = list(range(12))
    image[1], image[2] = image[2], image[1]
    image[0], image[3] = image[3], image[0]
    with pytest.raises(ValueError):
        rotate_solution(ico, first, VertexPermutation(tuple(image)))


def test_dot_feasible_type_sets(ico, tiles):
    sets = dot_feasible_type_sets(ico, tiles)
    assert len(sets) == 8
    for s in sets:
        left = set(range(1, 25)) - s
        assert {4, 16} <= left
        assert len(left & {14, 15}) == 1
        assert len(left & {3, 10, 23, 24}) == 1
        assert sum(sum(tiles.classes[t]) for t in s) == 78


@pytest.mark.parametrize('opts,expected', [
    (ModelOptions(), TETRA_COUNT_V0_FIXED),
    (ModelOptions(fix_v0=False), TETRA_COUNT_FREE),
    (ModelOptions(implied=True), TETRA_COUNT_V0_FIXED),
])
@pytest.mark.slow
def test_tetrahedron_count_matches_oracle(tetra, tiles, opts, expected):
    am = build_adts_model(tetra, tiles, opts)
    count, status, stats = solve_all(am.model)
    assert status is Status.COMPLETE
    assert count == expected
    assert stats.backtracks <= stats.nodes_visited


def test_frozen_tetra_counts_agree_with_oracle(tetra_oracle_counts):
    assert tetra_oracle_counts == (TETRA_COUNT_FREE, TETRA_COUNT_V0_FIXED)


def test_tetrahedron_solutions_verify(tetra, tiles):
    am = build_adts_model(tetra, tiles)
    sols = []
    solve_all(am.model, limit=2000, sink=lambda a: sols.append(am.solution_from(a)))
    assert sols
    for s in sols:
        assert verify_adts(tetra, tiles, s)
