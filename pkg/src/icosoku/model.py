"""The all-different-tiles Icosoku model and an engine-free verifier.

Variables, in id order:

* ``V[i]`` for every vertex, the peg value ``1..n``;
* ``F[f][0..2]``, the dots on the three corners of face ``f`` (``0..3``);
* ``F[f][3]``, the tile type on face ``f`` (``1..24``).

Constraints: pegs pairwise distinct, tile types pairwise distinct, one
tile-table constraint per face binding corners to type, one sum per vertex
(the corners touching a vertex add up to its peg) and ``V[0] == 1`` to
drop part of the value symmetry.
"""
import json
from dataclasses import dataclass, field
from itertools import combinations

from . import engine
from .engine import SearchStats, Status
from .tiles import tile_table as _default_tile_table
from .topology import build_icosahedron

__all__ = [
    'ModelOptions',
    'AdtsModel',
    'Solution',
    'Verdict',
    'build_adts_model',
    'solve_adts',
    'verify_adts',
    'total_dots',
    'rotate_solution',
    'dot_feasible_type_sets',
    'SolutionFormatError',
]

TYPE_COUNT = 24


class SolutionFormatError(ValueError):
    """Raised when a solution document cannot be parsed."""


@dataclass(frozen=True)
class ModelOptions:
    fix_v0: bool = True
    fixed_vertex_values: tuple = None
    allowed_types: frozenset = None
    implied: bool = False

    def validate(self, t):
        n = t.vertex_count
        if self.fixed_vertex_values is not None:
            vals = list(self.fixed_vertex_values)
            if sorted(vals) != list(range(1, n + 1)):
                raise ValueError(f'fixed_vertex_values must be a permutation of 1..{n}: {vals}')
        if self.allowed_types is not None:
            types = set(self.allowed_types)
            if len(types) != t.face_count:
                raise ValueError(
                    f'allowed_types must hold exactly {t.face_count} ids, got {len(types)}')
            if not types <= set(range(1, TYPE_COUNT + 1)):
                raise ValueError(f'allowed_types outside 1..{TYPE_COUNT}: {sorted(types)}')


@dataclass
class AdtsModel:
    model: engine.Model
    V: list
    F: list
    topology: object
    tiles: object
    options: ModelOptions

    @property
    def variable_count(self):
        return self.model.variable_count

    @property
    def constraint_count(self):
        return self.model.constraint_count

    def solution_from(self, assignment, stats=None):
        return Solution(
            vertex_values=[assignment[x] for x in self.V],
            face_corners=[tuple(assignment[x] for x in row[:3]) for row in self.F],
            face_types=[assignment[row[3]] for row in self.F],
            stats=stats if stats is not None else SearchStats(),
        )


def build_adts_model(t=None, tiles=None, opts=None):
    t = t if t is not None else build_icosahedron()
    tiles = tiles if tiles is not None else _default_tile_table()
    opts = opts if opts is not None else ModelOptions()
    opts.validate(t)

    m = engine.Model()
    n = t.vertex_count
    V = [m.int_var(1, n, f'v{i}') for i in range(n)]
    F = []
    for f in range(t.face_count):
        row = [m.int_var(0, 3, f'F[{f},{c}]') for c in range(3)]
        row.append(m.int_var(1, TYPE_COUNT, f'F[{f},3]'))
        F.append(row)
    if opts.allowed_types is not None:
        for row in F:
            m.restrict(row[3], opts.allowed_types)

    m.post_all_different(V)
    m.post_all_different([row[3] for row in F])
    for row in F:
        m.post_table(row, tiles.rows)
    for v in range(n):
        corners = [F[f][c] for f, c in t.vertex_faces[v]]
        m.post_linear_sum(corners, [1] * len(corners), V[v])
    if opts.fixed_vertex_values is not None:
        for x, value in zip(V, opts.fixed_vertex_values):
            m.post_assign(x, value)
    elif opts.fix_v0:
        m.post_assign(V[0], 1)
    if opts.implied:
        _post_type_budget(m, F, t, tiles, opts.allowed_types)
    return AdtsModel(m, V, F, t, tiles, opts)


def dot_feasible_type_sets(t, tiles, candidates=None):
    """Type sets that can cover the faces with the right number of dots.

    Every corner touches exactly one vertex, so the dots on all placed tiles
    add up to ``1 + 2 + ... + n``.  With one tile per type, only sets of
    ``face_count`` types whose dot totals reach that sum can be placed.
    """
    n, k = t.vertex_count, t.face_count
    target = n * (n + 1) // 2
    pool = sorted(candidates if candidates is not None else tiles.classes)
    weight = {tid: sum(tiles.classes[tid]) for tid in pool}
    total = sum(weight.values())
    out = []
    if k > len(pool):
        return out
    if len(pool) - k < k:
        for left_out in combinations(pool, len(pool) - k):
            if total - sum(weight[x] for x in left_out) == target:
                out.append(frozenset(pool) - frozenset(left_out))
    else:
        for used in combinations(pool, k):
            if sum(weight[x] for x in used) == target:
                out.append(frozenset(used))
    return sorted(out, key=sorted)


def _post_type_budget(m, F, t, tiles, allowed):
    """Redundant constraints from the dot count; they remove no solution.

    Types outside every feasible set are dropped.  When the feasible sets
    are exactly "leave out one type from each of these groups", slack
    variables stand for the left-out types and a single allDifferent over
    types plus slacks makes the matching cover every required type.
    """
    pool = frozenset(allowed if allowed is not None else tiles.classes)
    feasible = dot_feasible_type_sets(t, tiles, pool)
    usable = frozenset().union(*feasible) if feasible else frozenset()
    for row in F:
        m.restrict(row[3], usable)
    groups = _leave_one_out_groups(usable, feasible)
    if groups:
        slacks = [m.var_from(sorted(g), f'unused{i}') for i, g in enumerate(groups)]
        m.post_all_different([row[3] for row in F] + slacks)


def _leave_one_out_groups(usable, feasible):
    if len(feasible) < 2:
        return None
    required = frozenset.intersection(*feasible)
    optional = usable - required
    # values that are never left out together belong to the same group
    left_out = [usable - s for s in feasible]
    groups = []
    for v in sorted(optional):
        for g in groups:
            if all(not (v in lo and w in lo) for w in g for lo in left_out):
                g.add(v)
                break
        else:
            groups.append({v})
    expected = 1
    for g in groups:
        expected *= len(g)
    ok = (expected == len(feasible)
          and all(all(len(lo & g) == 1 for g in groups) for lo in left_out))
    return [frozenset(g) for g in groups] if ok else None


def solve_adts(am, limit=None, heuristic='min_dom'):
    """Run ``solve_first`` on the model; returns ``(status, Solution or None)``."""
    res = engine.solve_first(am.model, limit, heuristic)
    if res.status is Status.SAT:
        return res.status, am.solution_from(res.solution, res.stats)
    return res.status, None


@dataclass
class Solution:
    vertex_values: list
    face_corners: list
    face_types: list
    stats: SearchStats = field(default_factory=SearchStats)

    def to_dict(self):
        return {
            'vertices': list(self.vertex_values),
            'faces': [{'corners': list(c), 'type': t}
                      for c, t in zip(self.face_corners, self.face_types)],
            'stats': {
                'nodes': self.stats.nodes_visited,
                'backtracks': self.stats.backtracks,
                'millis': self.stats.millis,
            },
        }

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, doc):
        try:
            vertices = [int(v) for v in doc['vertices']]
            corners = [tuple(int(x) for x in face['corners']) for face in doc['faces']]
            types = [int(face['type']) for face in doc['faces']]
            st = doc.get('stats') or {}
            stats = SearchStats(int(st.get('nodes', 0)), int(st.get('backtracks', 0)),
                                int(st.get('millis', 0)) / 1000)
        except (KeyError, TypeError, ValueError) as exc:
            raise SolutionFormatError(f'malformed solution document: {exc!r}') from exc
        if any(len(c) != 3 for c in corners):
            raise SolutionFormatError('every face needs exactly 3 corners')
        return cls(vertices, corners, types, stats)

    @classmethod
    def from_json(cls, text):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SolutionFormatError(f'not JSON: {exc}') from exc
        if not isinstance(doc, dict):
            raise SolutionFormatError('solution document must be a JSON object')
        return cls.from_dict(doc)


@dataclass
class Verdict:
    ok: bool
    problems: list

    def __bool__(self):
        return self.ok

    def checks_failed(self):
        return sorted({p[0] for p in self.problems})


def verify_adts(t, tiles, s):
    """Check a solution directly against the puzzle rules.

    Problems are reported as ``(check, location, message)`` with ``check``
    one of ``'arity'``, ``'a'`` (pegs are a permutation), ``'b'`` (vertex
    sums), ``'c'`` (corner triple matches its type) and ``'d'`` (types
    pairwise distinct).
    """
    n, nf = t.vertex_count, t.face_count
    problems = []
    if len(s.vertex_values) != n or len(s.face_corners) != nf or len(s.face_types) != nf:
        problems.append(('arity', None, f'expected {n} vertices and {nf} faces'))
        return Verdict(False, problems)

    if sorted(s.vertex_values) != list(range(1, n + 1)):
        problems.append(('a', None, f'vertex values {list(s.vertex_values)} are not 1..{n}'))

    for v in range(n):
        dots = sum(s.face_corners[f][c] for f, c in t.vertex_faces[v])
        if dots != s.vertex_values[v]:
            problems.append(('b', v, f'vertex {v}: corners sum to {dots}, peg is {s.vertex_values[v]}'))

    lookup = {(a, b, c): tid for a, b, c, tid in tiles.rows}
    for f, (corners, tid) in enumerate(zip(s.face_corners, s.face_types)):
        expected = lookup.get(tuple(corners))
        if expected != tid:
            problems.append(('c', f, f'face {f}: corners {tuple(corners)} are type {expected}, recorded {tid}'))

    for f, g in combinations(range(nf), 2):
        if s.face_types[f] == s.face_types[g]:
            problems.append(('d', (f, g), f'faces {f} and {g} share type {s.face_types[f]}'))

    return Verdict(not problems, problems)


def total_dots(s):
    return sum(sum(c) for c in s.face_corners)


def rotate_solution(t, s, perm):
    """Carry a solution along a vertex permutation that maps faces to faces.

    The peg at ``v`` moves to ``perm(v)``; each face moves to the face
    holding its image, with corners re-aligned to that face's stored order.
    """
    values = [0] * t.vertex_count
    for v, value in enumerate(s.vertex_values):
        values[perm(v)] = value
    corners = [None] * t.face_count
    types = [None] * t.face_count
    for f, face in enumerate(t.faces):
        hit = t.find_face(tuple(perm(v) for v in face))
        if hit is None:
            raise ValueError(f'permutation does not map face {f} onto a face')
        g, shift = hit
        src = s.face_corners[f]
        corners[g] = tuple(src[(j + shift) % 3] for j in range(3))
        types[g] = s.face_types[f]
    return Solution(values, corners, types, s.stats)
