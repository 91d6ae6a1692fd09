"""Permutation sweeps and tile-subset scans over the ADTS model.

Ranks index the arrangements of the pegs 2..12 on vertices 1..11 (vertex 0
always holds peg 1) in lexicographic order.  Rotating the solid about
vertex 0 maps solutions to solutions, so of the five rotations of an
arrangement only the one with the smallest upper-ring peg on vertex 1 is
solved.

The checkpoint is a text file::

    icosoku-sweep v1 total 39916800
    range 0 2000 processed 2000 counterexamples none
    range 2000 4000 processed 1184 counterexamples 2311,2390

One ``range`` line per finished block, sorted by ``lo``; the file is
rewritten through a temporary file and renamed into place.
"""
import logging
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, factorial

import numpy as np

from .engine import SearchStats, Status, solve_first
from .model import (AdtsModel, ModelOptions, build_adts_model, dot_feasible_type_sets,
                    rotate_solution, solve_adts, verify_adts)
from .tiles import tile_table
from .topology import build_icosahedron, rotation_about_apex

__all__ = [
    'TOTAL_RANKS',
    'PEGS',
    'perm_rank',
    'perm_unrank',
    'vertex_assignment',
    'is_c5_representative',
    'rotate_arrangement',
    'count_representatives',
    'random_permutations',
    'PermutationSolver',
    'SweepReport',
    'SweepCheckpoint',
    'CheckpointError',
    'sweep',
    'check_permutations',
    'ComboVerdict',
    'scan_combinations',
]

LOG = logging.getLogger(__name__)

PEGS = tuple(range(2, 13))
TOTAL_RANKS = factorial(len(PEGS))
HEADER = f'icosoku-sweep v1 total {TOTAL_RANKS}'
DEFAULT_BUDGET = 10 ** 7
RETRY_FACTOR = 100
# the apex-rotation portfolio removes most of min_dom's heavy tail, but
# weighted degree is about three times cheaper on average
SWEEP_HEURISTIC = 'dom_wdeg'


# -- ranking ------------------------------------------------------------------


def perm_unrank(r, values=PEGS):
    """The ``r``-th arrangement of ``values`` in lexicographic order."""
    n = len(values)
    if not 0 <= r < factorial(n):
        raise ValueError(f'rank {r} outside [0, {factorial(n)})')
    pool = sorted(values)
    out = []
    for i in range(n - 1, -1, -1):
        q, r = divmod(r, factorial(i))
        out.append(pool.pop(q))
    return tuple(out)


def perm_rank(arrangement):
    """Inverse of :func:`perm_unrank` (ranked among its own values)."""
    pool = sorted(arrangement)
    if len(set(pool)) != len(pool):
        raise ValueError('arrangement has repeated values')
    n = len(pool)
    r = 0
    for i, v in enumerate(arrangement):
        q = pool.index(v)
        r += q * factorial(n - 1 - i)
        pool.pop(q)
    return r


def vertex_assignment(arrangement):
    """Pegs for all 12 vertices: peg 1 on vertex 0, then the arrangement."""
    return (1,) + tuple(arrangement)


def is_c5_representative(arrangement):
    """True iff vertex 1 holds the smallest peg of the upper ring.

    Accepts either the 11 pegs of vertices 1..11 or all 12 pegs.
    """
    ring = arrangement[:5] if len(arrangement) == 11 else arrangement[1:6]
    return ring[0] == min(ring)


def rotate_arrangement(arrangement, k):
    """Pegs of vertices 1..11 after turning the solid ``k`` steps about vertex 0."""
    upper, lower, bottom = arrangement[:5], arrangement[5:10], arrangement[10:]
    k %= 5
    return tuple(upper[-k:] + upper[:-k]) + tuple(lower[-k:] + lower[:-k]) + tuple(bottom) \
        if k else tuple(arrangement)


def count_representatives(lo, hi):
    return sum(1 for r in range(lo, hi) if is_c5_representative(perm_unrank(r)))


def random_permutations(count, seed):
    """``count`` uniformly random peg assignments (all 12 vertices)."""
    rng = np.random.default_rng(seed)
    return [tuple(int(v) + 1 for v in rng.permutation(12)) for _ in range(count)]


# -- solving ------------------------------------------------------------------


class PermutationSolver:
    """Solves the fixed-peg model for many assignments from one template.

    ``implied`` adds the dot-count redundant constraints (see
    :func:`icosoku.model.dot_feasible_type_sets`); they prune no solution,
    only search.

    With ``portfolio`` on, the five copies of an assignment turned about
    vertex 0 are searched round-robin under budgets that grow by
    ``growth`` each round, starting at ``first_budget``.  Any copy that
    finds a solution settles the original (the solution is turned back),
    and any copy proved infeasible proves the original infeasible.  The
    node budget caps the nodes spent over all copies together.
    """

    def __init__(self, implied=True, heuristic='min_dom', portfolio=True,
                 first_budget=200, growth=4):
        self.heuristic = heuristic
        self.portfolio = portfolio
        self.first_budget = first_budget
        self.growth = growth
        self.topology = build_icosahedron()
        self.tiles = tile_table()
        self.implied = implied
        self._template = build_adts_model(
            self.topology, self.tiles, ModelOptions(fix_v0=False, implied=implied))
        self._back = [rotation_about_apex(self.topology, (5 - k) % 5) for k in range(5)]

    def _solve_once(self, pegs, budget):
        am = self._template
        m = am.model.copy()
        for x, value in zip(am.V, pegs):
            m.post_assign(x, value)
        view = AdtsModel(m, am.V, am.F, am.topology, am.tiles, am.options)
        res = solve_first(m, budget, self.heuristic)
        sol = view.solution_from(res.solution, res.stats) if res.found else None
        return res.status, sol, res.stats

    def solve(self, pegs, budget):
        """Return ``(status, Solution or None)`` for a full peg assignment."""
        pegs = tuple(pegs)
        if not self.portfolio:
            status, sol, _ = self._solve_once(pegs, budget)
            return status, sol
        copies = [pegs[:1] + rotate_arrangement(pegs[1:], k) for k in range(5)]
        spent = SearchStats()
        step = self.first_budget
        while True:
            for k, q in enumerate(copies):
                left = budget - spent.nodes_visited
                if left <= 0:
                    return Status.BUDGET, None
                status, sol, stats = self._solve_once(q, min(step, left))
                spent = spent.merge(stats)
                if status is Status.UNSAT:
                    return status, None
                if status is Status.SAT:
                    if k:
                        sol = rotate_solution(self.topology, sol, self._back[k])
                    sol.stats = spent
                    return status, sol
            step *= self.growth


@dataclass
class SweepReport:
    processed: int = 0
    sat: int = 0
    counterexamples: list = field(default_factory=list)
    undecided: list = field(default_factory=list)
    nodes: int = 0
    backtracks: int = 0
    max_nodes: int = 0
    elapsed: float = 0.0
    resumed: int = 0

    def merge(self, other):
        return SweepReport(
            self.processed + other.processed,
            self.sat + other.sat,
            sorted(self.counterexamples + other.counterexamples),
            sorted(self.undecided + other.undecided),
            self.nodes + other.nodes,
            self.backtracks + other.backtracks,
            max(self.max_nodes, other.max_nodes),
            self.elapsed + other.elapsed,
            self.resumed + other.resumed,
        )

    def verdicts(self):
        """The parts of the report that must not depend on how work was split."""
        return self.processed, self.sat, tuple(self.counterexamples), tuple(self.undecided)


class CheckpointError(ValueError):
    pass


@dataclass
class SweepCheckpoint:
    path: str
    records: list = field(default_factory=list)  # (lo, hi, processed, counterexamples)

    @classmethod
    def load(cls, path):
        ck = cls(path)
        if not os.path.exists(path):
            return ck
        with open(path) as fh:
            lines = fh.read().splitlines()
        if not lines or lines[0] != HEADER:
            raise CheckpointError(f'{path}: header mismatch, expected {HEADER!r}')
        for ln in lines[1:]:
            if not ln.strip():
                continue
            parts = ln.split()
            if (len(parts) != 7 or parts[0] != 'range' or parts[3] != 'processed'
                    or parts[5] != 'counterexamples'):
                raise CheckpointError(f'{path}: bad record {ln!r}')
            cex = [] if parts[6] == 'none' else [int(x) for x in parts[6].split(',')]
            ck.records.append((int(parts[1]), int(parts[2]), int(parts[4]), cex))
        ck.records.sort()
        return ck

    def add(self, lo, hi, processed, counterexamples):
        for a, b, _, _ in self.records:
            if lo < b and a < hi:
                raise CheckpointError(f'range {lo}:{hi} overlaps completed {a}:{b}')
        self.records.append((lo, hi, processed, sorted(counterexamples)))
        self.records.sort()

    def completed(self):
        return [(a, b) for a, b, _, _ in self.records]

    def save(self):
        lines = [HEADER]
        for lo, hi, n, cex in self.records:
            c = ','.join(map(str, cex)) if cex else 'none'
            lines.append(f'range {lo} {hi} processed {n} counterexamples {c}')
        folder = os.path.dirname(os.path.abspath(self.path))
        fd, tmp = tempfile.mkstemp(dir=folder, prefix='.sweep-', suffix='.tmp')
        with os.fdopen(fd, 'w') as fh:
            fh.write('\n'.join(lines) + '\n')
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, self.path)

    def summary(self, lo, hi):
        """Report rebuilt from the records that fall inside ``[lo, hi)``."""
        rep = SweepReport()
        for a, b, n, cex in self.records:
            if lo <= a and b <= hi:
                rep.processed += n
                rep.sat += n - len(cex)
                rep.counterexamples.extend(cex)
        rep.counterexamples.sort()
        return rep


def _subtract(lo, hi, done):
    """Parts of ``[lo, hi)`` not covered by the sorted intervals ``done``."""
    out = []
    cur = lo
    for a, b in sorted(done):
        if b <= cur or a >= hi:
            continue
        if a > cur:
            out.append((cur, a))
        cur = max(cur, b)
    if cur < hi:
        out.append((cur, hi))
    return out


def _blocks(intervals, size):
    for lo, hi in intervals:
        for a in range(lo, hi, size):
            yield a, min(a + size, hi)


_WORKER_SOLVERS = {}


def _worker_solver(settings):
    # one template per process and settings
    if settings not in _WORKER_SOLVERS:
        implied, heuristic, portfolio = settings
        _WORKER_SOLVERS[settings] = PermutationSolver(implied, heuristic, portfolio)
    return _WORKER_SOLVERS[settings]


def _run_block(args):
    """Solve every representative in ``[lo, hi)``.

    Returns the report plus the completed sub-ranges (ranks left undecided
    after the retry are cut out so a resume picks them up again).
    """
    lo, hi, budget, settings = args
    solver = _worker_solver(settings)
    rep = SweepReport()
    start = time.perf_counter()
    processed_at = []
    for r in range(lo, hi):
        arr = perm_unrank(r)
        if not is_c5_representative(arr):
            continue
        status, sol = solver.solve(vertex_assignment(arr), budget)
        if status is Status.BUDGET:
            LOG.info('rank %d undecided at %d nodes, retrying', r, budget)
            status, sol = solver.solve(vertex_assignment(arr), budget * RETRY_FACTOR)
        if status is Status.BUDGET:
            rep.undecided.append(r)
            continue
        rep.processed += 1
        processed_at.append(r)
        if status is Status.SAT:
            if not verify_adts(solver.topology, solver.tiles, sol):
                raise AssertionError(f'solver returned an invalid solution for rank {r}')
            rep.sat += 1
            rep.nodes += sol.stats.nodes_visited
            rep.backtracks += sol.stats.backtracks
            rep.max_nodes = max(rep.max_nodes, sol.stats.nodes_visited)
        else:
            rep.counterexamples.append(r)
    rep.elapsed = time.perf_counter() - start

    pieces = []
    cur = lo
    for u in rep.undecided + [hi]:
        if cur < u:
            n = sum(1 for r in processed_at if cur <= r < u)
            cex = [r for r in rep.counterexamples if cur <= r < u]
            pieces.append((cur, u, n, cex))
        cur = u + 1
    return rep, pieces


def sweep(lo, hi, workers=1, checkpoint=None, node_budget=DEFAULT_BUDGET,
          flush_every=10_000, implied=True, heuristic=SWEEP_HEURISTIC, portfolio=True):
    """Solve every C5 representative with rank in ``[lo, hi)``.

    With a checkpoint path, finished blocks are recorded as they complete and
    ranges already recorded are skipped; the returned report then covers
    the recorded ranges inside ``[lo, hi)`` plus this run's work (search
    statistics cover this run only).  ``flush_every`` is the number of
    representatives per block, counted at the long-run density of 1/5.
    """
    if not 0 <= lo <= hi <= TOTAL_RANKS:
        raise ValueError(f'bad rank range {lo}:{hi}')
    if workers < 1:
        raise ValueError('workers must be >= 1')
    if node_budget < 1:
        raise ValueError('node budget must be >= 1')
    ck = SweepCheckpoint.load(checkpoint) if checkpoint else None
    done = ck.completed() if ck else []
    todo = _subtract(lo, hi, done)
    prior = ck.summary(lo, hi) if ck else SweepReport()
    prior.resumed = prior.processed
    settings = (implied, heuristic, portfolio)
    tasks = [(a, b, node_budget, settings) for a, b in _blocks(todo, max(5 * flush_every, 1))]

    report = SweepReport()
    if workers == 1 or len(tasks) <= 1:
        results = map(_run_block, tasks)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        results = pool.map(_run_block, tasks)
    try:
        for rep, pieces in results:
            report = report.merge(rep)
            if ck is not None:
                for piece in pieces:
                    ck.add(*piece)
                ck.save()
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return prior.merge(report)


def check_permutations(pegs_list, node_budget=DEFAULT_BUDGET, implied=True,
                       heuristic=SWEEP_HEURISTIC, portfolio=True, verify=True):
    """Solve a list of full peg assignments; returns a report keyed by list index."""
    solver = _worker_solver((implied, heuristic, portfolio))
    rep = SweepReport()
    start = time.perf_counter()
    for i, pegs in enumerate(pegs_list):
        status, sol = solver.solve(pegs, node_budget)
        if status is Status.BUDGET:
            status, sol = solver.solve(pegs, node_budget * RETRY_FACTOR)
        if status is Status.BUDGET:
            rep.undecided.append(i)
            continue
        rep.processed += 1
        if status is Status.SAT:
            if verify and not verify_adts(solver.topology, solver.tiles, sol):
                raise AssertionError(f'solver returned an invalid solution for {pegs}')
            rep.sat += 1
            rep.nodes += sol.stats.nodes_visited
            rep.backtracks += sol.stats.backtracks
            rep.max_nodes = max(rep.max_nodes, sol.stats.nodes_visited)
        else:
            rep.counterexamples.append(i)
    rep.elapsed = time.perf_counter() - start
    return rep


# -- tile subsets -------------------------------------------------------------


@dataclass
class ComboVerdict:
    types: tuple
    status: Status
    solution: object = None
    nodes: int = 0
    reason: str = ''


def scan_combinations(budget, implied=True, subsets=None, on_verdict=None):
    """Decide, for each 20-type subset of the 24 tiles, whether it admits an ADTS.

    Pegs are free apart from peg 1 on vertex 0.  With ``implied`` the dot
    count settles most subsets before any search.  Budget-limited searches
    end as ``Status.BUDGET``; nothing guarantees every subset is decided.
    """
    if budget < 1:
        raise ValueError('budget must be >= 1')
    t = build_icosahedron()
    tiles = tile_table()
    all_types = sorted(tiles.classes)
    if subsets is None:
        subsets = combinations(all_types, t.face_count)
    feasible = set(dot_feasible_type_sets(t, tiles)) if implied else None
    out = []
    for types in subsets:
        types = tuple(sorted(types))
        if feasible is not None and frozenset(types) not in feasible:
            v = ComboVerdict(types, Status.UNSAT, reason='dot count')
        else:
            am = build_adts_model(t, tiles, ModelOptions(allowed_types=frozenset(types),
                                                         implied=implied))
            status, sol = solve_adts(am, budget)
            nodes = sol.stats.nodes_visited if sol else 0
            v = ComboVerdict(types, status, sol, nodes, reason='search')
        out.append(v)
        if on_verdict is not None:
            on_verdict(v)
    return out


SUBSET_COUNT = comb(24, 20)
