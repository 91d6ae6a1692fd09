"""A small finite-domain constraint solver.

Domains are Python ints used as bitsets: value ``v`` is present when bit
``v`` is set, so only non-negative values are supported.  Propagators
narrow a list of such masks in place and report which variables changed.
Search is depth-first, copying the domain list at every branch; it picks
the unfixed variable with the smallest domain (lowest id on ties) and
tries its values in increasing order.

Statistics follow one convention throughout: every child created by a
branching decision counts as a node, and every child whose subtree fails
counts as a backtrack.
"""
import enum
import logging
import time
from collections import deque
from dataclasses import dataclass

__all__ = [
    'Model',
    'Status',
    'SearchStats',
    'SearchResult',
    'AllDifferent',
    'Table',
    'LinearSum',
    'Assign',
    'propagate',
    'solve_first',
    'solve_all',
    'values_of',
    'mask_of',
]

LOG = logging.getLogger(__name__)


class Status(enum.Enum):
    FIXPOINT = 'fixpoint'
    INFEASIBLE = 'infeasible'
    SAT = 'sat'
    UNSAT = 'unsat'
    BUDGET = 'budget'
    COMPLETE = 'complete'


def mask_of(values):
    m = 0
    for v in values:
        if v < 0:
            raise ValueError(f'negative domain value: {v}')
        m |= 1 << v
    return m


def values_of(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _lo(mask):
    return (mask & -mask).bit_length() - 1


def _hi(mask):
    return mask.bit_length() - 1


def _window(lo, hi):
    """Mask with bits lo..hi set (empty when lo > hi)."""
    if hi < lo:
        return 0
    if lo < 0:
        lo = 0
    return ((1 << (hi + 1)) - 1) ^ ((1 << lo) - 1)


# -- propagators --------------------------------------------------------------
#
# ``filter(doms)`` returns the list of variable ids it narrowed, or None when
# some domain was wiped out.  A propagator must leave doms at its own fixpoint.


class AllDifferent:
    """Pairwise distinct values.

    Fixed values are removed from the other variables (forward checking)
    until no new variable becomes fixed; a counting check fails as soon as
    fewer values remain than variables.
    """
    kind = 'allDifferent'

    def __init__(self, scope):
        self.scope = tuple(scope)

    def filter(self, doms):
        scope = self.scope
        changed = []
        stack = [x for x in scope if doms[x] & (doms[x] - 1) == 0]
        while stack:
            x = stack.pop()
            b = doms[x]
            for y in scope:
                if y == x:
                    continue
                d = doms[y]
                if d & b:
                    d ^= b
                    if not d:
                        return None
                    doms[y] = d
                    changed.append(y)
                    if d & (d - 1) == 0:
                        stack.append(y)
        union = 0
        for x in scope:
            union |= doms[x]
        if union.bit_count() < len(scope):
            return None
        return changed

    def check(self, values):
        return len(set(values)) == len(values)


class AllDifferentGAC(AllDifferent):
    """Pairwise distinct values, filtered to generalized arc consistency.

    After the forward-checking pass, a maximum matching between variables
    and values is computed; a value stays only if it lies on some maximum
    matching, i.e. its edge closes an alternating cycle or hangs off an
    alternating path that starts at an unmatched value.  Both tests are run
    on the graph "variable i -> variable j when i can take j's matched
    value", closed transitively with bitsets.
    """

    def __init__(self, scope):
        super().__init__(scope)
        self._hint = None

    def filter(self, doms):
        changed = AllDifferent.filter(self, doms)
        if changed is None:
            return None
        scope = self.scope
        n = len(scope)
        ds = [doms[x] for x in scope]

        match = self._match(ds)
        if match is None:
            return None
        self._hint = match
        used = 0
        owner = {}
        for i, v in enumerate(match):
            used |= 1 << v
            owner[v] = i

        # adj[i]: variables whose matched value i could take instead
        adj = [0] * n
        free_vars = 0
        for i in range(n):
            d = ds[i] & ~(1 << match[i])
            if d & ~used:
                free_vars |= 1 << i
            a = 0
            m = d & used
            while m:
                bit = m & -m
                m ^= bit
                a |= 1 << owner[bit.bit_length() - 1]
            adj[i] = a
        reach = adj[:]
        for k in range(n):
            bk = 1 << k
            rk = reach[k]
            if not rk:
                continue
            for i in range(n):
                if reach[i] & bk:
                    reach[i] |= rk
        # j's matched value is reachable from a free value iff j reaches a
        # variable that can take a free value
        open_vars = 0
        for j in range(n):
            if free_vars >> j & 1 or reach[j] & free_vars:
                open_vars |= 1 << j

        for i in range(n):
            cut = 0
            a = adj[i]
            ri = reach[i]
            while a:
                bit = a & -a
                a ^= bit
                j = bit.bit_length() - 1
                if open_vars & bit or reach[j] >> i & 1 and ri & bit:
                    continue
                cut |= 1 << match[j]
            if cut:
                doms[scope[i]] = ds[i] & ~cut
                changed.append(scope[i])
        return changed

    def _match(self, ds):
        n = len(ds)
        match = [-1] * n
        owner = {}
        hint = self._hint
        if hint is not None:
            for i in range(n):
                v = hint[i]
                if ds[i] >> v & 1 and v not in owner:
                    match[i] = v
                    owner[v] = i
        for i in range(n):
            if match[i] < 0 and not _augment(i, ds, match, owner, set()):
                return None
        return match


def _augment(i, ds, match, owner, seen):
    m = ds[i]
    while m:
        bit = m & -m
        m ^= bit
        v = bit.bit_length() - 1
        if v in seen:
            continue
        seen.add(v)
        j = owner.get(v)
        if j is None or _augment(j, ds, match, owner, seen):
            match[i] = v
            owner[v] = i
            return True
    return False


class Table:
    """Positive table: the scope must take one of the listed tuples.

    Every call rescans the tuples still compatible with the current domains
    and keeps exactly the values they support.
    """
    kind = 'table'

    def __init__(self, scope, tuples):
        self.scope = tuple(scope)
        tuples = [tuple(t) for t in tuples]
        for t in tuples:
            if len(t) != len(self.scope):
                raise ValueError(f'tuple {t} does not match scope of arity {len(self.scope)}')
        self.tuples = tuples
        self._masks = [tuple(1 << v for v in t) for t in tuples]

    def filter(self, doms):
        scope = self.scope
        ds = [doms[x] for x in scope]
        support = [0] * len(scope)
        n = len(scope)
        for ms in self._masks:
            for i in range(n):
                if not ds[i] & ms[i]:
                    break
            else:
                for i in range(n):
                    support[i] |= ms[i]
        changed = []
        for i, x in enumerate(scope):
            nd = ds[i] & support[i]
            if nd != ds[i]:
                if not nd:
                    return None
                doms[x] = nd
                changed.append(x)
        return changed

    def check(self, values):
        return tuple(values) in set(self.tuples)


class _Table4(Table):
    """Table specialised for arity 4, the shape of the tile table."""

    def filter(self, doms):
        a, b, c, d = self.scope
        da, db, dc, dd = doms[a], doms[b], doms[c], doms[d]
        sa = sb = sc = sd = 0
        for ma, mb, mc, md in self._masks:
            if da & ma and db & mb and dc & mc and dd & md:
                sa |= ma
                sb |= mb
                sc |= mc
                sd |= md
        changed = []
        if da & sa != da:
            if not da & sa:
                return None
            doms[a] = da & sa
            changed.append(a)
        if db & sb != db:
            if not db & sb:
                return None
            doms[b] = db & sb
            changed.append(b)
        if dc & sc != dc:
            if not dc & sc:
                return None
            doms[c] = dc & sc
            changed.append(c)
        if dd & sd != dd:
            if not dd & sd:
                return None
            doms[d] = dd & sd
            changed.append(d)
        return changed


class LinearSum:
    """``sum(coef_i * x_i) == target`` with bounds reasoning on both sides."""
    kind = 'linearSum'

    def __init__(self, scope, coefficients, target):
        if len(scope) != len(coefficients):
            raise ValueError('coefficients and variables differ in length')
        self.vars = tuple(scope)
        self.coefficients = tuple(coefficients)
        self.target = target
        # move the target to the left: sum(terms) == 0
        self.terms = tuple(zip(self.coefficients, self.vars)) + ((-1, target),)
        self.scope = tuple(dict.fromkeys(self.vars + (target,)))

    def filter(self, doms):
        terms = self.terms
        changed = []
        while True:
            lo_sum = hi_sum = 0
            bounds = []
            for c, x in terms:
                d = doms[x]
                lo, hi = _lo(d), _hi(d)
                if c >= 0:
                    tlo, thi = c * lo, c * hi
                else:
                    tlo, thi = c * hi, c * lo
                bounds.append((tlo, thi))
                lo_sum += tlo
                hi_sum += thi
            if lo_sum > 0 or hi_sum < 0:
                return None
            narrowed = False
            for (c, x), (tlo, thi) in zip(terms, bounds):
                if c == 0:
                    continue
                # c*x must lie in [-(hi_sum - thi), -(lo_sum - tlo)]
                rlo = thi - hi_sum
                rhi = tlo - lo_sum
                if c > 0:
                    xlo, xhi = -(-rlo // c), rhi // c
                else:
                    xlo, xhi = -(-rhi // c), rlo // c
                d = doms[x]
                nd = d & _window(xlo, xhi)
                if nd != d:
                    if not nd:
                        return None
                    doms[x] = nd
                    changed.append(x)
                    narrowed = True
            if not narrowed:
                return changed

    def check(self, values):
        *xs, t = [values[self.scope.index(x)] for x in self.vars + (self.target,)]
        return sum(c * x for c, x in zip(self.coefficients, xs)) == t


class _PositiveSum(LinearSum):
    """Positive coefficients over distinct variables: full domain filtering.

    Reachable partial sums are kept as bitsets, so each value of each term
    is checked against every combination of the others in one shift.
    """

    def filter(self, doms):
        xs = self.vars
        cs = self.coefficients
        n = len(xs)
        prefix = [1] * (n + 1)
        for i in range(n):
            prefix[i + 1] = _shift_or(prefix[i], doms[xs[i]], cs[i])
        t = self.target
        dt = doms[t]
        nt = dt & prefix[n]
        if not nt:
            return None
        changed = []
        if nt != dt:
            doms[t] = nt
            changed.append(t)
        suffix = 1
        for i in range(n - 1, -1, -1):
            others = _conv(prefix[i], suffix)
            x, c = xs[i], cs[i]
            d = doms[x]
            keep = 0
            m = d
            while m:
                bit = m & -m
                m ^= bit
                if (nt >> (c * (bit.bit_length() - 1))) & others:
                    keep |= bit
            if keep != d:
                if not keep:
                    return None
                doms[x] = keep
                changed.append(x)
            suffix = _shift_or(suffix, keep, c)
        return changed


def _shift_or(sums, dom, c):
    out = 0
    while dom:
        bit = dom & -dom
        dom ^= bit
        out |= sums << (c * (bit.bit_length() - 1))
    return out


def _conv(a, b):
    out = 0
    while b:
        bit = b & -b
        b ^= bit
        out |= a << (bit.bit_length() - 1)
    return out


class Assign:
    """``var == value``."""
    kind = 'assign'

    def __init__(self, var, value):
        self.scope = (var,)
        self.value = value
        self._mask = 1 << value if value >= 0 else 0

    def filter(self, doms):
        x = self.scope[0]
        d = doms[x]
        if not d & self._mask:
            return None
        if d != self._mask:
            doms[x] = self._mask
            return [x]
        return []

    def check(self, values):
        return values[0] == self.value


# -- model --------------------------------------------------------------------


class Model:
    """Variables (as domain masks) plus posted constraints."""

    def __init__(self):
        self.domains = []
        self.names = []
        self.constraints = []
        self._watchers = []

    @property
    def variable_count(self):
        return len(self.domains)

    @property
    def constraint_count(self):
        return len(self.constraints)

    def int_var(self, lo, hi, name=None):
        return self.var_from(range(lo, hi + 1), name)

    def var_from(self, values, name=None):
        mask = mask_of(values)
        if not mask:
            raise ValueError('empty initial domain')
        self.domains.append(mask)
        self.names.append(name if name is not None else f'x{len(self.names)}')
        self._watchers.append([])
        return len(self.domains) - 1

    def domain(self, x):
        return values_of(self.domains[x])

    def restrict(self, x, values):
        """Intersect the domain of ``x`` with ``values`` (a model-time edit)."""
        self.domains[x] &= mask_of(values)

    def _post(self, con):
        for x in con.scope:
            if not 0 <= x < len(self.domains):
                raise ValueError(f'unknown variable id {x}')
        idx = len(self.constraints)
        self.constraints.append(con)
        for x in con.scope:
            self._watchers[x].append(idx)
        return con

    def post_all_different(self, variables, strength='gac'):
        """Post allDifferent; ``strength`` is ``'fc'`` or ``'gac'``."""
        variables = list(variables)
        if not variables or len(set(variables)) != len(variables):
            raise ValueError('allDifferent needs distinct variable ids')
        cls = {'fc': AllDifferent, 'gac': AllDifferentGAC}[strength]
        return self._post(cls(variables))

    def post_table(self, variables, tuples):
        tuples = list(tuples)
        cls = _Table4 if len(variables) == 4 else Table
        return self._post(cls(variables, tuples))

    def post_linear_sum(self, variables, coefficients, target):
        variables = list(variables)
        simple = (all(c > 0 for c in coefficients)
                  and len(set(variables)) == len(variables) and target not in variables)
        cls = _PositiveSum if simple else LinearSum
        return self._post(cls(variables, coefficients, target))

    def post_assign(self, var, value):
        return self._post(Assign(var, value))

    def copy(self):
        """Independent copy; constraint objects are immutable and shared."""
        m = Model.__new__(Model)
        m.domains = list(self.domains)
        m.names = list(self.names)
        m.constraints = list(self.constraints)
        m._watchers = [list(w) for w in self._watchers]
        return m

    def inventory(self):
        counts = {}
        for con in self.constraints:
            counts[con.kind] = counts.get(con.kind, 0) + 1
        return counts

    def check(self, assignment):
        """Naive check of a full assignment against every constraint."""
        for con in self.constraints:
            if not con.check([assignment[x] for x in con.scope]):
                return False
        return all(self.domains[x] >> v & 1 for x, v in enumerate(assignment))


# -- propagation and search -----------------------------------------------------


def _fixpoint(constraints, watchers, doms, pending):
    """Run propagators until nothing changes.

    Returns -1 at the fixpoint, else the index of the constraint that wiped
    out a domain.
    """
    queue = deque(pending)
    queued = set(pending)
    while queue:
        ci = queue.popleft()
        queued.discard(ci)
        changed = constraints[ci].filter(doms)
        if changed is None:
            return ci
        for x in changed:
            for cj in watchers[x]:
                if cj != ci and cj not in queued:
                    queued.add(cj)
                    queue.append(cj)
    return -1


def propagate(m):
    """Narrow the model's domains to the joint fixpoint of all propagators."""
    doms = list(m.domains)
    if _fixpoint(m.constraints, m._watchers, doms, range(len(m.constraints))) >= 0:
        return Status.INFEASIBLE
    m.domains[:] = doms
    return Status.FIXPOINT


@dataclass
class SearchStats:
    nodes_visited: int = 0
    backtracks: int = 0
    elapsed: float = 0.0

    @property
    def millis(self):
        return int(round(self.elapsed * 1000))

    def merge(self, other):
        return SearchStats(self.nodes_visited + other.nodes_visited,
                           self.backtracks + other.backtracks,
                           self.elapsed + other.elapsed)


@dataclass
class SearchResult:
    status: Status
    solution: list = None
    stats: SearchStats = None

    @property
    def found(self):
        return self.solution is not None


class _BudgetExceeded(Exception):
    pass


class _Search:
    def __init__(self, m, limit, heuristic='min_dom'):
        if limit is not None and limit <= 0:
            raise ValueError('node budget must be positive')
        if heuristic not in ('min_dom', 'dom_wdeg'):
            raise ValueError(f'unknown heuristic {heuristic!r}')
        self.constraints = m.constraints
        self.watchers = m._watchers
        self.limit = limit
        self.stats = SearchStats()
        self.root = list(m.domains)
        self.heuristic = heuristic
        # failure counts, one per constraint (dom_wdeg only)
        self.weights = [1] * len(self.constraints)

    def solutions(self):
        doms = list(self.root)
        if not all(doms):
            return
        if _fixpoint(self.constraints, self.watchers, doms, range(len(self.constraints))) >= 0:
            return
        yield from self._dfs(doms)

    def _select(self, doms):
        best = -1
        if self.heuristic == 'min_dom':
            best_size = 1 << 30
            for x, d in enumerate(doms):
                if d & (d - 1):
                    size = d.bit_count()
                    if size < best_size:
                        best, best_size = x, size
                        if size == 2:
                            break
            return best
        weights = self.weights
        best_score = None
        for x, d in enumerate(doms):
            if d & (d - 1):
                w = 0
                for ci in self.watchers[x]:
                    w += weights[ci]
                # a variable under no constraint still needs a finite score
                score = d.bit_count() / (w or 1)
                if best_score is None or score < best_score:
                    best, best_score = x, score
        return best

    def _dfs(self, doms):
        best = self._select(doms)
        if best < 0:
            yield [_lo(d) for d in doms]
            return
        stats = self.stats
        d = doms[best]
        watchers = self.watchers[best]
        while d:
            bit = d & -d
            d ^= bit
            if self.limit is not None and stats.nodes_visited >= self.limit:
                raise _BudgetExceeded
            stats.nodes_visited += 1
            child = list(doms)
            child[best] = bit
            culprit = _fixpoint(self.constraints, self.watchers, child, watchers)
            found = False
            if culprit < 0:
                for sol in self._dfs(child):
                    found = True
                    yield sol
            else:
                self.weights[culprit] += 1
            if not found:
                stats.backtracks += 1


def solve_first(m, limit=None, heuristic='min_dom'):
    """Find the first solution in search order.

    Returns a :class:`SearchResult` whose status is SAT, UNSAT (search space
    exhausted) or BUDGET (node limit reached before a decision).
    """
    search = _Search(m, limit, heuristic)
    start = time.perf_counter()
    try:
        sol = next(search.solutions(), None)
        status = Status.SAT if sol is not None else Status.UNSAT
    except _BudgetExceeded:
        sol, status = None, Status.BUDGET
    search.stats.elapsed = time.perf_counter() - start
    return SearchResult(status, sol, search.stats)


def solve_all(m, limit=None, sink=None, heuristic='min_dom'):
    """Enumerate every solution, passing each to ``sink``.

    Returns ``(count, status, stats)``; status is COMPLETE once the space is
    exhausted or BUDGET when the node limit cut it short.
    """
    search = _Search(m, limit, heuristic)
    count = 0
    start = time.perf_counter()
    status = Status.COMPLETE
    try:
        for sol in search.solutions():
            count += 1
            if sink is not None:
                sink(sol)
    except _BudgetExceeded:
        status = Status.BUDGET
    search.stats.elapsed = time.perf_counter() - start
    return count, status, search.stats
