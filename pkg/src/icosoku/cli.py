"""Command line: ``icosoku {solve,verify,sweep,scan,tiles}``.

Exit codes::

    0  success
    1  model infeasible / counterexample found
    2  bad flags (also a checkpoint that does not match)
    3  node budget exhausted before a decision
    4  solution file could not be parsed
    5  solution file failed verification
"""
import argparse
import logging
import os
import sys

from .engine import Status
from .harness import (DEFAULT_BUDGET, TOTAL_RANKS, CheckpointError, check_permutations,
                      random_permutations, scan_combinations, sweep)
from .model import (ModelOptions, Solution, SolutionFormatError, build_adts_model, solve_adts,
                    verify_adts)
from .tiles import tile_table
from .topology import build_icosahedron

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_FLAGS = 2
EXIT_BUDGET = 3
EXIT_PARSE = 4
EXIT_VERIFY = 5

SOLVE_BUDGET = 10 ** 6
STATS_CAVEAT = 'node and backtrack counts depend on the engine; compare shapes, not numbers'


class FlagError(Exception):
    pass


def _csv_ints(text, name):
    try:
        return tuple(int(x) for x in text.split(','))
    except ValueError:
        raise FlagError(f'{name}: expected comma-separated integers, got {text!r}') from None


def _range(text):
    try:
        lo, hi = (int(x) for x in text.split(':'))
    except ValueError:
        raise FlagError(f'--range: expected lo:hi, got {text!r}') from None
    if not 0 <= lo <= hi <= TOTAL_RANKS:
        raise FlagError(f'--range: need 0 <= lo <= hi <= {TOTAL_RANKS}')
    return lo, hi


def _positive(value, name):
    if value is not None and value < 1:
        raise FlagError(f'{name} must be >= 1')
    return value


def _emit(text, out):
    if out:
        with open(out, 'w') as fh:
            fh.write(text + '\n')
    else:
        print(text)


def cmd_solve(args):
    budget = _positive(args.budget, '--budget') or SOLVE_BUDGET
    fixed = _csv_ints(args.fix_vertices, '--fix-vertices') if args.fix_vertices else None
    types = frozenset(_csv_ints(args.types, '--types')) if args.types else None
    try:
        # with a restricted type set the dot count usually settles it before search
        opts = ModelOptions(fixed_vertex_values=fixed, allowed_types=types,
                            implied=types is not None)
        am = build_adts_model(opts=opts)
    except ValueError as exc:
        raise FlagError(str(exc)) from None
    status, sol = solve_adts(am, budget)
    if status is Status.BUDGET:
        print(f'budget of {budget} nodes exhausted', file=sys.stderr)
        return EXIT_BUDGET
    if status is not Status.SAT:
        print('no ADTS exists for this model', file=sys.stderr)
        return EXIT_INFEASIBLE
    _emit(sol.to_json(indent=2), args.out)
    st = sol.stats
    print('nodes backtracks cpu_ms', file=sys.stderr)
    print(f'{st.nodes_visited} {st.backtracks} {st.millis}', file=sys.stderr)
    print(f'# {STATS_CAVEAT}', file=sys.stderr)
    return EXIT_OK


def cmd_verify(args):
    try:
        with open(args.path) as fh:
            sol = Solution.from_json(fh.read())
    except (OSError, SolutionFormatError) as exc:
        print(f'parse error: {exc}', file=sys.stderr)
        return EXIT_PARSE
    verdict = verify_adts(build_icosahedron(), tile_table(), sol)
    if verdict:
        print('ok')
        return EXIT_OK
    for check, where, msg in verdict.problems:
        print(f'check {check}: {msg}', file=sys.stderr)
    return EXIT_VERIFY


def _print_report(rep, already_complete=False):
    if already_complete:
        print('already complete')
    cex = ','.join(map(str, rep.counterexamples)) or 'none'
    und = ','.join(map(str, rep.undecided)) or 'none'
    print(f'processed {rep.processed}')
    print(f'sat {rep.sat}')
    print(f'undecided {und}')
    print(f'counterexamples {cex}')
    if rep.processed - rep.resumed:
        solved = rep.processed - rep.resumed
        print(f'nodes {rep.nodes} backtracks {rep.backtracks} max_nodes {rep.max_nodes} '
              f'mean_nodes {rep.nodes / solved:.1f} seconds {rep.elapsed:.1f}')


def cmd_sweep(args):
    budget = _positive(args.budget, '--budget') or DEFAULT_BUDGET
    workers = _positive(args.workers, '--workers') or 1
    if args.sample is not None:
        _positive(args.sample, '--sample')
        if args.range or args.checkpoint:
            raise FlagError('--sample cannot be combined with --range or --checkpoint')
        rep = check_permutations(random_permutations(args.sample, args.seed), budget)
        _print_report(rep)
    else:
        if not args.range:
            raise FlagError('sweep needs --range lo:hi (or --sample n)')
        lo, hi = _range(args.range)
        try:
            rep = sweep(lo, hi, workers=workers, checkpoint=args.checkpoint, node_budget=budget)
        except CheckpointError as exc:
            raise FlagError(str(exc)) from None
        _print_report(rep, already_complete=hi > lo and rep.resumed == rep.processed
                      and not rep.undecided)
    if rep.counterexamples:
        return EXIT_INFEASIBLE
    if rep.undecided:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_scan(args):
    budget = _positive(args.budget, '--budget') or SOLVE_BUDGET
    subsets = None
    if args.types:
        types = _csv_ints(args.types, '--types')
        if len(set(types)) != 20 or not set(types) <= set(range(1, 25)):
            raise FlagError('--types needs 20 distinct ids in 1..24')
        subsets = [types]
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    stream = open(args.report, 'w') if args.report else sys.stdout

    def line(v):
        label = {Status.SAT: 'sat', Status.UNSAT: 'unsat', Status.BUDGET: 'undecided'}[v.status]
        extra = ''
        if v.solution is not None and args.out:
            path = os.path.join(args.out, 'witness-' + '-'.join(map(str, v.types)) + '.json')
            with open(path, 'w') as fh:
                fh.write(v.solution.to_json(indent=2) + '\n')
            extra = ' ' + path
        stream.write(f"{','.join(map(str, v.types))} {label} {v.reason}{extra}\n")

    try:
        scan_combinations(budget, subsets=subsets, on_verdict=line)
    finally:
        if stream is not sys.stdout:
            stream.close()
    return EXIT_OK


def cmd_tiles(args):
    for a, b, c, t in tile_table().rows:
        print(f'{a} {b} {c} {t}')
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog='icosoku', description=__doc__.splitlines()[0])
    parser.add_argument('-v', '--verbose', action='store_true')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('solve', help='find the first all-different-tiles solution')
    p.add_argument('--budget', type=int)
    p.add_argument('--fix-vertices', metavar='CSV')
    p.add_argument('--types', metavar='CSV')
    p.add_argument('--out')
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser('verify', help='check a solution file')
    p.add_argument('path')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('sweep', help='solve every peg arrangement in a rank range')
    p.add_argument('--range', metavar='LO:HI')
    p.add_argument('--budget', type=int)
    p.add_argument('--workers', type=int)
    p.add_argument('--checkpoint')
    p.add_argument('--sample', type=int, help='solve this many random assignments instead')
    p.add_argument('--seed', type=int, default=0)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('scan', help='decide every 20-type subset of the 24 tiles')
    p.add_argument('--budget', type=int)
    p.add_argument('--types', metavar='CSV', help='scan this one subset only')
    p.add_argument('--out', help='directory for witness files')
    p.add_argument('--report', help='write verdict lines here instead of stdout')
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser('tiles', help='print the 64-row tile table')
    p.set_defaults(func=cmd_tiles)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_FLAGS
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except FlagError as exc:
        print(f'error: {exc}', file=sys.stderr)
        return EXIT_FLAGS


if __name__ == '__main__':
    sys.exit(main())
