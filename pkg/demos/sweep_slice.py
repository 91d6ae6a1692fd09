"""Solve a slice of peg arrangements, stop halfway and pick it up again.

Peg 1 sits on vertex 0 and the other eleven pegs are ranked in
lexicographic order.  Only one arrangement in five is solved (the others
are turns of it about vertex 0).  The checkpoint file records finished
ranges, so a second call skips them.
"""
import os
import sys
import tempfile

from icosoku.harness import count_representatives, perm_unrank, sweep

lo, hi = (int(x) for x in sys.argv[1:3]) if len(sys.argv) > 2 else (20_187_200, 20_190_800)
print(f'ranks {lo}:{hi}, {count_representatives(lo, hi)} to solve')
print('first arrangement:', perm_unrank(lo))

with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, 'sweep.ck')
    mid = (lo + hi) // 2
    first = sweep(lo, mid, checkpoint=path, flush_every=50)
    print(f'first half: {first.processed} solved, {first.sat} sat, {first.elapsed:.1f}s')
    print(open(path).read())

    whole = sweep(lo, hi, checkpoint=path, flush_every=50)
    print(f'whole slice: {whole.processed} solved ({whole.resumed} from the checkpoint), '
          f'{whole.sat} sat, counterexamples {whole.counterexamples or "none"}')
    print(f'largest search: {whole.max_nodes} nodes')
