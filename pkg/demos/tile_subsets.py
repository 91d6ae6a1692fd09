"""Which 20 of the 24 tile types can cover the solid?

The dots on all tiles add up to 1 + 2 + ... + 12 = 78, since every corner
touches exactly one peg.  That alone rules out all but a handful of the
10,626 subsets; each survivor is then handed to the solver.
"""
from collections import Counter

from icosoku import build_icosahedron, tile_table, verify_adts
from icosoku.engine import Status
from icosoku.harness import SUBSET_COUNT, scan_combinations

tiles = tile_table()
weights = {tid: sum(c) for tid, c in tiles.classes.items()}
print('dots on all 24 types:', sum(weights.values()), '-> four left-out types must hold',
      sum(weights.values()) - 78)

verdicts = scan_combinations(10 ** 6)
print(f'{len(verdicts)} of {SUBSET_COUNT} subsets decided')
print(Counter((v.status.name, v.reason) for v in verdicts))

t = build_icosahedron()
for v in verdicts:
    if v.status is Status.SAT:
        left = sorted(set(range(1, 25)) - set(v.types))
        ok = verify_adts(t, tiles, v.solution)
        print(f'  without {left}: solved in {v.nodes} nodes, verified {bool(ok)}')
