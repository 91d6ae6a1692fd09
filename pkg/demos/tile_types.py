"""Where the 24 tile types come from.

A tile is a triangle with 0..3 dots in each corner; turning it does not
make a new tile.  Counting rotation classes directly and with Burnside's
lemma gives the same answer.
"""
from collections import defaultdict

from icosoku import canonical_tile, tile_table, type_count_by_burnside

tiles = tile_table()
members = defaultdict(list)
for a, b, c, tid in tiles.rows:
    members[tid].append((a, b, c))

print(f'{len(tiles.rows)} corner triples, {len(members)} types')
for tid in sorted(members):
    canon = tiles.classes[tid]
    print(f'  type {tid:2d}  {canon}  dots {sum(canon)}  rotations {members[tid]}')

# identity fixes all c**3 colourings, each of the two turns fixes the c constant ones
for c in range(1, 6):
    print(f'{c} dot levels: {type_count_by_burnside(c)} types')

print('\n(1,2,3) and (3,2,1) are mirror images but different tiles:',
      canonical_tile(1, 2, 3)[1], canonical_tile(3, 2, 1)[1])
