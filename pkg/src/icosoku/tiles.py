"""Triangular tiles up to rotation.

A tile carries 0..3 dots on each corner.  Turning it by 120 or 240 degrees
gives the same physical tile, so the 64 corner triples collapse into 24
types.  Type ids follow a fixed order: the four constant tiles, then the
tiles with exactly two equal corners, then the all-distinct ones.
"""
from dataclasses import dataclass
from itertools import combinations, product

__all__ = [
    'DOTS',
    'TileTable',
    'rotations',
    'canonical_triple',
    'canonical_tile',
    'tile_table',
    'type_count_by_burnside',
]

DOTS = range(4)


def rotations(triple):
    a, b, c = triple
    return [(a, b, c), (c, a, b), (b, c, a)]


def canonical_triple(triple):
    return min(rotations(triple))


def _type_order():
    order = [(v, v, v) for v in DOTS]
    pairs = list(combinations(DOTS, 2))
    for a, b in pairs:
        order.append((a, a, b))
        order.append((a, b, b))
    for a, b, c in combinations(DOTS, 3):
        order.append((a, b, c))
        order.append((a, c, b))
    return order


_CLASSES = tuple(_type_order())
_TYPE_OF = {canon: i + 1 for i, canon in enumerate(_CLASSES)}


def canonical_tile(a, b, c):
    """Return ``(canonical_triple, type_id)`` for the corner triple."""
    for x in (a, b, c):
        if x not in DOTS:
            raise ValueError(f'dot count out of range: {x}')
    canon = canonical_triple((a, b, c))
    return canon, _TYPE_OF[canon]


@dataclass(frozen=True)
class TileTable:
    rows: tuple
    classes: dict

    def __post_init__(self):
        object.__setattr__(self, '_lookup', {(a, b, c): t for a, b, c, t in self.rows})

    def type_of(self, triple):
        return self._lookup[tuple(triple)]

    @property
    def type_ids(self):
        return sorted(self.classes)


def tile_table():
    """All 64 ``(a, b, c, type_id)`` rows, row-major in ``(a, b, c)``."""
    rows = []
    for a, b, c in product(DOTS, repeat=3):
        _, tid = canonical_tile(a, b, c)
        rows.append((a, b, c, tid))
    return TileTable(tuple(rows), {i + 1: canon for i, canon in enumerate(_CLASSES)})


def type_count_by_burnside(colors=4):
    # C3 acting on corners: identity fixes colors**3, each proper turn fixes colors
    return (colors ** 3 + 2 * colors) // 3
