"""Icosoku with pairwise distinct tiles, as a finite-domain constraint problem.

Modules:

* :mod:`icosoku.topology` - the labeled icosahedron and its apex rotations
* :mod:`icosoku.tiles` - tile types up to rotation, the 64-row tile table
* :mod:`icosoku.engine` - a small finite-domain solver
* :mod:`icosoku.model` - the puzzle model, solution format and verifier
* :mod:`icosoku.harness` - permutation sweeps and tile-subset scans
* :mod:`icosoku.cli` - the ``icosoku`` command
"""
from .engine import Model, SearchStats, Status, propagate, solve_all, solve_first
from .model import (ModelOptions, Solution, build_adts_model, solve_adts, total_dots,
                    verify_adts)
from .tiles import canonical_tile, tile_table, type_count_by_burnside
from .topology import build_icosahedron, faces_at_vertex, rotation_about_apex

__version__ = '0.1.0'
