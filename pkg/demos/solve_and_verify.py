"""Find one all-different-tiles arrangement and check it by hand.

Builds the default model (peg 1 on vertex 0), solves it, prints the pegs
and tiles, then checks the result with the engine-free verifier and again
after each turn about vertex 0.
"""
from icosoku import build_adts_model, build_icosahedron, rotation_about_apex, solve_adts
from icosoku import tile_table, total_dots, verify_adts
from icosoku.model import rotate_solution

t = build_icosahedron()
tiles = tile_table()
am = build_adts_model(t, tiles)
print(f'model: {am.variable_count} variables, {am.constraint_count} constraints')
print('constraints:', am.model.inventory())

status, sol = solve_adts(am, limit=10 ** 6)
print('status:', status.name)
st = sol.stats
print(f'search: {st.nodes_visited} nodes, {st.backtracks} backtracks, {st.millis} ms')

print('\npegs by vertex:', sol.vertex_values)
for f, (face, corners, tid) in enumerate(zip(t.faces, sol.face_corners, sol.face_types)):
    print(f'  face {f:2d} on vertices {face}: corners {corners} -> type {tid}')

print('\ntotal dots:', total_dots(sol))
print('verifier:', 'ok' if verify_adts(t, tiles, sol) else 'FAILED')
for k in range(1, 5):
    rot = rotate_solution(t, sol, rotation_about_apex(t, k))
    print(f'turned {k}/5: pegs {rot.vertex_values} ->',
          'ok' if verify_adts(t, tiles, rot) else 'FAILED')
