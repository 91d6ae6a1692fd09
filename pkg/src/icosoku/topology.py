"""Labeled icosahedron (and a tetrahedron for small cross-checks).

Vertex labeling of the icosahedron::

    0            top apex
    1..5         upper ring A_0..A_4, counter-clockwise seen from above
    6..10        lower ring B_0..B_4, B_i sits below the edge A_i - A_{i+1}
    11           bottom apex

Every face is stored as an ordered vertex triple, counter-clockwise when
viewed from outside the solid.  The corner order matters: a tile may be
turned on its face but never flipped, so reading the corners in a fixed
orientation is what makes the tile type well defined.
"""
from dataclasses import dataclass, field

__all__ = [
    'Topology',
    'VertexPermutation',
    'build_icosahedron',
    'build_tetrahedron',
    'faces_at_vertex',
    'rotation_about_apex',
    'APEX',
    'ANTIPODE',
]

APEX = 0
ANTIPODE = 11


def _upper(i):
    return 1 + i % 5


def _lower(i):
    return 6 + i % 5


@dataclass(frozen=True)
class Topology:
    vertex_count: int
    faces: tuple
    vertex_faces: dict = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.vertex_faces is None:
            incidence = {v: [] for v in range(self.vertex_count)}
            for f, tri in enumerate(self.faces):
                for c, v in enumerate(tri):
                    incidence[v].append((f, c))
            object.__setattr__(
                self, 'vertex_faces', {v: tuple(fc) for v, fc in incidence.items()})

    @property
    def face_count(self):
        return len(self.faces)

    def edges(self):
        """Return the set of undirected edges as sorted vertex pairs."""
        out = set()
        for a, b, c in self.faces:
            for u, w in ((a, b), (b, c), (c, a)):
                out.add((min(u, w), max(u, w)))
        return out

    def directed_edges(self):
        return [(u, w) for a, b, c in self.faces for u, w in ((a, b), (b, c), (c, a))]

    def find_face(self, triple):
        """Locate ``triple`` among the faces up to cyclic rotation.

        Returns ``(face_index, shift)`` with ``faces[face_index][j] ==
        triple[(j + shift) % 3]``, or ``None`` if no face matches.
        """
        for f, face in enumerate(self.faces):
            for s in range(3):
                if all(face[j] == triple[(j + s) % 3] for j in range(3)):
                    return f, s
        return None


@dataclass(frozen=True)
class VertexPermutation:
    image: tuple

    def __post_init__(self):
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError(f'not a bijection: {self.image}')

    def __call__(self, v):
        return self.image[v]

    def __len__(self):
        return len(self.image)

    def compose(self, other):
        """Return ``self after other``."""
        return VertexPermutation(tuple(self.image[other.image[v]] for v in range(len(self))))

    def inverse(self):
        inv = [0] * len(self)
        for v, w in enumerate(self.image):
            inv[w] = v
        return VertexPermutation(tuple(inv))

    def fixed_points(self):
        return [v for v, w in enumerate(self.image) if v == w]

    def is_identity(self):
        return all(v == w for v, w in enumerate(self.image))


def build_icosahedron():
    faces = []
    for i in range(5):
        faces.append((APEX, _upper(i), _upper(i + 1)))
    for i in range(5):
        faces.append((_upper(i + 1), _upper(i), _lower(i)))
    for i in range(5):
        faces.append((_lower(i - 1), _lower(i), _upper(i)))
    for i in range(5):
        faces.append((_lower(i + 1), _lower(i), ANTIPODE))
    return Topology(12, tuple(faces))


def build_tetrahedron():
    faces = ((0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2))
    return Topology(4, faces)


def faces_at_vertex(t, v):
    """The ``(face, corner)`` pairs where vertex ``v`` sits."""
    if not 0 <= v < t.vertex_count:
        raise ValueError(f'vertex index out of range: {v}')
    return list(t.vertex_faces[v])


def rotation_about_apex(t, k):
    """Rotate the icosahedron by ``k`` fifths of a turn about vertex 0.

    Both rings shift by ``k`` positions, the two apices stay put.
    """
    if t.vertex_count != 12:
        raise ValueError('apex rotation is defined for the icosahedron only')
    if not 0 <= k < 5:
        raise ValueError(f'rotation step out of range: {k}')
    image = list(range(12))
    for i in range(5):
        image[_upper(i)] = _upper(i + k)
        image[_lower(i)] = _lower(i + k)
    return VertexPermutation(tuple(image))
