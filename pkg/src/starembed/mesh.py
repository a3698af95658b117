"""Combinatorial triangulated disks.

A :class:`Triangulation` stores the validated face list of a triangulated
2-disk together with derived incidence data: the undirected edge set, the
boundary cycle, the interior/boundary vertex split, the two interior edge
classes (interior-interior and interior-boundary), and per-vertex degrees.
Instances are immutable; every consistency check runs once at construction.
"""

from collections import deque
from dataclasses import dataclass

from .errors import DuplicateFace, InconsistentOrientation, NotADisk


@dataclass(frozen=True)
class Triangulation:
    vertex_count: int
    faces: tuple
    edges: tuple
    boundary_cycle: tuple
    interior_vertices: tuple
    interior_interior_edges: tuple
    interior_boundary_edges: tuple
    degrees: tuple

    @property
    def face_count(self):
        return len(self.faces)

    @property
    def n_boundary(self):
        return len(self.boundary_cycle)

    @property
    def n_interior(self):
        return len(self.interior_vertices)

    @property
    def boundary_edge_set(self):
        cycle = self.boundary_cycle
        n = len(cycle)
        return frozenset(_key(cycle[i], cycle[(i + 1) % n]) for i in range(n))


def _key(u, v):
    return (u, v) if u < v else (v, u)


def _directed_edges(face):
    a, b, c = face
    return ((a, b), (b, c), (c, a))


def _flip(face):
    a, b, c = face
    return (a, c, b)


def build_triangulation(vertex_count, faces):
    """Build and validate a triangulated disk from its oriented face list.

    Faces with inconsistent orientations are repaired by breadth-first
    propagation from the first face; the boundary cycle direction is then
    normalized to start at the lowest boundary index and continue toward
    its lower-indexed cycle neighbor.

    Raises NotADisk, InconsistentOrientation or DuplicateFace on invalid
    input; plain ValueError for malformed face entries.
    """
    return _build(vertex_count, faces, canonical=True)


def _build(vertex_count, faces, canonical):
    if vertex_count < 3:
        raise ValueError("a triangulated disk needs at least 3 vertices")
    if not faces:
        raise ValueError("face list is empty")

    norm = []
    seen = {}
    for k, face in enumerate(faces):
        tri = tuple(int(v) for v in face)
        if len(tri) != 3 or len(set(tri)) != 3:
            raise ValueError(f"face {k} is not a triangle with 3 distinct vertices: {face}")
        for v in tri:
            if not 0 <= v < vertex_count:
                raise ValueError(f"face {k} refers to vertex {v}, out of range 0..{vertex_count - 1}")
        key = frozenset(tri)
        if key in seen:
            raise DuplicateFace(f"faces {seen[key]} and {k} share vertex set {sorted(tri)}")
        seen[key] = k
        norm.append(tri)

    edge_faces = {}
    for k, face in enumerate(norm):
        for u, v in _directed_edges(face):
            edge_faces.setdefault(_key(u, v), []).append(k)
    for edge, incident in edge_faces.items():
        if len(incident) > 2:
            raise NotADisk(f"edge {edge} belongs to {len(incident)} faces (non-manifold)")

    oriented = _repair_orientations(norm, edge_faces)
    cycle = _boundary_cycle(oriented, edge_faces)
    oriented, cycle = _canonicalize(oriented, cycle, canonical)

    used = set()
    adjacency = {}
    for face in oriented:
        for u, v in _directed_edges(face):
            used.add(u)
            adjacency.setdefault(u, set()).add(v)
            adjacency.setdefault(v, set()).add(u)
    if len(used) != vertex_count:
        missing = sorted(set(range(vertex_count)) - used)
        raise NotADisk(f"vertices {missing} belong to no face")

    edges = tuple(sorted(edge_faces))
    if vertex_count - len(edges) + len(oriented) != 1:
        raise NotADisk(
            f"Euler count |V|-|E|+|F| = {vertex_count - len(edges) + len(oriented)}, expected 1"
        )

    boundary = set(cycle)
    for v in range(vertex_count):
        _fan_order(oriented, v, v in boundary)  # raises on pinched links

    interior = tuple(v for v in range(vertex_count) if v not in boundary)
    ii, ib = [], []
    boundary_edges = {
        _key(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))
    }
    for edge in edges:
        if edge in boundary_edges:
            continue
        u_in, v_in = edge[0] not in boundary, edge[1] not in boundary
        if u_in and v_in:
            ii.append(edge)
        elif u_in or v_in:
            ib.append(edge)
        # both endpoints on the boundary: a dividing edge, in neither class

    degrees = tuple(len(adjacency.get(v, ())) for v in range(vertex_count))
    return Triangulation(
        vertex_count=vertex_count,
        faces=tuple(oriented),
        edges=edges,
        boundary_cycle=tuple(cycle),
        interior_vertices=interior,
        interior_interior_edges=tuple(ii),
        interior_boundary_edges=tuple(ib),
        degrees=degrees,
    )


def _repair_orientations(faces, edge_faces):
    """Propagate a consistent orientation from face 0 across shared edges."""
    oriented = [None] * len(faces)
    oriented[0] = faces[0]
    queue = deque([0])
    while queue:
        k = queue.popleft()
        directed = set(_directed_edges(oriented[k]))
        for u, v in directed:
            for m in edge_faces[_key(u, v)]:
                if m == k:
                    continue
                as_given = set(_directed_edges(faces[m]))
                # consistency requires the shared edge reversed in the neighbor
                wants_flip = (u, v) in as_given
                target = _flip(faces[m]) if wants_flip else faces[m]
                if oriented[m] is None:
                    oriented[m] = target
                    queue.append(m)
                elif set(_directed_edges(oriented[m])) != set(_directed_edges(target)):
                    raise InconsistentOrientation(
                        f"faces {k} and {m} cannot be oriented consistently"
                    )
    if any(f is None for f in oriented):
        stranded = [k for k, f in enumerate(oriented) if f is None]
        raise NotADisk(f"faces {stranded} are not edge-connected to face 0")
    return oriented


def _boundary_cycle(faces, edge_faces):
    """Extract the single boundary cycle in the direction induced by the faces."""
    nxt = {}
    for face in faces:
        for u, v in _directed_edges(face):
            if len(edge_faces[_key(u, v)]) == 1:
                if u in nxt:
                    raise NotADisk(f"boundary branches at vertex {u}")
                nxt[u] = v
    if not nxt:
        raise NotADisk("no boundary edge found (closed surface)")
    start = min(nxt)
    cycle = [start]
    v = nxt[start]
    while v != start:
        cycle.append(v)
        if v not in nxt:
            raise NotADisk(f"boundary walk stops at vertex {v}")
        v = nxt[v]
        if len(cycle) > len(nxt):
            raise NotADisk("boundary walk does not close up")
    if len(cycle) != len(nxt):
        raise NotADisk("more than one boundary cycle")
    return cycle


def _canonicalize(faces, cycle, canonical):
    """Rotate the cycle to its lowest index; when ``canonical``, flip globally
    so the next vertex is the lower-indexed of the two cycle neighbors."""
    start = cycle.index(min(cycle))
    cycle = cycle[start:] + cycle[:start]
    if canonical and len(cycle) >= 3 and cycle[1] > cycle[-1]:
        faces = [_flip(f) for f in faces]
        cycle = [cycle[0]] + cycle[1:][::-1]
    return faces, cycle


def _fan_order(faces, v, is_boundary):
    """Neighbors of v in face order: a closed cycle for interior vertices,
    an open chain between the two boundary neighbors otherwise."""
    succ = {}
    for face in faces:
        if v in face:
            i = face.index(v)
            a, b = face[(i + 1) % 3], face[(i + 2) % 3]
            if a in succ:
                raise NotADisk(f"vertex {v} has a non-manifold fan")
            succ[a] = b
    if not succ:
        raise NotADisk(f"vertex {v} belongs to no face")
    if is_boundary:
        starts = [a for a in succ if a not in set(succ.values())]
        if len(starts) != 1:
            raise NotADisk(f"boundary vertex {v} has a pinched fan")
        chain = [starts[0]]
        while chain[-1] in succ:
            chain.append(succ[chain[-1]])
            if len(chain) > len(succ) + 1:
                raise NotADisk(f"vertex {v} has a tangled fan")
        if len(chain) != len(succ) + 1:
            raise NotADisk(f"vertex {v} has a pinched fan")
        return chain
    first = min(succ)
    chain = [first]
    w = succ[first]
    while w != first:
        chain.append(w)
        if w not in succ or len(chain) > len(succ):
            raise NotADisk(f"interior vertex {v} has a pinched fan")
        w = succ[w]
    if len(chain) != len(succ):
        raise NotADisk(f"interior vertex {v} has a pinched fan")
    return chain


def vertex_neighbors(triangulation, v):
    """Neighbors of v in cyclic fan order.

    For a boundary vertex the fan is the open chain from its boundary-cycle
    successor to its predecessor; for an interior vertex the cyclic order
    starts at the lowest-indexed neighbor.
    """
    if not 0 <= v < triangulation.vertex_count:
        raise ValueError(f"vertex {v} out of range")
    boundary = set(triangulation.boundary_cycle)
    return _fan_order(triangulation.faces, v, v in boundary)


def find_dividing_edges(triangulation):
    """Interior edges whose endpoints are both boundary vertices, sorted."""
    boundary = set(triangulation.boundary_cycle)
    hull_edges = triangulation.boundary_edge_set
    return [
        e
        for e in triangulation.edges
        if e not in hull_edges and e[0] in boundary and e[1] in boundary
    ]


def flip_faces(triangulation):
    """The same disk with all face orientations reversed.

    Used when attaching coordinates: the canonical combinatorial direction is
    overridden so that the boundary polygon comes out counterclockwise.
    """
    return _build(
        triangulation.vertex_count,
        [_flip(f) for f in triangulation.faces],
        canonical=False,
    )
