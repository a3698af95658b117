"""Shared fixtures and instance generators.

Random meshes come in two families: Delaunay triangulations of convex
polygons plus scattered interior points (may contain dividing edges; fine
for the convex-boundary suites), and combinatorial "ring" meshes (one or
two concentric rings of interior vertices plus a hub, randomized by
guarded edge flips) which can never contain a dividing edge and so satisfy
the hypotheses of the star-shaped construction.
"""

import numpy as np
import pytest
from scipy.spatial import Delaunay

from starembed.formats import pair_with_boundary
from starembed.mesh import build_triangulation, find_dividing_edges
from starembed.polygon import BoundaryPolygon, is_strictly_star_shaped, reflex_vertices

SQUARE_FACES = [(0, 1, 4), (1, 2, 4), (2, 5, 4), (2, 3, 5), (3, 0, 5), (0, 4, 5)]
SQUARE_COORDS = np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
L_SHAPE = np.array([[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]], dtype=float)
REFLEX_QUADS = [
    np.array([[0, 0], [4, 0], [1, 1], [0, 4]], dtype=float),
    np.array([[0, 0], [5, 0], [1.5, 1], [1, 4]], dtype=float),
    np.array([[0, 0], [2, 0], [0.9, 0.7], [0, 2]], dtype=float),
]


@pytest.fixture
def square_two_interior():
    """The canonical 4-boundary, 2-interior test instance on (+-1, +-1)."""
    tri = build_triangulation(6, SQUARE_FACES)
    tri, poly = pair_with_boundary(tri, {i: SQUARE_COORDS[i] for i in range(4)})
    return tri, poly


@pytest.fixture
def equilateral_hub():
    """Equilateral triangle boundary with one interior hub vertex."""
    coords = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]])
    tri = build_triangulation(4, [(0, 1, 3), (1, 2, 3), (2, 0, 3)])
    tri, poly = pair_with_boundary(tri, {i: coords[i] for i in range(3)})
    return tri, poly


@pytest.fixture
def l_shape_ring():
    """L-shaped hexagon with a dividing-edge-free ring mesh (7 interior)."""
    nv, faces = ring_mesh_faces(6)
    tri = build_triangulation(nv, faces)
    tri, poly = pair_with_boundary(tri, {i: L_SHAPE[i] for i in range(6)})
    return tri, poly


def ring_mesh_faces(n_boundary, rings=1, hub=True):
    """Combinatorial disk: boundary cycle, ``rings`` concentric interior
    rings of the same length, and a fan or hub closing the core.

    Every boundary vertex keeps exactly two boundary neighbors and two
    interior ones, so no dividing edge can exist.
    """
    n = n_boundary
    faces = []
    for r in range(rings):
        outer = r * n
        inner = (r + 1) * n
        for j in range(n):
            jn = (j + 1) % n
            faces.append((outer + j, outer + jn, inner + j))
            faces.append((outer + jn, inner + jn, inner + j))
    core = rings * n
    if hub:
        hub_vertex = core + n
        for j in range(n):
            faces.append((core + j, core + (j + 1) % n, hub_vertex))
        return hub_vertex + 1, faces
    for j in range(1, n - 1):
        faces.append((core, core + j, core + j + 1))
    return core + n, faces


def _directed(face):
    return ((face[0], face[1]), (face[1], face[2]), (face[2], face[0]))


def random_flips(faces, n_boundary, rng, attempts):
    """Randomized guarded edge flips preserving disk-ness and the
    no-dividing-edge property."""
    face_list = [tuple(f) for f in faces]
    for _ in range(attempts):
        edge_faces = {}
        for k, f in enumerate(face_list):
            for a, b in _directed(f):
                edge_faces.setdefault(frozenset((a, b)), []).append(k)
        candidates = sorted(
            (e for e, inc in edge_faces.items() if len(inc) == 2), key=sorted
        )
        if not candidates:
            break
        edge = candidates[rng.integers(len(candidates))]
        k1, k2 = edge_faces[edge]
        f1, f2 = face_list[k1], face_list[k2]
        u, v = tuple(edge)
        if (u, v) not in _directed(f1):
            u, v = v, u
        p = next(x for x in f1 if x != u and x != v)
        q = next(x for x in f2 if x != u and x != v)
        if p == q or frozenset((p, q)) in edge_faces:
            continue
        if p < n_boundary and q < n_boundary:
            continue  # would create a dividing edge
        # old quad boundary runs u -> q -> v -> p; rebuild along diagonal p-q
        face_list[k1] = (u, q, p)
        face_list[k2] = (q, v, p)
    return face_list


def random_convex_polygon(rng, n):
    """Strictly convex polygon: jittered angles on a random ellipse."""
    while True:
        base = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=n))
        if np.min(np.diff(np.concatenate([base, [base[0] + 2 * np.pi]]))) < 0.15:
            continue
        a = rng.uniform(1.0, 2.5)
        b = rng.uniform(1.0, 2.5)
        phi = rng.uniform(0.0, np.pi)
        rot = np.array([[np.cos(phi), -np.sin(phi)], [np.sin(phi), np.cos(phi)]])
        pts = np.column_stack([a * np.cos(base), b * np.sin(base)]) @ rot.T
        pts += rng.uniform(-1.0, 1.0, size=2)
        try:
            poly = BoundaryPolygon(coordinates=pts)
        except Exception:
            continue
        if not reflex_vertices(poly):
            return pts


def random_star_polygon(rng, n, spikiness=0.55):
    """Strictly star-shaped (usually non-convex) radial polygon around the
    origin, retried until it has a reflex vertex and a fat kernel."""
    while True:
        angles = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=n))
        if np.min(np.diff(np.concatenate([angles, [angles[0] + 2 * np.pi]]))) < 0.2:
            continue
        radii = rng.uniform(1.0 - spikiness, 1.0 + spikiness, size=n) * 2.0
        pts = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])
        try:
            poly = BoundaryPolygon(coordinates=pts)
        except Exception:
            continue
        if reflex_vertices(poly) and is_strictly_star_shaped(poly):
            return pts


def delaunay_disk(rng, polygon_coords, n_interior):
    """Delaunay triangulation of a convex polygon plus interior points.

    May contain dividing edges (ear triangles); callers that need the
    dividing-edge-free hypothesis use ring meshes instead.
    """
    poly = np.asarray(polygon_coords, dtype=float)
    n_b = len(poly)
    lo, hi = poly.min(axis=0), poly.max(axis=0)
    diam = float(np.hypot(*(hi - lo)))
    inner = []
    guard = 0
    while len(inner) < n_interior and guard < 20000:
        guard += 1
        p = rng.uniform(lo, hi)
        if not _inside_convex(poly, p, margin=0.08 * diam):
            continue
        if inner and np.min(np.hypot(*(np.asarray(inner) - p).T)) < 0.04 * diam:
            continue
        inner.append(p)
    pts = np.vstack([poly, np.asarray(inner).reshape(-1, 2)])
    simplices = Delaunay(pts).simplices
    faces = []
    for tri in simplices:
        a, b, c = pts[tri]
        if (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) < 0:
            tri = tri[::-1]
        faces.append(tuple(int(v) for v in tri))
    triangulation = build_triangulation(len(pts), faces)
    triangulation, boundary_polygon = pair_with_boundary(
        triangulation, {v: pts[v] for v in triangulation.boundary_cycle}
    )
    return triangulation, boundary_polygon


def _inside_convex(poly, p, margin):
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        e = b - a
        if e[0] * (p[1] - a[1]) - e[1] * (p[0] - a[0]) <= margin * np.hypot(*e):
            return False
    return True


def ring_instance(rng, polygon_coords, rings=1, hub=True, flips=12):
    """Dividing-edge-free mesh on the given polygon, randomized by flips."""
    poly = np.asarray(polygon_coords, dtype=float)
    n_b = len(poly)
    nv, faces = ring_mesh_faces(n_b, rings=rings, hub=hub)
    faces = random_flips(faces, n_b, rng, attempts=flips)
    tri = build_triangulation(nv, faces)
    assert not find_dividing_edges(tri)
    tri, boundary_polygon = pair_with_boundary(tri, {i: poly[i] for i in range(n_b)})
    return tri, boundary_polygon
