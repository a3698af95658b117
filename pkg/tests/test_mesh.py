"""Triangulated-disk construction, classification and invariants."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SQUARE_FACES, ring_mesh_faces
from starembed.errors import DuplicateFace, InconsistentOrientation, NotADisk
from starembed.mesh import (
    build_triangulation,
    find_dividing_edges,
    flip_faces,
    vertex_neighbors,
)

OCTAHEDRON = [
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 1),
    (5, 2, 1), (5, 3, 2), (5, 4, 3), (5, 1, 4),
]
ANNULUS = [
    (0, 1, 4), (1, 5, 4), (1, 2, 5), (2, 6, 5),
    (2, 3, 6), (3, 7, 6), (3, 0, 7), (0, 4, 7),
]
MOEBIUS = [(0, 1, 2), (1, 2, 3), (2, 3, 4), (3, 4, 0), (4, 0, 1)]


def oracle_edge_set(faces):
    """Exhaustive enumeration of undirected edges straight from the faces."""
    out = set()
    for a, b, c in faces:
        out |= {tuple(sorted(p)) for p in ((a, b), (b, c), (c, a))}
    return out


def test_single_triangle():
    tri = build_triangulation(3, [(0, 1, 2)])
    assert tri.boundary_cycle == (0, 1, 2)
    assert tri.n_boundary == 3
    assert tri.n_interior == 0
    assert tri.interior_interior_edges == ()
    assert tri.interior_boundary_edges == ()
    assert find_dividing_edges(tri) == []
    assert vertex_neighbors(tri, 0) == [1, 2]


def test_square_two_interior_classification():
    tri = build_triangulation(6, SQUARE_FACES)
    assert tri.boundary_cycle == (0, 1, 2, 3)
    assert tri.interior_vertices == (4, 5)
    assert tri.interior_interior_edges == ((4, 5),)
    assert len(tri.interior_boundary_edges) == 6
    assert tri.degrees == (4, 3, 4, 3, 4, 4)
    assert set(tri.edges) == oracle_edge_set(SQUARE_FACES)
    assert find_dividing_edges(tri) == []


def test_square_two_interior_fans():
    tri = build_triangulation(6, SQUARE_FACES)
    fan = vertex_neighbors(tri, 4)
    assert fan == [0, 1, 2, 5]
    fan_b2 = vertex_neighbors(tri, 1)
    assert set(fan_b2) == {0, 2, 4}
    # boundary fan runs between the two boundary neighbors
    assert {fan_b2[0], fan_b2[-1]} == {0, 2}


def test_diagonal_square_dividing_edge():
    tri = build_triangulation(4, [(0, 1, 2), (0, 2, 3)])
    assert find_dividing_edges(tri) == [(0, 2)]


def test_not_a_disk_closed_surfaces():
    with pytest.raises(NotADisk):
        build_triangulation(6, OCTAHEDRON)
    with pytest.raises(NotADisk):
        build_triangulation(8, ANNULUS)


def test_moebius_is_unorientable():
    with pytest.raises(InconsistentOrientation):
        build_triangulation(5, MOEBIUS)


def test_duplicate_face_rejected():
    with pytest.raises(DuplicateFace):
        build_triangulation(4, [(0, 1, 2), (0, 2, 3), (2, 0, 1)])


def test_bowtie_rejected():
    # two triangles sharing exactly one vertex pass the Euler count
    with pytest.raises(NotADisk):
        build_triangulation(5, [(0, 1, 2), (0, 3, 4)])


def test_unused_vertex_rejected():
    with pytest.raises(NotADisk):
        build_triangulation(4, [(0, 1, 2)])


def test_out_of_range_and_degenerate_faces():
    with pytest.raises(ValueError):
        build_triangulation(3, [(0, 1, 7)])
    with pytest.raises(ValueError):
        build_triangulation(3, [(0, 1, 1)])


def test_orientation_repair_matches_clean_input():
    clean = build_triangulation(6, SQUARE_FACES)
    messy = [list(f) for f in SQUARE_FACES]
    messy[2] = messy[2][::-1]
    messy[4] = messy[4][::-1]
    repaired = build_triangulation(6, messy)
    assert repaired.edges == clean.edges
    assert repaired.boundary_cycle == clean.boundary_cycle
    assert repaired.degrees == clean.degrees
    assert repaired.interior_interior_edges == clean.interior_interior_edges


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_build_deterministic_under_face_permutation(rnd):
    faces = [list(f) for f in SQUARE_FACES]
    rnd.shuffle(faces)
    rotations = [rnd.randrange(3) for _ in faces]
    faces = [f[k:] + f[:k] for f, k in zip(faces, rotations)]
    tri = build_triangulation(6, faces)
    ref = build_triangulation(6, SQUARE_FACES)
    assert tri.edges == ref.edges
    assert tri.boundary_cycle == ref.boundary_cycle
    assert tri.interior_vertices == ref.interior_vertices
    assert tri.interior_boundary_edges == ref.interior_boundary_edges
    assert tri.degrees == ref.degrees


@pytest.mark.parametrize("n_boundary,rings,hub", [(4, 1, True), (6, 1, False), (8, 2, True)])
def test_mesh_count_invariants(n_boundary, rings, hub):
    nv, faces = ring_mesh_faces(n_boundary, rings=rings, hub=hub)
    tri = build_triangulation(nv, faces)
    n_boundary_edges = len(tri.boundary_cycle)
    assert 2 * len(tri.edges) == 3 * len(tri.faces) + n_boundary_edges
    assert tri.n_interior + tri.n_boundary == tri.vertex_count
    assert tri.vertex_count - len(tri.edges) + len(tri.faces) == 1
    # dividing-edge-free: boundary degree sum identity
    assert find_dividing_edges(tri) == []
    assert sum(tri.degrees[v] - 2 for v in tri.boundary_cycle) == len(
        tri.interior_boundary_edges
    )
    assert all(tri.degrees[v] >= 3 for v in tri.boundary_cycle)


def test_flip_faces_reverses_cycle():
    tri = build_triangulation(6, SQUARE_FACES)
    flipped = flip_faces(tri)
    assert flipped.boundary_cycle == (0, 3, 2, 1)
    assert flipped.edges == tri.edges
    assert flipped.degrees == tri.degrees
