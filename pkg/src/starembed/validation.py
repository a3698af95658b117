"""Certification of candidate embeddings.

A candidate is a genuine straight-line embedding when all faces keep a
strictly positive signed area, no two edges not sharing an endpoint touch,
every reflex boundary vertex lies strictly inside the convex hull of its
neighbors, and the boundary coordinates match the prescribed polygon.
Touching configurations count as invalid.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from .mesh import vertex_neighbors
from .polygon import reflex_vertices


@dataclass(eq=False)
class ValidityReport:
    face_areas: np.ndarray
    inverted_faces: list
    crossings: list
    reflex_ok: dict
    boundary_mismatches: list
    overall: bool

    def to_dict(self):
        return {
            "overall": bool(self.overall),
            "face_areas": [float(a) for a in self.face_areas],
            "inverted_faces": [int(k) for k in self.inverted_faces],
            "crossings": [[list(e), list(f)] for e, f in self.crossings],
            "reflex_ok": {str(v): bool(ok) for v, ok in self.reflex_ok.items()},
            "boundary_mismatches": [int(v) for v in self.boundary_mismatches],
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            face_areas=np.asarray(data.get("face_areas", []), dtype=float),
            inverted_faces=[int(k) for k in data.get("inverted_faces", [])],
            crossings=[
                (tuple(int(v) for v in e), tuple(int(v) for v in f))
                for e, f in data.get("crossings", [])
            ],
            reflex_ok={int(v): bool(ok) for v, ok in data.get("reflex_ok", {}).items()},
            boundary_mismatches=[int(v) for v in data.get("boundary_mismatches", [])],
            overall=bool(data["overall"]),
        )


def _signed_face_areas(embedding):
    faces = np.asarray(embedding.triangulation.faces, dtype=int)
    pts = embedding.coordinates
    a, b, c = pts[faces[:, 0]], pts[faces[:, 1]], pts[faces[:, 2]]
    return 0.5 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))


def check_orientations(embedding, tol=None):
    """Signed face areas plus the list of faces at or below the tolerance."""
    if tol is None:
        tol = geo.REL_TOL * embedding.diameter ** 2
    areas = _signed_face_areas(embedding)
    bad = [int(k) for k in np.nonzero(areas <= tol)[0]]
    return areas, bad


def check_crossings(embedding, tol=None):
    """All-pairs contact test over edges that do not share an endpoint.

    Reports proper crossings and touching contacts (an endpoint within
    tolerance of another closed segment). Pairs are returned as sorted
    (edge, edge) tuples of vertex indices.
    """
    edges = np.asarray(embedding.triangulation.edges, dtype=int)
    m = len(edges)
    if m < 2:
        return []
    diam = embedding.diameter
    tol_area = geo.REL_TOL * diam ** 2 if tol is None else tol
    tol_len = geo.REL_TOL * max(diam, 1.0)

    pts = embedding.coordinates
    a = pts[edges[:, 0]]
    b = pts[edges[:, 1]]
    d = b - a
    ax, ay = a[:, 0], a[:, 1]
    bx, by = b[:, 0], b[:, 1]
    dx, dy = d[:, 0], d[:, 1]

    # o1[i, j]: orientation of edge j's first endpoint against edge i's line
    o1 = dx[:, None] * (ay[None, :] - ay[:, None]) - dy[:, None] * (ax[None, :] - ax[:, None])
    o2 = dx[:, None] * (by[None, :] - ay[:, None]) - dy[:, None] * (bx[None, :] - ax[:, None])
    straddle = ((o1 > tol_area) & (o2 < -tol_area)) | ((o1 < -tol_area) & (o2 > tol_area))
    proper = straddle & straddle.T

    lengths = np.hypot(dx, dy)
    lengths = np.where(lengths == 0.0, 1.0, lengths)
    # perpendicular distance and normalized projection of endpoints onto edges
    proj1 = ((ax[None, :] - ax[:, None]) * dx[:, None] + (ay[None, :] - ay[:, None]) * dy[:, None]) / lengths[:, None] ** 2
    proj2 = ((bx[None, :] - ax[:, None]) * dx[:, None] + (by[None, :] - ay[:, None]) * dy[:, None]) / lengths[:, None] ** 2
    slack = tol_len / lengths[:, None]
    touch1 = (np.abs(o1) / lengths[:, None] <= tol_len) & (proj1 >= -slack) & (proj1 <= 1.0 + slack)
    touch2 = (np.abs(o2) / lengths[:, None] <= tol_len) & (proj2 >= -slack) & (proj2 <= 1.0 + slack)

    contact = proper | touch1 | touch2 | touch1.T | touch2.T

    shares = (
        (edges[:, 0][:, None] == edges[:, 0][None, :])
        | (edges[:, 0][:, None] == edges[:, 1][None, :])
        | (edges[:, 1][:, None] == edges[:, 0][None, :])
        | (edges[:, 1][:, None] == edges[:, 1][None, :])
    )
    contact &= ~shares
    contact &= np.triu(np.ones((m, m), dtype=bool), k=1)

    pairs = []
    for i, j in np.argwhere(contact):
        pairs.append((tuple(edges[i]), tuple(edges[j])))
    pairs.sort()
    return pairs


def check_reflex_hull(embedding, polygon, angle_margin=1e-9):
    """For each reflex boundary vertex: does it lie strictly inside the convex
    hull of its neighbors' positions?

    Equivalent test: the incident edge directions must span more than a
    half-plane, i.e. the largest circular gap between direction angles stays
    below pi (minus the margin).
    """
    tri = embedding.triangulation
    verdicts = {}
    for idx in reflex_vertices(polygon):
        v = tri.boundary_cycle[idx]
        here = embedding.coordinates[v]
        angles = []
        degenerate = False
        for w in vertex_neighbors(tri, v):
            delta = embedding.coordinates[w] - here
            if np.hypot(*delta) <= geo.REL_TOL * max(embedding.diameter, 1.0):
                degenerate = True
                break
            angles.append(math.atan2(delta[1], delta[0]))
        if degenerate or len(angles) < 3:
            verdicts[v] = False
            continue
        angles.sort()
        gaps = [b - a for a, b in zip(angles, angles[1:])]
        gaps.append(2.0 * math.pi - (angles[-1] - angles[0]))
        verdicts[v] = max(gaps) < math.pi - angle_margin
    return verdicts


def validate(embedding, polygon, tol=None):
    """Aggregate orientation, crossing, reflex-hull and boundary checks."""
    areas, inverted = check_orientations(embedding, tol=tol)
    crossings = check_crossings(embedding, tol=tol)
    reflex_ok = check_reflex_hull(embedding, polygon)

    cycle = list(embedding.triangulation.boundary_cycle)
    mismatches = []
    allowed = 1e-9 * polygon.diameter
    deltas = embedding.coordinates[cycle] - polygon.coordinates
    for k, delta in enumerate(deltas):
        if np.hypot(*delta) > allowed:
            mismatches.append(cycle[k])

    overall = (
        not inverted
        and not crossings
        and all(reflex_ok.values())
        and not mismatches
    )
    return ValidityReport(
        face_areas=areas,
        inverted_faces=inverted,
        crossings=crossings,
        reflex_ok=reflex_ok,
        boundary_mismatches=mismatches,
        overall=overall,
    )
