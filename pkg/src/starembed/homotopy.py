"""Projective transport of embeddings between non-convex quadrilaterals.

Two simple quadrilaterals with one reflex vertex each, sharing their
convex-hull triangle, are related by a unique projective transformation
(the four vertex correspondences pin it). Transporting a valid embedding
through that map yields a valid embedding of the target quadrilateral,
which assigns to every admissible reflex-vertex position inside the hull
triangle an embedding over it: a section of the position fibration.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from .embedding import Embedding
from .errors import (
    DegenerateCorrespondence,
    PointAtInfinity,
    TargetNotReflex,
)
from .polygon import BoundaryPolygon, reflex_vertices
from .validation import validate


@dataclass(frozen=True, eq=False)
class ProjectiveTransform:
    """Homogeneous 3x3 transform, normalized to bottom-right entry 1 when
    that entry is not vanishingly small (largest coefficient otherwise)."""

    matrix: np.ndarray

    def apply(self, points, min_denominator=1e-9):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        h = self.matrix
        denom = h[2, 0] * pts[:, 0] + h[2, 1] * pts[:, 1] + h[2, 2]
        if np.any(np.abs(denom) < min_denominator):
            k = int(np.argmin(np.abs(denom)))
            raise PointAtInfinity(
                f"point {tuple(pts[k])} maps with homogeneous coordinate {denom[k]:.3e}"
            )
        x = (h[0, 0] * pts[:, 0] + h[0, 1] * pts[:, 1] + h[0, 2]) / denom
        y = (h[1, 0] * pts[:, 0] + h[1, 1] * pts[:, 1] + h[1, 2]) / denom
        out = np.column_stack([x, y])
        return out[0] if np.asarray(points).ndim == 1 else out

    def inverse(self):
        return ProjectiveTransform(matrix=_normalize(np.linalg.inv(self.matrix)))

    def compose(self, other):
        """Transform equal to applying ``other`` first, then this one."""
        return ProjectiveTransform(matrix=_normalize(self.matrix @ other.matrix))


def _normalize(h):
    scale = np.abs(h).max()
    if scale == 0.0:
        raise DegenerateCorrespondence("zero transform")
    if abs(h[2, 2]) > 1e-12 * scale:
        h = h / h[2, 2]
    else:
        idx = np.unravel_index(np.argmax(np.abs(h)), h.shape)
        h = h / h[idx]
    out = np.array(h, dtype=float)
    out.flags.writeable = False
    return out


def _check_general_position(points, label):
    pts = np.asarray(points, dtype=float)
    diam = geo.point_set_diameter(pts)
    tol = geo.REL_TOL * diam ** 2
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if abs(geo.orient(pts[i], pts[j], pts[k])) <= tol:
                    raise DegenerateCorrespondence(
                        f"{label} points {i}, {j}, {k} are collinear"
                    )


def projective_from_quads(src, dst):
    """The unique homography mapping four source points to four targets.

    Solves the standard 8-equation correspondence system with partial
    pivoting; falls back to the homogeneous null-space formulation if the
    inhomogeneous system is singular.
    """
    src = np.asarray(src, dtype=float)
    dst = np.asarray(dst, dtype=float)
    if src.shape != (4, 2) or dst.shape != (4, 2):
        raise DegenerateCorrespondence("need exactly four source and target points")
    _check_general_position(src, "source")
    _check_general_position(dst, "target")

    a = np.zeros((8, 8))
    rhs = np.zeros(8)
    for k in range(4):
        x, y = src[k]
        u, v = dst[k]
        a[2 * k] = [x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y]
        a[2 * k + 1] = [0.0, 0.0, 0.0, x, y, 1.0, -v * x, -v * y]
        rhs[2 * k] = u
        rhs[2 * k + 1] = v

    h = None
    try:
        sol = np.linalg.solve(a, rhs)
        h = np.append(sol, 1.0).reshape(3, 3)
    except np.linalg.LinAlgError:
        pass
    if h is None or not np.all(np.isfinite(h)):
        # homogeneous fallback: smallest singular vector of the 8x9 system
        dlt = np.zeros((8, 9))
        for k in range(4):
            x, y = src[k]
            u, v = dst[k]
            dlt[2 * k] = [x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y, -u]
            dlt[2 * k + 1] = [0.0, 0.0, 0.0, x, y, 1.0, -v * x, -v * y, -v]
        _, _, vt = np.linalg.svd(dlt)
        h = vt[-1].reshape(3, 3)

    transform = ProjectiveTransform(matrix=_normalize(h))
    diam = max(geo.point_set_diameter(src), geo.point_set_diameter(dst))
    mapped = transform.apply(src)
    worst = float(np.hypot(*(mapped - dst).T).max())
    if worst > 1e-10 * diam or abs(np.linalg.det(transform.matrix)) < 1e-12:
        raise DegenerateCorrespondence(
            f"correspondences are too ill-conditioned (residual {worst:.3e})"
        )
    return transform


def transport_embedding(transform, embedding):
    """Map every vertex through the transform; combinatorics unchanged."""
    coords = transform.apply(embedding.coordinates)
    return embedding.with_coordinates(coords, method="transport")


@dataclass(frozen=True, eq=False)
class QuadInstance:
    """A non-convex quadrilateral with its triangulation.

    ``reflex_slot`` is the boundary-cycle position of the reflex vertex;
    the other three vertices form the convex-hull triangle, and admissible
    reflex positions are the points strictly inside it.
    """

    polygon: BoundaryPolygon
    triangulation: object
    reflex_slot: int

    @property
    def reflex_point(self):
        return self.polygon.coordinates[self.reflex_slot]

    @property
    def hull_triangle(self):
        idx = [(self.reflex_slot + k) % 4 for k in (1, 2, 3)]
        return self.polygon.coordinates[idx]

    def polygon_for(self, point):
        coords = np.array(self.polygon.coordinates)
        coords[self.reflex_slot] = point
        return BoundaryPolygon(coordinates=coords)

    def admissible(self, point, angle_margin=1e-9):
        """Strictly inside the hull triangle, with the interior angle at the
        moved vertex exceeding pi by the margin."""
        tri = self.hull_triangle
        margin = self.polygon.area_tolerance
        if not geo.point_in_convex(tri, point, margin):
            return False
        before = self.polygon.coordinates[(self.reflex_slot - 1) % 4]
        after = self.polygon.coordinates[(self.reflex_slot + 1) % 4]
        e_in = np.asarray(point, dtype=float) - before
        e_out = after - np.asarray(point, dtype=float)
        turn = math.atan2(
            e_in[0] * e_out[1] - e_in[1] * e_out[0],
            e_in[0] * e_out[0] + e_in[1] * e_out[1],
        )
        return turn < -angle_margin  # negative turn = interior angle above pi

    def require_admissible(self, point, frame_index=None):
        if not self.admissible(point):
            raise TargetNotReflex(
                f"position {tuple(np.asarray(point, dtype=float))} does not give a "
                "simple quadrilateral with a reflex vertex there",
                frame_index=frame_index,
            )


def make_quad_instance(triangulation, polygon):
    """Validate and wrap a quadrilateral problem."""
    if triangulation.n_boundary != 4 or polygon.n_vertices != 4:
        raise ValueError("quadrilateral instance needs exactly 4 boundary vertices")
    reflex = reflex_vertices(polygon)
    if len(reflex) != 1:
        raise ValueError(f"expected exactly one reflex vertex, found {len(reflex)}")
    return QuadInstance(
        polygon=polygon, triangulation=triangulation, reflex_slot=reflex[0]
    )


def section(base, base_embedding, target, frame_index=None):
    """Transport the base embedding to the fiber over a new reflex position.

    The returned embedding carries the validator report for the target
    quadrilateral and the correspondence residual in its metadata.
    """
    base.require_admissible(target, frame_index=frame_index)
    target_polygon = base.polygon_for(target)
    transform = projective_from_quads(
        base.polygon.coordinates, target_polygon.coordinates
    )
    moved = transport_embedding(transform, base_embedding)
    mapped = transform.apply(base.polygon.coordinates)
    residual = float(np.hypot(*(mapped - target_polygon.coordinates).T).max())
    moved.metadata.update(
        method="section",
        target=(float(target[0]), float(target[1])),
        homography_residual=residual,
    )
    moved.report = validate(moved, target_polygon)
    return moved


@dataclass(eq=False)
class HomotopyPath:
    """Sampled path of embeddings over reflex-vertex positions."""

    embeddings: list
    step_displacements: np.ndarray

    @property
    def all_valid(self):
        return all(e.report is not None and e.report.overall for e in self.embeddings)

    @property
    def max_step_displacement(self):
        return float(self.step_displacements.max()) if len(self.step_displacements) else 0.0


def homotopy_path(base, base_embedding, points):
    """Sample the section along a path of reflex positions.

    Raises at the first inadmissible sample with its index recorded on the
    exception; otherwise returns every validated frame plus the maximum
    vertex displacement between consecutive frames.
    """
    frames = []
    for idx, p in enumerate(points):
        frames.append(section(base, base_embedding, np.asarray(p, dtype=float), frame_index=idx))
    steps = np.array(
        [
            float(np.hypot(*(b.coordinates - a.coordinates).T).max())
            for a, b in zip(frames, frames[1:])
        ]
    )
    return HomotopyPath(embeddings=frames, step_displacements=steps)
