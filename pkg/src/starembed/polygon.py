"""Fixed boundary polygons: validity, convexity, kernels and eyes.

The kernel of a polygon is the set of points that see the whole polygon;
it equals the intersection of the closed half-planes supported by the
edges. A polygon is strictly star-shaped when that intersection has
positive area, and any interior point of the kernel is an "eye".
"""

from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from .errors import EyeOutsideHull, InvalidPolygon, NotStarShaped


@dataclass(frozen=True, eq=False)
class BoundaryPolygon:
    """Simple CCW polygon, matched index-for-index to a boundary cycle."""

    coordinates: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.coordinates, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
            raise InvalidPolygon("polygon needs an (n, 2) array with n >= 3")
        if not np.all(np.isfinite(pts)):
            raise InvalidPolygon("polygon coordinates must be finite")
        object.__setattr__(self, "coordinates", pts)
        diam = geo.point_set_diameter(pts)
        if diam <= 0.0:
            raise InvalidPolygon("polygon vertices coincide")
        object.__setattr__(self, "_diameter", diam)
        _validate_polygon(pts, diam)
        pts.flags.writeable = False

    @property
    def n_vertices(self):
        return len(self.coordinates)

    @property
    def diameter(self):
        return self._diameter

    @property
    def area_tolerance(self):
        return geo.REL_TOL * self._diameter ** 2

    @property
    def length_tolerance(self):
        return geo.REL_TOL * self._diameter

    def edge_cross_products(self):
        """Cross product of consecutive edge vectors at every vertex."""
        pts = self.coordinates
        prev = np.roll(pts, 1, axis=0)
        nxt = np.roll(pts, -1, axis=0)
        e_in = pts - prev
        e_out = nxt - pts
        return e_in[:, 0] * e_out[:, 1] - e_in[:, 1] * e_out[:, 0]


def _validate_polygon(pts, diam):
    tol_area = geo.REL_TOL * diam ** 2
    tol_len = geo.REL_TOL * diam
    n = len(pts)

    if geo.polygon_signed_area(pts) <= tol_area:
        raise InvalidPolygon("polygon must be counterclockwise with positive area")

    edges = np.roll(pts, -1, axis=0) - pts
    lengths = np.hypot(edges[:, 0], edges[:, 1])
    if np.any(lengths <= tol_len):
        raise InvalidPolygon("polygon has a zero-length edge")

    prev = np.roll(edges, 1, axis=0)
    turns = prev[:, 0] * edges[:, 1] - prev[:, 1] * edges[:, 0]
    if np.any(np.abs(turns) <= tol_area):
        k = int(np.argmin(np.abs(turns)))
        raise InvalidPolygon(f"three consecutive vertices around index {k} are collinear")

    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue  # adjacent edges share exactly their endpoint
            if geo.segments_touch(
                pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n], tol_area, tol_len
            ):
                raise InvalidPolygon(f"edges {i} and {j} intersect: polygon is not simple")


@dataclass(frozen=True, eq=False)
class KernelPolygon:
    """Convex region of points that see the whole polygon (possibly empty)."""

    vertices: np.ndarray
    area: float

    def contains(self, point, margin=0.0):
        return geo.point_in_convex(self.vertices, point, margin)


@dataclass(frozen=True, eq=False)
class EyeCoefficients:
    """Strictly positive convex-combination weights reproducing an eye."""

    lam: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lam", np.asarray(self.lam, dtype=float))


def compute_kernel(polygon):
    """Intersect the closed half-planes supported by the polygon edges.

    Clips a padded bounding box by each edge's interior half-plane; the
    result is convex and may be empty or degenerate (zero area).
    """
    pts = polygon.coordinates
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    pad = 0.5 * polygon.diameter + 1.0
    box = np.array(
        [
            [lo[0] - pad, lo[1] - pad],
            [hi[0] + pad, lo[1] - pad],
            [hi[0] + pad, hi[1] + pad],
            [lo[0] - pad, hi[1] + pad],
        ]
    )
    region = box
    n = len(pts)
    for i in range(n):
        a = pts[i]
        d = pts[(i + 1) % n] - a
        region = geo.clip_halfplane(region, a, d)
        if len(region) == 0:
            break
    region = geo.dedupe_ring(region, 1e-14 * max(polygon.diameter, 1.0))
    if len(region) < 3:
        return KernelPolygon(vertices=region.reshape(-1, 2), area=0.0)
    area = max(geo.polygon_signed_area(region), 0.0)
    return KernelPolygon(vertices=region, area=area)


def is_strictly_star_shaped(polygon):
    """True when the kernel has positive area beyond tolerance."""
    return compute_kernel(polygon).area > polygon.area_tolerance


def select_eye(polygon):
    """Deterministic eye: the centroid of the kernel region."""
    kernel = compute_kernel(polygon)
    if kernel.area <= polygon.area_tolerance:
        raise NotStarShaped("polygon kernel has empty interior")
    return geo.polygon_centroid(kernel.vertices)


def reflex_vertices(polygon):
    """Indices where the interior angle exceeds pi."""
    turns = polygon.edge_cross_products()
    return [int(i) for i in np.nonzero(turns < -polygon.area_tolerance)[0]]


def is_convex(polygon):
    return not reflex_vertices(polygon)


def eye_coefficients(polygon, eye):
    """Strictly positive weights lam with sum 1 and sum(lam_j * v_j) = eye.

    Mixes the uniform distribution with barycentric coordinates of the
    auxiliary point p = (eye - (1 - t) * c) / t inside a convex-hull
    triangle, raising t toward 1 until p falls inside the hull. The uniform
    share keeps every weight positive; the barycentric share makes the
    combination land exactly on the eye.
    """
    pts = polygon.coordinates
    eye = np.asarray(eye, dtype=float)
    hull = geo.convex_hull(pts)
    hull_pts = pts[hull]
    margin = polygon.area_tolerance
    if not geo.point_in_convex(hull_pts, eye, margin):
        raise EyeOutsideHull(f"eye {tuple(eye)} is not interior to the vertex hull")

    n = len(pts)
    centroid = pts.mean(axis=0)
    t = 0.9
    for _ in range(60):
        p = (eye - (1.0 - t) * centroid) / t
        found = _hull_triangle_coordinates(hull_pts, p)
        if found is not None:
            tri, mu = found
            lam = np.full(n, (1.0 - t) / n)
            for local, weight in zip(tri, mu):
                lam[hull[local]] += t * weight
            return EyeCoefficients(lam=lam)
        t = 0.5 * (1.0 + t)
    raise EyeOutsideHull("failed to mix eye into hull coordinates")


def _hull_triangle_coordinates(hull_pts, p):
    """Scan the fan triangulation of the hull for a triangle containing p."""
    m = len(hull_pts)
    for k in range(1, m - 1):
        a, b, c = hull_pts[0], hull_pts[k], hull_pts[k + 1]
        mu = _barycentric(a, b, c, p)
        if mu is not None and np.all(mu >= -1e-9):
            mu = np.clip(mu, 0.0, None)
            mu /= mu.sum()
            return (0, k, k + 1), mu
    return None


def _barycentric(a, b, c, p):
    det = geo.orient(a, b, c)
    if det == 0.0:
        return None
    wa = geo.orient(p, b, c) / det
    wb = geo.orient(a, p, c) / det
    wc = geo.orient(a, b, p) / det
    return np.array([wa, wb, wc])
