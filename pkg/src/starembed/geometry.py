"""Low-level planar geometry helpers.

All predicates are tolerance-based: lengths are compared against
``REL_TOL * diameter`` and areas against ``REL_TOL * diameter**2``.
No exact arithmetic anywhere.
"""

import numpy as np

REL_TOL = 1e-12


def orient(a, b, c):
    """Twice the signed area of triangle (a, b, c); positive for a left turn."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def point_set_diameter(points):
    """Largest pairwise distance of a point set (0.0 for fewer than 2 points)."""
    pts = np.asarray(points, dtype=float)
    if pts.shape[0] < 2:
        return 0.0
    diff = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt((diff ** 2).sum(axis=-1).max()))


def polygon_signed_area(points):
    pts = np.asarray(points, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def polygon_centroid(points):
    """Area centroid of a simple polygon; vertex mean if the area vanishes."""
    pts = np.asarray(points, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    area = 0.5 * cross.sum()
    if abs(area) < 1e-300:
        return pts.mean(axis=0)
    cx = ((x + xn) * cross).sum() / (6.0 * area)
    cy = ((y + yn) * cross).sum() / (6.0 * area)
    return np.array([cx, cy])


def convex_hull(points):
    """Indices of the convex hull in CCW order (Andrew's monotone chain).

    Collinear points on the hull boundary are dropped.
    """
    pts = np.asarray(points, dtype=float)
    order = np.lexsort((pts[:, 1], pts[:, 0]))

    def half(indices):
        chain = []
        for i in indices:
            while len(chain) >= 2 and orient(pts[chain[-2]], pts[chain[-1]], pts[i]) <= 0:
                chain.pop()
            chain.append(i)
        return chain

    lower = half(order)
    upper = half(order[::-1])
    return np.array(lower[:-1] + upper[:-1], dtype=int)


def point_in_convex(ccw_points, q, margin=0.0):
    """True if q lies inside a convex CCW polygon with the given signed margin.

    ``margin > 0`` demands strict containment; ``margin < 0`` tolerates points
    slightly outside.
    """
    pts = np.asarray(ccw_points, dtype=float)
    n = len(pts)
    if n < 3:
        return False
    for i in range(n):
        if orient(pts[i], pts[(i + 1) % n], q) <= margin:
            return False
    return True


def clip_halfplane(points, anchor, direction):
    """Clip a convex polygon to the closed half-plane left of a directed line."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n == 0:
        return pts
    rel = pts - np.asarray(anchor, dtype=float)
    s = direction[0] * rel[:, 1] - direction[1] * rel[:, 0]
    out = []
    for i in range(n):
        j = (i + 1) % n
        si, sj = s[i], s[j]
        if si >= 0.0:
            out.append(pts[i])
        if (si > 0.0 > sj) or (si < 0.0 < sj):
            t = si / (si - sj)
            out.append(pts[i] + t * (pts[j] - pts[i]))
    return np.array(out) if out else np.empty((0, 2))


def dedupe_ring(points, tol):
    """Drop consecutive (cyclically) near-duplicate vertices of a ring."""
    pts = np.asarray(points, dtype=float)
    kept = []
    for p in pts:
        if not kept or np.hypot(*(p - kept[-1])) > tol:
            kept.append(p)
    while len(kept) >= 2 and np.hypot(*(kept[0] - kept[-1])) <= tol:
        kept.pop()
    return np.array(kept) if kept else np.empty((0, 2))


def point_segment_distance(p, a, b):
    """Euclidean distance from p to the closed segment [a, b]."""
    ab = (b[0] - a[0], b[1] - a[1])
    ap = (p[0] - a[0], p[1] - a[1])
    denom = ab[0] * ab[0] + ab[1] * ab[1]
    if denom == 0.0:
        return float(np.hypot(*ap))
    t = (ap[0] * ab[0] + ap[1] * ab[1]) / denom
    t = min(1.0, max(0.0, t))
    return float(np.hypot(ap[0] - t * ab[0], ap[1] - t * ab[1]))


def segments_touch(a, b, c, d, tol_area, tol_len):
    """True if closed segments [a,b] and [c,d] share any point.

    Proper crossings use sign tests on the orientation predicate with the
    area tolerance; touching contacts (endpoint on the other segment,
    collinear overlap) use the length tolerance.
    """
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if ((o1 > tol_area and o2 < -tol_area) or (o1 < -tol_area and o2 > tol_area)) and (
        (o3 > tol_area and o4 < -tol_area) or (o3 < -tol_area and o4 > tol_area)
    ):
        return True
    for p, u, v in ((c, a, b), (d, a, b), (a, c, d), (b, c, d)):
        if point_segment_distance(p, u, v) <= tol_len:
            return True
    return False
