"""Independent oracles for cross-checking the package implementations.

Everything here is deliberately written along a different path than the
code under test: dense hand-rolled Gaussian elimination instead of sparse
factorization, per-neighbor accumulation instead of block assembly, a
bounding-box-prefiltered crossing scan instead of the vectorized one, and
visibility decided by sampling segments against matplotlib's
point-in-polygon test.
"""

import numpy as np
from matplotlib.path import Path

from starembed.mesh import vertex_neighbors


def gauss_solve(matrix, rhs):
    """Dense Gaussian elimination with partial pivoting."""
    a = np.array(matrix, dtype=float)
    b = np.array(rhs, dtype=float)
    n = len(b)
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(a[col:, col])))
        if a[pivot, col] == 0.0:
            raise ZeroDivisionError("singular matrix")
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            b[[col, pivot]] = b[[pivot, col]]
        for row in range(col + 1, n):
            factor = a[row, col] / a[col, col]
            if factor != 0.0:
                a[row, col:] -= factor * a[col, col:]
                b[row] -= factor * b[col]
    x = np.zeros(n)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - a[row, row + 1 :] @ x[row + 1 :]) / a[row, row]
    return x


def dense_tutte_solution(triangulation, boundary_coords, weights):
    """Solve the averaging system densely, assembled vertex by vertex."""
    n = triangulation.vertex_count
    boundary = dict(zip(triangulation.boundary_cycle, boundary_coords))
    a = np.zeros((n, n))
    bx = np.zeros(n)
    by = np.zeros(n)
    for v in range(n):
        if v in boundary:
            a[v, v] = 1.0
            bx[v], by[v] = boundary[v]
        else:
            a[v, v] = 1.0
            for w in vertex_neighbors(triangulation, v):
                a[v, w] -= weights.normalized[(v, w)]
    coords = np.column_stack([gauss_solve(a, bx), gauss_solve(a, by)])
    return coords


def dense_epsilon_solution(triangulation, boundary_coords, coupling, eps):
    """Solve the interpolated-energy critical point densely.

    Assembled directly from the per-neighbor equilibrium equations, not
    from the block decomposition used by the package.
    """
    n = triangulation.vertex_count
    boundary = dict(zip(triangulation.boundary_cycle, boundary_coords))
    m_ii = len(triangulation.interior_interior_edges)
    a = np.zeros((n, n))
    bx = np.zeros(n)
    by = np.zeros(n)
    for v in range(n):
        if v in boundary:
            a[v, v] = 1.0
            bx[v], by[v] = boundary[v]
            continue
        for w in vertex_neighbors(triangulation, v):
            if w in boundary:
                coeff = eps * coupling.entries[(v, w)]
                a[v, v] += coeff
                bx[v] += coeff * boundary[w][0]
                by[v] += coeff * boundary[w][1]
            else:
                coeff = (1.0 - eps) / m_ii
                a[v, v] += coeff
                a[v, w] -= coeff
    coords = np.column_stack([gauss_solve(a, bx), gauss_solve(a, by)])
    return coords


def _orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(p, a, b, tol):
    if abs(_orient(a, b, p)) > tol * max(abs(b[0] - a[0]) + abs(b[1] - a[1]), 1e-300):
        return False
    return (
        min(a[0], b[0]) - tol <= p[0] <= max(a[0], b[0]) + tol
        and min(a[1], b[1]) - tol <= p[1] <= max(a[1], b[1]) + tol
    )


def crossings_with_prefilter(embedding, tol_len=None):
    """Edge contacts found by a bounding-box prefilter plus orientation tests."""
    edges = list(embedding.triangulation.edges)
    pts = embedding.coordinates
    diam = max(pts.max(axis=0) - pts.min(axis=0)) if len(pts) else 1.0
    if tol_len is None:
        tol_len = 1e-12 * max(diam, 1.0)
    boxes = []
    for u, v in edges:
        a, b = pts[u], pts[v]
        boxes.append(
            (min(a[0], b[0]), min(a[1], b[1]), max(a[0], b[0]), max(a[1], b[1]))
        )
    found = []
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            if set(edges[i]) & set(edges[j]):
                continue
            bi, bj = boxes[i], boxes[j]
            if bi[2] < bj[0] - tol_len or bj[2] < bi[0] - tol_len:
                continue
            if bi[3] < bj[1] - tol_len or bj[3] < bi[1] - tol_len:
                continue
            a, b = pts[edges[i][0]], pts[edges[i][1]]
            c, d = pts[edges[j][0]], pts[edges[j][1]]
            o1, o2 = _orient(a, b, c), _orient(a, b, d)
            o3, o4 = _orient(c, d, a), _orient(c, d, b)
            hit = (o1 * o2 < 0 and o3 * o4 < 0) or any(
                _on_segment(p, u1, u2, tol_len)
                for p, u1, u2 in ((c, a, b), (d, a, b), (a, c, d), (b, c, d))
            )
            if hit:
                found.append((tuple(edges[i]), tuple(edges[j])))
    found.sort()
    return found


def finite_difference_gradient(energy, coords, interior, step):
    """Central finite differences of a configuration energy at the interior
    coordinates; exact for quadratics up to rounding."""
    grad = np.zeros((len(interior), 2))
    work = np.array(coords, dtype=float)
    for k, v in enumerate(interior):
        for axis in range(2):
            old = work[v, axis]
            work[v, axis] = old + step
            up = energy(work)
            work[v, axis] = old - step
            down = energy(work)
            work[v, axis] = old
            grad[k, axis] = (up - down) / (2.0 * step)
    return grad


def polygon_path(points):
    return Path(np.asarray(points, dtype=float), closed=False)


def sees_whole_boundary(polygon_points, viewpoint, boundary_samples=80, ray_samples=25):
    """Visibility by sampling: does the viewpoint see a dense sampling of the
    boundary along straight segments inside the polygon?"""
    poly = np.asarray(polygon_points, dtype=float)
    path = polygon_path(poly)
    diam = max(poly.max(axis=0) - poly.min(axis=0))
    targets = []
    n = len(poly)
    per_edge = max(2, boundary_samples // n)
    for i in range(n):
        a, c = poly[i], poly[(i + 1) % n]
        for t in np.linspace(0.0, 1.0, per_edge, endpoint=False):
            targets.append(a + t * (c - a))
    ts = np.linspace(0.05, 0.95, ray_samples)
    for target in targets:
        probes = viewpoint[None, :] + ts[:, None] * (target - viewpoint)[None, :]
        inside = path.contains_points(probes, radius=1e-9 * diam) | path.contains_points(
            probes, radius=-1e-9 * diam
        )
        if not inside.all():
            return False
    return True
