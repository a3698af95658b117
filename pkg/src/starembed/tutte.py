"""Harmonic placement of interior vertices inside a convex fixed boundary.

Each interior vertex is constrained to the weighted average of its
neighbors while boundary vertices are pinned, giving a sparse linear
system whose interior rows are diagonally dominant. For a convex boundary
and row-stochastic weights the solution is always a straight-line
embedding; the validator certifies this on every run anyway.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .embedding import Embedding
from .errors import (
    BoundaryNotConvex,
    DimensionMismatch,
    NonPositiveWeight,
    SolveFailed,
)
from .mesh import vertex_neighbors
from .polygon import BoundaryPolygon, is_convex
from .validation import validate


@dataclass(frozen=True, eq=False)
class WeightScheme:
    """Raw positive weights per directed interior-out edge, plus their
    row-stochastic normalization (one row per interior vertex)."""

    raw: dict
    normalized: dict


def normalize_weights(triangulation, raw):
    """Normalize raw directed-edge weights so each interior row sums to 1.

    ``raw`` maps (interior vertex, neighbor) to a positive weight and must
    cover every directed edge out of every interior vertex.
    """
    normalized = {}
    for v in triangulation.interior_vertices:
        neighbors = vertex_neighbors(triangulation, v)
        total = 0.0
        for w in neighbors:
            if (v, w) not in raw:
                raise ValueError(f"missing weight for directed edge ({v}, {w})")
            c = raw[(v, w)]
            if not c > 0.0:
                raise NonPositiveWeight(f"weight for edge ({v}, {w}) is {c}")
            total += c
        for w in neighbors:
            normalized[(v, w)] = raw[(v, w)] / total
    return WeightScheme(raw=dict(raw), normalized=normalized)


def uniform_weights(triangulation):
    raw = {}
    for v in triangulation.interior_vertices:
        for w in vertex_neighbors(triangulation, v):
            raw[(v, w)] = 1.0
    return normalize_weights(triangulation, raw)


def random_weights(triangulation, seed, low=0.1, high=10.0):
    """Seeded raw weights drawn uniformly from [low, high), in sorted edge
    order so the scheme is reproducible."""
    rng = np.random.default_rng(seed)
    pairs = []
    for v in triangulation.interior_vertices:
        for w in vertex_neighbors(triangulation, v):
            pairs.append((v, w))
    pairs.sort()
    draws = rng.uniform(low, high, size=len(pairs))
    return normalize_weights(triangulation, dict(zip(pairs, draws)))


@dataclass(eq=False)
class LinearSystem:
    """Sparse (N_I + N_B) square system with interior rows first.

    Interior rows average neighbors; boundary rows are identity rows whose
    right-hand side carries the boundary coordinates.
    """

    matrix: sp.csr_matrix
    b_x: np.ndarray
    b_y: np.ndarray
    n_interior: int
    n_boundary: int
    vertex_order: np.ndarray
    position: np.ndarray

    @property
    def interior_block(self):
        n = self.n_interior
        return self.matrix[:n, :n]

    @property
    def coupling_block(self):
        n = self.n_interior
        return self.matrix[:n, n:]

    @property
    def identity_block(self):
        n = self.n_interior
        return self.matrix[n:, n:]


def _boundary_array(triangulation, boundary):
    if isinstance(boundary, BoundaryPolygon):
        coords = boundary.coordinates
    else:
        coords = np.asarray(boundary, dtype=float)
    if coords.shape != (triangulation.n_boundary, 2):
        raise DimensionMismatch(
            f"boundary has shape {coords.shape}, expected ({triangulation.n_boundary}, 2)"
        )
    return coords


def _ordering(triangulation):
    order = np.array(
        list(triangulation.interior_vertices) + list(triangulation.boundary_cycle),
        dtype=int,
    )
    position = np.empty(triangulation.vertex_count, dtype=int)
    position[order] = np.arange(len(order))
    return order, position


def assemble_tutte_system(triangulation, boundary, weights):
    """Assemble the averaging system for the given boundary coordinates.

    ``boundary`` may be a BoundaryPolygon or a raw (N_B, 2) array matched to
    the boundary cycle.
    """
    coords = _boundary_array(triangulation, boundary)
    order, position = _ordering(triangulation)
    n_i, n_b = triangulation.n_interior, triangulation.n_boundary
    n = n_i + n_b

    rows, cols, vals = [], [], []
    for v in triangulation.interior_vertices:
        r = position[v]
        rows.append(r)
        cols.append(r)
        vals.append(1.0)
        for w in vertex_neighbors(triangulation, v):
            rows.append(r)
            cols.append(position[w])
            vals.append(-weights.normalized[(v, w)])
    for k in range(n_b):
        rows.append(n_i + k)
        cols.append(n_i + k)
        vals.append(1.0)

    matrix = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    b_x = np.zeros(n)
    b_y = np.zeros(n)
    b_x[n_i:] = coords[:, 0]
    b_y[n_i:] = coords[:, 1]
    return LinearSystem(
        matrix=matrix,
        b_x=b_x,
        b_y=b_y,
        n_interior=n_i,
        n_boundary=n_b,
        vertex_order=order,
        position=position,
    )


def residual_norm(system, coordinates):
    """Relative residual max over both axes, measured on the full system."""
    x = coordinates[system.vertex_order, 0]
    y = coordinates[system.vertex_order, 1]
    out = 0.0
    for sol, rhs in ((x, system.b_x), (y, system.b_y)):
        err = np.linalg.norm(system.matrix @ sol - rhs)
        scale = np.linalg.norm(rhs)
        out = max(out, err / scale if scale > 0.0 else err)
    return out


def solve(system, tol=1e-10):
    """Direct sparse solve of both coordinate systems.

    Returns an (|V|, 2) array in original vertex order. Raises SolveFailed
    when the factorization breaks down or the relative residual exceeds
    ``tol``.
    """
    matrix = system.matrix.tocsc()
    try:
        lu = spla.splu(matrix)
        sol_x = lu.solve(system.b_x)
        sol_y = lu.solve(system.b_y)
    except RuntimeError as exc:
        raise SolveFailed(f"sparse factorization failed: {exc}") from exc
    if not (np.all(np.isfinite(sol_x)) and np.all(np.isfinite(sol_y))):
        raise SolveFailed("solution contains non-finite entries")

    coords = np.empty((len(system.vertex_order), 2))
    coords[system.vertex_order, 0] = sol_x
    coords[system.vertex_order, 1] = sol_y

    res = residual_norm(system, coords)
    if res > tol:
        raise SolveFailed(f"relative residual {res:.3e} exceeds tolerance {tol:.3e}")
    return coords


def tutte_embed(triangulation, polygon, weights=None, tol=1e-10):
    """Embed with the boundary pinned to a convex polygon.

    Uses uniform weights when none are given; attaches the validator report
    to the returned embedding.
    """
    if not is_convex(polygon):
        raise BoundaryNotConvex("boundary polygon has a reflex vertex")
    if weights is None:
        weights = uniform_weights(triangulation)
    system = assemble_tutte_system(triangulation, polygon, weights)
    coords = solve(system, tol=tol)
    coords[list(triangulation.boundary_cycle)] = polygon.coordinates
    embedding = Embedding(
        triangulation=triangulation,
        coordinates=coords,
        metadata={"method": "tutte", "residual": residual_norm(system, coords)},
    )
    embedding.report = validate(embedding, polygon)
    return embedding
