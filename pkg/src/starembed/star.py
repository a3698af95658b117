"""Embedding with a strictly star-shaped fixed boundary.

The construction interpolates a weighted squared-length energy between
interior-interior edges and interior-boundary edges. With interpolation
parameter eps in (0, 1) the energy is

    (1 - eps) / (2 * M_II) * sum of L^2 over interior-interior edges
    + eps / 2 * sum of w_ij * L^2 over interior-boundary edges

where the coupling weights w_ij are positive on interior-boundary edges
and sum to one. Its unique minimizer solves a block linear system whose
interior block is symmetric and diagonally dominant. As eps shrinks, all
interior vertices collapse toward a single point determined by the column
sums of the coupling matrix; choosing the coupling so that this point is
an eye of the polygon, halving eps until the solution certifies as an
embedding always terminates for valid inputs.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .embedding import Embedding
from .errors import (
    BudgetExceeded,
    DegreeTwoBoundaryVertex,
    DimensionMismatch,
    DividingEdgePresent,
    EpsilonOutOfRange,
    EyeNotInKernel,
    HalvingExhausted,
    NotStarShaped,
)
from .mesh import find_dividing_edges
from .polygon import (
    EyeCoefficients,
    compute_kernel,
    eye_coefficients,
    select_eye,
)
from .tutte import LinearSystem, _boundary_array, _ordering, residual_norm, solve
from .validation import validate


@dataclass(frozen=True, eq=False)
class BoundaryCouplingMatrix:
    """Sparse N_I x N_B coupling between interior and boundary vertices.

    Supported exactly on interior-boundary edges; all entries sum to one.
    The uniform flavor spreads mass evenly over those edges; the eye flavor
    makes column j sum to the j-th eye coefficient.
    """

    matrix: sp.csr_matrix
    entries: dict
    flavor: str
    interior_order: tuple
    boundary_order: tuple
    mixing: np.ndarray

    def column_sums(self):
        return np.asarray(self.matrix.sum(axis=0)).ravel()

    def row_sums(self):
        return np.asarray(self.matrix.sum(axis=1)).ravel()


@dataclass(eq=False)
class EpsilonSystem:
    """Assembled block system at a fixed interpolation parameter."""

    epsilon: float
    interior_matrix: sp.csr_matrix
    coupling: BoundaryCouplingMatrix
    system: LinearSystem


@dataclass(frozen=True)
class SpectralReport:
    """Dense spectral diagnostics of the interior block."""

    epsilon: float
    n_interior: int
    lambda_min: float
    lambda_min_over_epsilon: float
    lambda_second: float
    ones_deviation: float
    eigvec_deviation: float


def build_coupling(triangulation, mixing=None):
    """Coupling matrix over interior-boundary edges.

    With ``mixing=None`` every edge gets 1 / M_IB (uniform flavor). With eye
    coefficients, the edge from an interior vertex to boundary vertex j gets
    lam_j / (deg_j - 2), so that column j sums to lam_j; this requires a
    dividing-edge-free mesh, which also guarantees deg_j >= 3.
    """
    dividing = find_dividing_edges(triangulation)
    if dividing:
        raise DividingEdgePresent(f"mesh has dividing edges {dividing}")
    ib_edges = triangulation.interior_boundary_edges
    if triangulation.n_interior == 0 or not ib_edges:
        raise ValueError("coupling requires at least one interior-boundary edge")

    boundary = set(triangulation.boundary_cycle)
    _, position = _ordering(triangulation)
    n_i, n_b = triangulation.n_interior, triangulation.n_boundary

    if mixing is None:
        flavor = "uniform"
        lam = None
        weight_of = lambda j: 1.0 / len(ib_edges)
    else:
        flavor = "eye"
        if isinstance(mixing, EyeCoefficients):
            lam = mixing.lam
        else:
            lam = np.asarray(mixing, dtype=float)
        if lam.shape != (n_b,):
            raise DimensionMismatch(
                f"mixing has shape {lam.shape}, expected ({n_b},)"
            )
        lam_by_vertex = dict(zip(triangulation.boundary_cycle, lam))

        def weight_of(j):
            deg = triangulation.degrees[j]
            if deg <= 2:
                raise DegreeTwoBoundaryVertex(
                    f"boundary vertex {j} has degree {deg}; coupling undefined"
                )
            return lam_by_vertex[j] / (deg - 2)

    entries = {}
    rows, cols, vals = [], [], []
    for u, v in ib_edges:
        i, j = (u, v) if v in boundary else (v, u)
        w = weight_of(j)
        entries[(i, j)] = w
        rows.append(position[i])
        cols.append(position[j] - n_i)
        vals.append(w)
    matrix = sp.csr_matrix((vals, (rows, cols)), shape=(n_i, n_b))
    return BoundaryCouplingMatrix(
        matrix=matrix,
        entries=entries,
        flavor=flavor,
        interior_order=triangulation.interior_vertices,
        boundary_order=triangulation.boundary_cycle,
        mixing=lam if lam is None else np.array(lam),
    )


def _interior_matrix(triangulation, coupling, epsilon):
    """Symmetric interior block: off-diagonal -(1 - eps)/M_II on
    interior-interior edges, diagonal balancing the row plus eps times the
    coupling row sum. The sum of all entries equals eps."""
    n_i = triangulation.n_interior
    _, position = _ordering(triangulation)
    m_ii = len(triangulation.interior_interior_edges)

    diag = epsilon * coupling.row_sums()
    rows, cols, vals = [], [], []
    if m_ii > 0:
        off = -(1.0 - epsilon) / m_ii
        for u, v in triangulation.interior_interior_edges:
            pu, pv = position[u], position[v]
            rows += [pu, pv]
            cols += [pv, pu]
            vals += [off, off]
            diag[pu] -= off
            diag[pv] -= off
    rows += list(range(n_i))
    cols += list(range(n_i))
    vals += list(diag)
    return sp.csr_matrix((vals, (rows, cols)), shape=(n_i, n_i))


def assemble_epsilon_system(triangulation, boundary, coupling, epsilon):
    """Full block system [[S, -eps*W], [0, I]] with pinned boundary rows.

    Meshes without interior-interior edges degenerate gracefully: the system
    becomes a pure coupling-weighted average, independent of eps.
    """
    if not 0.0 < epsilon < 1.0:
        raise EpsilonOutOfRange(f"epsilon must lie in (0, 1), got {epsilon}")
    coords = _boundary_array(triangulation, boundary)
    order, position = _ordering(triangulation)
    n_i, n_b = triangulation.n_interior, triangulation.n_boundary

    interior = _interior_matrix(triangulation, coupling, epsilon)
    matrix = sp.bmat(
        [
            [interior, -epsilon * coupling.matrix],
            [None, sp.identity(n_b, format="csr")],
        ],
        format="csr",
    )
    b_x = np.zeros(n_i + n_b)
    b_y = np.zeros(n_i + n_b)
    b_x[n_i:] = coords[:, 0]
    b_y[n_i:] = coords[:, 1]
    system = LinearSystem(
        matrix=matrix,
        b_x=b_x,
        b_y=b_y,
        n_interior=n_i,
        n_boundary=n_b,
        vertex_order=order,
        position=position,
    )
    return EpsilonSystem(
        epsilon=epsilon, interior_matrix=interior, coupling=coupling, system=system
    )


def solve_tolerance(epsilon, base=1e-10):
    """Residual tolerance relaxed with the 1/eps conditioning growth."""
    return max(base, 1e-16 / epsilon)


def solve_at_epsilon(triangulation, polygon, coupling, epsilon, tol=None):
    """Minimize the interpolated energy at a fixed eps.

    The result is not necessarily a valid embedding; validity is certified
    separately. Metadata records eps and the residual.
    """
    es = assemble_epsilon_system(triangulation, polygon, coupling, epsilon)
    if tol is None:
        tol = solve_tolerance(epsilon)
    coords = solve(es.system, tol=tol)
    coords[list(triangulation.boundary_cycle)] = _boundary_array(
        triangulation, polygon
    )
    return Embedding(
        triangulation=triangulation,
        coordinates=coords,
        metadata={
            "method": "epsilon",
            "epsilon": epsilon,
            "coupling": coupling.flavor,
            "residual": residual_norm(es.system, coords),
            "residual_tolerance": tol,
        },
    )


def limit_point(triangulation, boundary, mixing=None):
    """Collapse point of the interior vertices as eps tends to zero.

    Uniform flavor: the boundary vertex v_j carries weight
    (deg_j - 2) / M_IB, which requires a dividing-edge-free mesh to
    normalize. Eye flavor: the weights are the eye coefficients themselves,
    so the limit is the eye.
    """
    coords = _boundary_array(triangulation, boundary)
    if mixing is None:
        if find_dividing_edges(triangulation):
            raise DividingEdgePresent("uniform limit needs a dividing-edge-free mesh")
        m_ib = len(triangulation.interior_boundary_edges)
        if m_ib == 0:
            raise ValueError("mesh has no interior-boundary edges")
        degs = np.array(
            [triangulation.degrees[v] for v in triangulation.boundary_cycle],
            dtype=float,
        )
        lam = (degs - 2.0) / m_ib
    elif isinstance(mixing, EyeCoefficients):
        lam = mixing.lam
    else:
        lam = np.asarray(mixing, dtype=float)
    if lam.shape != (triangulation.n_boundary,):
        raise DimensionMismatch(
            f"mixing has shape {lam.shape}, expected ({triangulation.n_boundary},)"
        )
    return lam @ coords


def spectral_report(triangulation, coupling, epsilon, budget=2000):
    """Dense symmetric eigendecomposition diagnostics of the interior block.

    Reports the smallest eigenvalue (which scales like eps / N_I), the
    spectral distance of eps * S^-1 from the all-ones matrix, and how far
    the lowest eigenvector sits from the normalized constant vector.
    """
    if not 0.0 < epsilon < 1.0:
        raise EpsilonOutOfRange(f"epsilon must lie in (0, 1), got {epsilon}")
    n_i = triangulation.n_interior
    if n_i == 0:
        raise ValueError("no interior vertices to diagnose")
    if n_i > budget:
        raise BudgetExceeded(f"{n_i} interior vertices exceed dense budget {budget}")

    dense = _interior_matrix(triangulation, coupling, epsilon).toarray()
    eigvals, eigvecs = np.linalg.eigh(dense)
    lam_min = float(eigvals[0])
    lam_second = float(eigvals[1]) if n_i > 1 else float(eigvals[0])

    inv_scaled = (eigvecs * (epsilon / eigvals)) @ eigvecs.T
    ones_deviation = float(np.linalg.norm(inv_scaled - np.ones((n_i, n_i)), 2))

    v1 = eigvecs[:, 0]
    u = np.full(n_i, 1.0 / math.sqrt(n_i))
    eigvec_deviation = float(
        min(np.abs(v1 - u).max(), np.abs(v1 + u).max())
    )
    return SpectralReport(
        epsilon=epsilon,
        n_interior=n_i,
        lambda_min=lam_min,
        lambda_min_over_epsilon=lam_min / epsilon,
        lambda_second=lam_second,
        ones_deviation=ones_deviation,
        eigvec_deviation=eigvec_deviation,
    )


def energy_value(embedding, coupling, epsilon):
    """Interpolated weighted squared-length energy of a configuration."""
    tri = embedding.triangulation
    pts = embedding.coordinates
    total = 0.0
    m_ii = len(tri.interior_interior_edges)
    if m_ii > 0:
        acc = 0.0
        for u, v in tri.interior_interior_edges:
            d = pts[u] - pts[v]
            acc += d[0] * d[0] + d[1] * d[1]
        total += (1.0 - epsilon) / (2.0 * m_ii) * acc
    acc = 0.0
    for (i, j), w in coupling.entries.items():
        d = pts[i] - pts[j]
        acc += w * (d[0] * d[0] + d[1] * d[1])
    total += 0.5 * epsilon * acc
    return total


def star_embed(
    triangulation,
    polygon,
    eps0=0.5,
    max_halvings=60,
    eye=None,
    tol=None,
):
    """Embed with a strictly star-shaped boundary by halving eps.

    Builds the eye-targeted coupling from the kernel centroid (or a supplied
    eye, validated against the open kernel), then solves at eps0, eps0/2,
    ... until the full validator passes. Metadata records the accepted eps
    and the number of halvings.
    """
    dividing = find_dividing_edges(triangulation)
    if dividing:
        raise DividingEdgePresent(f"mesh has dividing edges {dividing}")
    if triangulation.n_interior == 0:
        raise ValueError("star embedding requires at least one interior vertex")
    kernel = compute_kernel(polygon)
    if kernel.area <= polygon.area_tolerance:
        raise NotStarShaped("polygon kernel has empty interior")
    if eye is None:
        eye = select_eye(polygon)
    else:
        eye = np.asarray(eye, dtype=float)
        if not kernel.contains(eye, margin=polygon.area_tolerance):
            raise EyeNotInKernel(f"eye {tuple(eye)} is not in the open kernel")

    lam = eye_coefficients(polygon, eye)
    coupling = build_coupling(triangulation, lam)

    eps_independent = len(triangulation.interior_interior_edges) == 0
    attempts = 1 if eps_independent else max_halvings + 1

    embedding = None
    report = None
    epsilon = eps0
    for halvings in range(attempts):
        embedding = solve_at_epsilon(triangulation, polygon, coupling, epsilon, tol=tol)
        report = validate(embedding, polygon)
        if report.overall:
            embedding.metadata.update(
                halvings=halvings, eye=(float(eye[0]), float(eye[1])), method="star"
            )
            embedding.report = report
            return embedding
        epsilon *= 0.5
    raise HalvingExhausted(
        f"no valid embedding within {max_halvings} halvings from eps0={eps0}",
        last_embedding=embedding,
        report=report,
    )
