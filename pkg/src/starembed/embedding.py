"""Straight-line realizations of a triangulation in the plane."""

from dataclasses import dataclass, field

import numpy as np


@dataclass(eq=False)
class Embedding:
    """Coordinates for every vertex of a triangulation.

    ``metadata`` records solver provenance (residual norm, interpolation
    parameter, halving count, ...); ``report`` is filled by pipelines that
    run the validator.
    """

    triangulation: object
    coordinates: np.ndarray
    metadata: dict = field(default_factory=dict)
    report: object = None

    def __post_init__(self):
        coords = np.asarray(self.coordinates, dtype=float)
        if coords.shape != (self.triangulation.vertex_count, 2):
            raise ValueError(
                f"coordinates shape {coords.shape} does not match "
                f"{self.triangulation.vertex_count} vertices"
            )
        self.coordinates = coords

    @property
    def diameter(self):
        from . import geometry as geo

        return geo.point_set_diameter(self.coordinates)

    def boundary_coordinates(self):
        return self.coordinates[list(self.triangulation.boundary_cycle)]

    def edge_segments(self):
        """(|E|, 2, 2) array of segment endpoints, in edge order."""
        edges = np.asarray(self.triangulation.edges, dtype=int)
        return self.coordinates[edges]

    def with_coordinates(self, coordinates, **metadata):
        merged = dict(self.metadata)
        merged.update(metadata)
        return Embedding(
            triangulation=self.triangulation,
            coordinates=np.asarray(coordinates, dtype=float),
            metadata=merged,
        )
