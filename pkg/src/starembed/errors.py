"""Exception types shared across the package."""


class StarEmbedError(Exception):
    """Base class for all domain errors raised by this package."""


# -- mesh construction ------------------------------------------------------

class NotADisk(StarEmbedError):
    """The face list does not describe a triangulated disk."""


class InconsistentOrientation(StarEmbedError):
    """Face orientations cannot be made globally consistent."""


class DuplicateFace(StarEmbedError):
    """The same triangle appears more than once in the face list."""


# -- polygons ---------------------------------------------------------------

class InvalidPolygon(StarEmbedError):
    """Boundary coordinates do not form a simple CCW polygon."""


class NotStarShaped(StarEmbedError):
    """The polygon kernel has empty interior."""


class EyeOutsideHull(StarEmbedError):
    """Requested eye lies outside the convex hull of the polygon vertices."""


class EyeNotInKernel(StarEmbedError):
    """User-supplied eye does not lie in the open kernel of the polygon."""


# -- linear systems ---------------------------------------------------------

class NonPositiveWeight(StarEmbedError):
    """A raw edge weight is zero or negative."""


class DimensionMismatch(StarEmbedError):
    """Boundary data does not match the triangulation's boundary cycle."""


class SolveFailed(StarEmbedError):
    """Linear solve did not reach the requested residual."""


class BoundaryNotConvex(StarEmbedError):
    """Operation requires a convex boundary polygon."""


# -- star-shaped construction -----------------------------------------------

class DividingEdgePresent(StarEmbedError):
    """The mesh has an interior edge joining two boundary vertices."""


class DegreeTwoBoundaryVertex(StarEmbedError):
    """A boundary vertex of degree two makes the coupling weights undefined."""


class EpsilonOutOfRange(StarEmbedError):
    """The interpolation parameter must lie strictly between 0 and 1."""


class BudgetExceeded(StarEmbedError):
    """Dense spectral diagnostics refused: interior vertex count too large."""


class HalvingExhausted(StarEmbedError):
    """No valid embedding found within the halving budget.

    Carries the last (invalid) embedding and its validity report for
    diagnosis in ``last_embedding`` and ``report``.
    """

    def __init__(self, message, last_embedding=None, report=None):
        super().__init__(message)
        self.last_embedding = last_embedding
        self.report = report


# -- projective transport ---------------------------------------------------

class DegenerateCorrespondence(StarEmbedError):
    """Point correspondences do not pin a projective transformation."""


class PointAtInfinity(StarEmbedError):
    """A vertex maps too close to the line at infinity."""


class TargetNotReflex(StarEmbedError):
    """Requested reflex-vertex position is not admissible.

    ``frame_index`` is set when raised while sampling a path.
    """

    def __init__(self, message, frame_index=None):
        super().__init__(message)
        self.frame_index = frame_index


# -- document parsing -------------------------------------------------------

class ParseError(StarEmbedError):
    """Input document is not well-formed."""


class SchemaError(StarEmbedError):
    """Input document does not match the expected schema."""


class DomainError(StarEmbedError):
    """Parsed document fails mesh or polygon validation."""


__all__ = [
    "StarEmbedError",
    "NotADisk",
    "InconsistentOrientation",
    "DuplicateFace",
    "InvalidPolygon",
    "NotStarShaped",
    "EyeOutsideHull",
    "EyeNotInKernel",
    "NonPositiveWeight",
    "DimensionMismatch",
    "SolveFailed",
    "BoundaryNotConvex",
    "DividingEdgePresent",
    "DegreeTwoBoundaryVertex",
    "EpsilonOutOfRange",
    "BudgetExceeded",
    "HalvingExhausted",
    "DegenerateCorrespondence",
    "PointAtInfinity",
    "TargetNotReflex",
    "ParseError",
    "SchemaError",
    "DomainError",
]
