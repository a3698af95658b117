"""Deterministic file formats: problem documents, embeddings, SVG.

The interchange format is JSON with stable key order; floats are written
as Python's shortest round-trip decimals (at most 17 significant digits),
so writing and re-parsing reproduces coordinates bit-for-bit.
"""

import json

import numpy as np

from . import geometry as geo
from .embedding import Embedding
from .errors import (
    DomainError,
    DuplicateFace,
    InconsistentOrientation,
    InvalidPolygon,
    NotADisk,
    ParseError,
    SchemaError,
)
from .mesh import Triangulation, build_triangulation, flip_faces
from .polygon import BoundaryPolygon
from .validation import ValidityReport

FORMAT_VERSION = "1"


def pair_with_boundary(triangulation, coords_by_vertex):
    """Attach boundary coordinates to a triangulation.

    Flips the mesh orientation if needed so the polygon traversed along the
    boundary cycle is counterclockwise. Returns the (possibly flipped)
    triangulation and the matched BoundaryPolygon.
    """
    cycle = list(triangulation.boundary_cycle)
    pts = np.array([coords_by_vertex[v] for v in cycle], dtype=float)
    if geo.polygon_signed_area(pts) < 0.0:
        triangulation = flip_faces(triangulation)
        cycle = list(triangulation.boundary_cycle)
        pts = np.array([coords_by_vertex[v] for v in cycle], dtype=float)
    return triangulation, BoundaryPolygon(coordinates=pts)


def _require(condition, message):
    if not condition:
        raise SchemaError(message)


def _check_keys(obj, required, optional, where):
    _require(isinstance(obj, dict), f"{where} must be an object")
    for key in required:
        _require(key in obj, f"{where} is missing required field '{key}'")
    extra = set(obj) - set(required) - set(optional)
    _require(not extra, f"{where} has unknown fields {sorted(extra)}")


def _parse_weights(spec):
    if spec is None:
        return None
    if spec == "uniform":
        return {"scheme": "uniform"}
    _require(isinstance(spec, dict), "'weights' must be 'uniform' or an object")
    scheme = spec.get("scheme")
    if scheme == "random":
        _check_keys(spec, ["scheme", "seed"], ["low", "high"], "'weights'")
        _require(isinstance(spec["seed"], int), "'weights.seed' must be an integer")
        return {
            "scheme": "random",
            "seed": spec["seed"],
            "low": float(spec.get("low", 0.1)),
            "high": float(spec.get("high", 10.0)),
        }
    if scheme == "explicit":
        _check_keys(spec, ["scheme", "entries"], [], "'weights'")
        entries = spec["entries"]
        _require(isinstance(entries, list), "'weights.entries' must be a list")
        parsed = {}
        for row in entries:
            _require(
                isinstance(row, list) and len(row) == 3,
                "'weights.entries' rows must be [i, j, value]",
            )
            parsed[(int(row[0]), int(row[1]))] = float(row[2])
        return {"scheme": "explicit", "entries": parsed}
    raise SchemaError(f"unknown weight scheme {spec!r}")


def parse_problem(text, strict=True):
    """Parse a problem document into (Triangulation, BoundaryPolygon, options).

    ``options`` carries the optional weight scheme and eye override. Raises
    ParseError for malformed JSON, SchemaError for structural issues and
    DomainError when mesh or polygon validation fails.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc

    required = ["version", "vertices", "faces", "boundary"]
    optional = ["weights", "eye"]
    if strict:
        _check_keys(doc, required, optional, "document")
    else:
        for key in required:
            _require(key in doc, f"document is missing required field '{key}'")
    _require(doc["version"] == FORMAT_VERSION, f"unsupported version {doc['version']!r}")
    _require(
        isinstance(doc["vertices"], int) and doc["vertices"] >= 3,
        "'vertices' must be an integer >= 3",
    )
    _require(isinstance(doc["faces"], list) and doc["faces"], "'faces' must be a non-empty list")
    for k, face in enumerate(doc["faces"]):
        _require(
            isinstance(face, list) and len(face) == 3 and all(isinstance(v, int) for v in face),
            f"face {k} must be a list of 3 integer indices",
        )
    _require(isinstance(doc["boundary"], list), "'boundary' must be a list")
    coords_by_vertex = {}
    for k, entry in enumerate(doc["boundary"]):
        _check_keys(entry, ["v", "x", "y"], [], f"boundary entry {k}")
        _require(isinstance(entry["v"], int), f"boundary entry {k}: 'v' must be an integer")
        v = entry["v"]
        if v in coords_by_vertex:
            raise SchemaError(f"boundary entry {k}: vertex {v} listed twice")
        coords_by_vertex[v] = (float(entry["x"]), float(entry["y"]))

    try:
        triangulation = build_triangulation(doc["vertices"], doc["faces"])
    except (NotADisk, InconsistentOrientation, DuplicateFace, ValueError) as exc:
        raise DomainError(f"invalid triangulation: {exc}") from exc

    boundary_set = set(triangulation.boundary_cycle)
    given = set(coords_by_vertex)
    if given != boundary_set:
        missing = sorted(boundary_set - given)
        spurious = sorted(given - boundary_set)
        raise DomainError(
            f"boundary mismatch: missing coordinates for {missing}, "
            f"non-boundary vertices listed {spurious}"
        )

    try:
        triangulation, polygon = pair_with_boundary(triangulation, coords_by_vertex)
    except InvalidPolygon as exc:
        raise DomainError(f"invalid boundary polygon: {exc}") from exc

    eye = doc.get("eye")
    if eye is not None:
        _require(
            isinstance(eye, list) and len(eye) == 2,
            "'eye' must be a list [x, y]",
        )
        eye = (float(eye[0]), float(eye[1]))
    options = {"weights": _parse_weights(doc.get("weights")), "eye": eye}
    return triangulation, polygon, options


def _dump(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _boundary_entries(triangulation, coordinates):
    entries = []
    for v in triangulation.boundary_cycle:
        entries.append({"v": int(v), "x": float(coordinates[v][0]), "y": float(coordinates[v][1])})
    return entries


def write_problem(triangulation, polygon, options=None):
    """Serialize a problem document; parse(write(...)) reproduces it."""
    coords = {
        v: polygon.coordinates[k] for k, v in enumerate(triangulation.boundary_cycle)
    }
    doc = {
        "version": FORMAT_VERSION,
        "vertices": triangulation.vertex_count,
        "faces": [list(f) for f in triangulation.faces],
        "boundary": [
            {"v": int(v), "x": float(coords[v][0]), "y": float(coords[v][1])}
            for v in triangulation.boundary_cycle
        ],
    }
    options = options or {}
    weights = options.get("weights")
    if weights is not None:
        if weights.get("scheme") == "uniform":
            doc["weights"] = "uniform"
        elif weights.get("scheme") == "random":
            doc["weights"] = {
                "scheme": "random",
                "seed": weights["seed"],
                "low": weights.get("low", 0.1),
                "high": weights.get("high", 10.0),
            }
        else:
            doc["weights"] = {
                "scheme": "explicit",
                "entries": [
                    [int(i), int(j), float(c)]
                    for (i, j), c in sorted(weights["entries"].items())
                ],
            }
    if options.get("eye") is not None:
        doc["eye"] = [float(options["eye"][0]), float(options["eye"][1])]
    return _dump(doc)


def write_embedding(embedding, report=None):
    """Serialize an embedding with solver metadata and validity report."""
    tri = embedding.triangulation
    if report is None:
        report = embedding.report
    doc = {
        "version": FORMAT_VERSION,
        "vertices": tri.vertex_count,
        "faces": [list(f) for f in tri.faces],
        "boundary": _boundary_entries(tri, embedding.coordinates),
        "coordinates": [[float(x), float(y)] for x, y in embedding.coordinates],
        "metadata": _json_safe(embedding.metadata),
        "report": report.to_dict() if report is not None else None,
    }
    return _dump(doc)


def _json_safe(value):
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, np.ndarray):
        return [_json_safe(v) for v in value.tolist()]
    return value


def parse_embedding(text):
    """Parse an embedding document back into (Embedding, report or None)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    for key in ("version", "vertices", "faces", "coordinates"):
        _require(key in doc, f"embedding document is missing '{key}'")
    _require(doc["version"] == FORMAT_VERSION, f"unsupported version {doc['version']!r}")
    try:
        tri = build_triangulation(doc["vertices"], doc["faces"])
    except (NotADisk, InconsistentOrientation, DuplicateFace, ValueError) as exc:
        raise DomainError(f"invalid triangulation: {exc}") from exc
    coords = np.asarray(doc["coordinates"], dtype=float)
    if coords.shape != (tri.vertex_count, 2):
        raise SchemaError(
            f"coordinates shape {coords.shape} does not match vertex count {tri.vertex_count}"
        )
    # re-orient so stored faces and coordinates agree (positive boundary loop)
    cycle_pts = coords[list(tri.boundary_cycle)]
    if geo.polygon_signed_area(cycle_pts) < 0.0:
        tri = flip_faces(tri)
    embedding = Embedding(
        triangulation=tri,
        coordinates=coords,
        metadata=doc.get("metadata", {}),
    )
    report = None
    if doc.get("report") is not None:
        report = ValidityReport.from_dict(doc["report"])
        embedding.report = report
    return embedding, report


def read_off(text):
    """Minimal OFF reader: returns (vertex_count, faces, xy coordinates).

    Only triangular faces are accepted; z coordinates are dropped. Boundary
    coordinates for a problem document come from the vertex positions.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != "OFF":
        raise ParseError("missing OFF header")
    try:
        nv, nf, _ = (int(tok) for tok in lines[1].split())
        coords = []
        for ln in lines[2 : 2 + nv]:
            parts = [float(tok) for tok in ln.split()]
            coords.append(parts[:2])
        faces = []
        for ln in lines[2 + nv : 2 + nv + nf]:
            parts = [int(tok) for tok in ln.split()]
            if parts[0] != 3:
                raise ParseError(f"only triangular faces supported, got {parts[0]}-gon")
            faces.append(parts[1:4])
    except (ValueError, IndexError) as exc:
        raise ParseError(f"malformed OFF data: {exc}") from exc
    if len(coords) != nv or len(faces) != nf:
        raise ParseError("OFF counts do not match data lines")
    return nv, faces, np.asarray(coords, dtype=float)


def render_svg(embedding, report=None, kernel=None, bounds=None, size=800):
    """Deterministic SVG rendering of an embedding.

    Edges are lines, vertices circles; inverted faces (from the report) are
    shaded, crossing edges stroked in red, and the kernel polygon overlaid
    when given. A fixed ``bounds`` rectangle keeps the viewport identical
    across animation frames.
    """
    coords = embedding.coordinates
    if report is None:
        report = embedding.report
    pts = [coords]
    if kernel is not None and len(kernel.vertices):
        pts.append(kernel.vertices)
    allpts = np.vstack(pts)
    if bounds is None:
        lo = allpts.min(axis=0)
        hi = allpts.max(axis=0)
    else:
        lo = np.array(bounds[:2], dtype=float)
        hi = np.array(bounds[2:], dtype=float)
    extent = np.maximum(hi - lo, 1e-12)
    margin = 0.05 * float(extent.max())
    lo = lo - margin
    hi = hi + margin
    span = float((hi - lo).max())
    scale = size / span

    def to_px(p):
        return (
            (p[0] - lo[0]) * scale,
            size - (p[1] - lo[1]) * scale,
        )

    def fmt(v):
        return f"{v:.3f}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>',
    ]

    if kernel is not None and len(kernel.vertices) >= 3:
        ring = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in map(to_px, kernel.vertices))
        parts.append(f'<polygon points="{ring}" fill="#9ecae1" fill-opacity="0.5"/>')

    inverted = set(report.inverted_faces) if report is not None else set()
    for k in sorted(inverted):
        face = embedding.triangulation.faces[k]
        ring = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in (to_px(coords[v]) for v in face))
        parts.append(f'<polygon points="{ring}" fill="#fcae91" fill-opacity="0.8"/>')

    crossing_edges = set()
    if report is not None:
        for e, f in report.crossings:
            crossing_edges.add(tuple(sorted(e)))
            crossing_edges.add(tuple(sorted(f)))
    for edge in embedding.triangulation.edges:
        x1, y1 = to_px(coords[edge[0]])
        x2, y2 = to_px(coords[edge[1]])
        color = "#d62728" if edge in crossing_edges else "#444444"
        parts.append(
            f'<line x1="{fmt(x1)}" y1="{fmt(y1)}" x2="{fmt(x2)}" y2="{fmt(y2)}" '
            f'stroke="{color}" stroke-width="1"/>'
        )

    boundary = set(embedding.triangulation.boundary_cycle)
    for v in range(embedding.triangulation.vertex_count):
        cx, cy = to_px(coords[v])
        color = "#d62728" if v in boundary else "#1f77b4"
        parts.append(f'<circle cx="{fmt(cx)}" cy="{fmt(cy)}" r="2.5" fill="{color}"/>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
