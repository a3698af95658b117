"""Command-line pipeline: validate, embed, diagnose, animate, render.

Exit codes: 0 success, 1 usage/IO/parse errors, 2 domain-invalid input
(non-disk mesh, non-convex boundary where convexity is required, missing
kernel, dividing edges, budget refusal, inadmissible path points),
3 computation failure (halving exhausted, invalid animation frame, solver
breakdown). Output files are written atomically: nothing is left behind
on failure.
"""

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import star, tutte
from .errors import (
    BoundaryNotConvex,
    BudgetExceeded,
    DegenerateCorrespondence,
    DegreeTwoBoundaryVertex,
    DividingEdgePresent,
    DomainError,
    EyeNotInKernel,
    EyeOutsideHull,
    HalvingExhausted,
    InvalidPolygon,
    NotStarShaped,
    ParseError,
    PointAtInfinity,
    SchemaError,
    SolveFailed,
    StarEmbedError,
    TargetNotReflex,
)
from .formats import parse_embedding, parse_problem, render_svg, write_embedding
from .homotopy import homotopy_path, make_quad_instance
from .mesh import find_dividing_edges
from .polygon import BoundaryPolygon, compute_kernel, is_convex

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_FAILED = 3

_DOMAIN_ERRORS = (
    DomainError,
    InvalidPolygon,
    BoundaryNotConvex,
    NotStarShaped,
    DividingEdgePresent,
    DegreeTwoBoundaryVertex,
    BudgetExceeded,
    EyeOutsideHull,
    EyeNotInKernel,
    TargetNotReflex,
    DegenerateCorrespondence,
)


class _Usage(Exception):
    pass


def _atomic_write(path, data):
    """Write text via a temp file and rename, so failures leave no output."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".starembed-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, text):
    if not args.quiet:
        print(text)


def _write_or_print(args, data):
    if args.output:
        _atomic_write(args.output, data)
        _emit(args, f"wrote {args.output}")
    else:
        sys.stdout.write(data)


def _read(path):
    try:
        with open(path, "r") as handle:
            return handle.read()
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc}") from exc


def _default_tol(args):
    if args.tol is not None:
        return args.tol
    env = os.environ.get("STAREMBED_TOL")
    if env:
        try:
            return float(env)
        except ValueError as exc:
            raise _Usage(f"STAREMBED_TOL is not a number: {env!r}") from exc
    return 1e-10


def _weights_for(args, triangulation, options):
    scheme = args.scheme
    if scheme == "uniform":
        return tutte.uniform_weights(triangulation)
    if scheme == "random":
        return tutte.random_weights(triangulation, seed=args.seed)
    # scheme == "file": take whatever the document carries
    spec = options.get("weights")
    if spec is None:
        raise _Usage("--scheme file requires a 'weights' field in the document")
    if spec["scheme"] == "uniform":
        return tutte.uniform_weights(triangulation)
    if spec["scheme"] == "random":
        return tutte.random_weights(
            triangulation, seed=spec["seed"], low=spec["low"], high=spec["high"]
        )
    return tutte.normalize_weights(triangulation, spec["entries"])


def cmd_validate_mesh(args):
    triangulation, polygon, _ = parse_problem(_read(args.input))
    dividing = find_dividing_edges(triangulation)
    summary = {
        "valid": True,
        "vertices": triangulation.vertex_count,
        "faces": triangulation.face_count,
        "edges": len(triangulation.edges),
        "boundary_vertices": triangulation.n_boundary,
        "interior_vertices": triangulation.n_interior,
        "interior_interior_edges": len(triangulation.interior_interior_edges),
        "interior_boundary_edges": len(triangulation.interior_boundary_edges),
        "dividing_edges": [list(e) for e in dividing],
        "boundary_convex": is_convex(polygon),
    }
    if args.json:
        sys.stdout.write(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    else:
        _emit(args, f"mesh ok: {summary['vertices']} vertices, {summary['faces']} faces")
        if dividing:
            _emit(args, f"warning: dividing edges present: {summary['dividing_edges']}")
    return EXIT_OK


def cmd_embed(args):
    triangulation, polygon, options = parse_problem(_read(args.input))
    if not is_convex(polygon):
        print(
            "boundary polygon is not convex; use 'embed-star' for star-shaped boundaries",
            file=sys.stderr,
        )
        return EXIT_INVALID
    weights = _weights_for(args, triangulation, options)
    embedding = tutte.tutte_embed(triangulation, polygon, weights, tol=_default_tol(args))
    _write_or_print(args, write_embedding(embedding))
    return EXIT_OK


def cmd_embed_star(args):
    triangulation, polygon, options = parse_problem(_read(args.input))
    eye = options.get("eye")
    if args.eye is not None:
        eye = args.eye
    try:
        embedding = star.star_embed(
            triangulation,
            polygon,
            eps0=args.eps0,
            max_halvings=args.max_halvings,
            eye=eye,
            tol=args.tol,
        )
    except HalvingExhausted as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    _write_or_print(args, write_embedding(embedding))
    if not args.quiet and args.output:
        meta = embedding.metadata
        _emit(args, f"accepted epsilon {meta['epsilon']} after {meta['halvings']} halvings")
    return EXIT_OK


def cmd_diagnose(args):
    triangulation, polygon, _ = parse_problem(_read(args.input))
    sweep = [float(tok) for tok in args.eps_sweep.split(",") if tok]
    if not sweep:
        raise _Usage("--eps-sweep must list at least one value")
    mixing = None
    if args.coupling == "eye":
        from .polygon import eye_coefficients, select_eye

        mixing = eye_coefficients(polygon, select_eye(polygon))
    coupling = star.build_coupling(triangulation, mixing)
    target = star.limit_point(triangulation, polygon, mixing)

    rows = []
    for eps in sweep:
        rep = star.spectral_report(triangulation, coupling, eps, budget=args.budget)
        emb = star.solve_at_epsilon(triangulation, polygon, coupling, eps)
        interior = emb.coordinates[list(triangulation.interior_vertices)]
        dist = float(np.hypot(*(interior - target).T).max()) if len(interior) else 0.0
        rows.append(
            {
                "epsilon": eps,
                "lambda_min": rep.lambda_min,
                "lambda_min_over_epsilon": rep.lambda_min_over_epsilon,
                "one_over_n_interior": 1.0 / rep.n_interior,
                "lambda_second": rep.lambda_second,
                "ones_deviation": rep.ones_deviation,
                "eigvec_deviation": rep.eigvec_deviation,
                "max_distance_to_limit": dist,
            }
        )
    doc = {
        "version": "1",
        "coupling": args.coupling,
        "limit_point": [float(target[0]), float(target[1])],
        "rows": rows,
    }
    payload = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.output:
        _atomic_write(args.output, payload)
        _emit(args, f"wrote {args.output}")
    if args.json and not args.output:
        sys.stdout.write(payload)
    elif not args.quiet:
        header = (
            f"{'epsilon':>12} {'lam_min/eps':>14} {'1/N_I':>10} "
            f"{'ones_dev':>12} {'eigvec_dev':>12} {'dist_to_limit':>14}"
        )
        print(f"limit point: ({target[0]:.12g}, {target[1]:.12g})")
        print(header)
        for row in rows:
            print(
                f"{row['epsilon']:>12.3e} {row['lambda_min_over_epsilon']:>14.9f} "
                f"{row['one_over_n_interior']:>10.6f} {row['ones_deviation']:>12.5e} "
                f"{row['eigvec_deviation']:>12.5e} {row['max_distance_to_limit']:>14.6e}"
            )
    return EXIT_OK


def _resample_polyline(points, count):
    pts = np.asarray(points, dtype=float)
    if count is None or len(pts) < 2 or count == len(pts):
        return pts
    seglen = np.hypot(*np.diff(pts, axis=0).T)
    total = seglen.sum()
    if total == 0.0:
        return np.repeat(pts[:1], count, axis=0)
    stations = np.concatenate([[0.0], np.cumsum(seglen)])
    targets = np.linspace(0.0, total, count)
    out = np.empty((count, 2))
    out[:, 0] = np.interp(targets, stations, pts[:, 0])
    out[:, 1] = np.interp(targets, stations, pts[:, 1])
    return out


def cmd_homotopy(args):
    triangulation, polygon, _ = parse_problem(_read(args.input))
    quad = make_quad_instance(triangulation, polygon)

    try:
        waypoints = json.loads(_read(args.path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"path file is not valid JSON: {exc}") from exc
    if isinstance(waypoints, dict):
        waypoints = waypoints.get("path")
    if not isinstance(waypoints, list) or not waypoints:
        raise SchemaError("path file must hold a non-empty JSON list of [x, y] points")
    points = _resample_polyline(waypoints, args.frames)

    base_embedding = star.star_embed(
        triangulation, polygon, eps0=args.eps0, max_halvings=args.max_halvings
    )
    try:
        path = homotopy_path(quad, base_embedding, points)
    except TargetNotReflex as exc:
        print(f"frame {exc.frame_index}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PointAtInfinity as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_INVALID

    os.makedirs(args.output, exist_ok=True)
    all_pts = np.vstack([e.coordinates for e in path.embeddings])
    lo = all_pts.min(axis=0)
    hi = all_pts.max(axis=0)
    bounds = (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))

    failed = []
    for k, frame in enumerate(path.embeddings):
        stem = os.path.join(args.output, f"frame_{k:03d}")
        _atomic_write(stem + ".json", write_embedding(frame))
        _atomic_write(stem + ".svg", render_svg(frame, bounds=bounds))
        if not frame.report.overall:
            failed.append(k)
    summary = {
        "frames": len(path.embeddings),
        "invalid_frames": failed,
        "max_step_displacement": path.max_step_displacement,
    }
    _atomic_write(
        os.path.join(args.output, "summary.json"),
        json.dumps(summary, sort_keys=True, indent=2) + "\n",
    )
    if failed:
        print(f"frames failed validation: {failed}", file=sys.stderr)
        return EXIT_FAILED
    _emit(args, f"wrote {len(path.embeddings)} valid frames to {args.output}")
    return EXIT_OK


def cmd_render(args):
    embedding, report = parse_embedding(_read(args.input))
    kernel = None
    if args.kernel:
        polygon = BoundaryPolygon(coordinates=embedding.boundary_coordinates())
        kernel = compute_kernel(polygon)
    _write_or_print(args, render_svg(embedding, report=report, kernel=kernel))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="starembed",
        description="Straight-line embeddings of triangulated disks with fixed boundaries.",
    )
    parser.add_argument("--tol", type=float, default=None, help="solver residual tolerance")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")
    parser.add_argument("--json", action="store_true", help="machine-readable stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-mesh", help="check a problem document's mesh")
    p.add_argument("input")
    p.set_defaults(func=cmd_validate_mesh)

    p = sub.add_parser("embed", help="embed with a convex boundary")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--scheme", choices=["uniform", "file", "random"], default="uniform")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("embed-star", help="embed with a star-shaped boundary")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--eps0", type=float, default=0.5)
    p.add_argument("--max-halvings", type=int, default=60)
    p.add_argument("--eye", type=_point, default=None, metavar="X,Y")
    p.set_defaults(func=cmd_embed_star)

    p = sub.add_parser("diagnose", help="spectral and limit diagnostics over an eps sweep")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    p.add_argument(
        "--eps-sweep",
        default="1e-1,1e-2,1e-3,1e-4,1e-5,1e-6",
        help="comma-separated eps values",
    )
    p.add_argument("--coupling", choices=["uniform", "eye"], default="uniform")
    p.add_argument("--budget", type=int, default=2000)
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("homotopy", help="transport a quadrilateral embedding along a path")
    p.add_argument("input")
    p.add_argument("--path", required=True, help="JSON file with [x, y] waypoints")
    p.add_argument("--frames", type=int, default=None, help="resample the path to N frames")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--eps0", type=float, default=0.5)
    p.add_argument("--max-halvings", type=int, default=60)
    p.set_defaults(func=cmd_homotopy)

    p = sub.add_parser("render", help="render an embedding document to SVG")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--kernel", action="store_true", help="overlay the boundary kernel")
    p.set_defaults(func=cmd_render)

    return parser


def _point(text):
    try:
        x, y = (float(tok) for tok in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected X,Y got {text!r}") from exc
    return (x, y)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _DOMAIN_ERRORS as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (HalvingExhausted, SolveFailed, PointAtInfinity) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except StarEmbedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def run():
    raise SystemExit(main())


if __name__ == "__main__":
    run()
