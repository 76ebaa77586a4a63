"""Command-line interface.

Subcommands: find-tripods, triple-normal, count-classes, diameters,
morse, minors, polygon, render.  Results are deterministic JSON on
stdout (or -o FILE); exit codes: 0 success, 1 input/usage error, 2 a
reported configuration failed its residual certificate.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__, io
from .curves import SampledCurve, SupportCurve
from .euclidean import find_tripods, enumerate_classes, theorem_lower_bound, delta_curve_test
from .geometry import GeometryError
from .minors import hyperbolic_minor_checks
from .morse import (
    classify_boundary_critical,
    find_diameters,
    find_interior_critical_points,
    morse_bookkeeping,
    poly_str,
)
from .polygons import RegularPolygon, enumerate_regular
from .svg import render_svg
from .triple_normal import solve_triple_normal


def _emit(doc, args) -> int:
    text = io.dumps(doc)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return 0 if io.certification_ok(doc) else 2


def _load(path):
    spec, (kind, obj) = io.load_curve_spec(path)
    return spec, kind, obj


def _cmd_find_tripods(args) -> int:
    spec, kind, obj = _load(args.spec)

    if isinstance(obj, RegularPolygon):
        return _emit(_polygon_document("find-tripods", spec, obj), args)

    if isinstance(obj, SupportCurve):
        res = find_tripods(obj)
        doc = io.base_document("find-tripods", spec, "euclidean")
        doc["diameter"] = res.diameter
        doc["rotation_index"] = obj.rotation_index
        doc["continuum"] = res.continuum
        doc["continuum_classes"] = [list(t) for t in res.continuum_classes]
        doc["delta_curve"] = delta_curve_test(obj) if obj.rotation_index == 1 else None
        doc["configurations"] = [
            io.configuration_dict(c, "normal_directions") for c in res.configurations
        ]
        doc["count"] = len(res.configurations)
        doc["bound"] = theorem_lower_bound(obj.rotation_index)
        doc["failures"] = [
            {"class": list(cls), "root": float(root), "residual": float(resid)}
            for cls, root, resid in res.failures
        ]
        doc["curve"] = io.jsonable(io.curve_polyline(obj))
        return _emit(doc, args)

    if isinstance(obj, SampledCurve) and obj.geometry.kind == "euclidean":
        results = solve_triple_normal(obj, np.array([2 * np.pi / 3] * 3))
        doc = io.base_document("find-tripods", spec, "euclidean")
        doc["diameter"] = obj.diameter()
        doc["continuum"] = False
        doc["configurations"] = [_triple_normal_config(obj, r) for r in results]
        doc["count"] = len(results)
        doc["triangles"] = [io.jsonable(r.circumscribing.vertices) for r in results]
        doc["curve"] = io.jsonable(io.curve_polyline(obj))
        return _emit(doc, args)

    res = find_interior_critical_points(obj, eps=args.eps, starts=args.starts)
    doc = io.base_document("find-tripods", spec, obj.geometry.kind)
    doc["diameter"] = obj.diameter()
    doc["continuum"] = res.continuum
    doc["epsilon"] = res.epsilon
    doc["closeness_score"] = res.closeness
    doc["configurations"] = [
        io.configuration_dict(cp.configuration, "rays_from_point") for cp in res.critical_points
    ]
    doc["count"] = len(res.critical_points)
    doc["morse_indices"] = [cp.morse_index for cp in res.critical_points]
    doc["seeds"] = {"attempted": res.attempted, "converged": res.converged_raw}
    doc["curve"] = io.jsonable(io.curve_polyline(obj))
    return _emit(doc, args)


def _triple_normal_config(curve, r):
    from .io import configuration_certificates, jsonable

    feet_points = [f.point for f in r.feet]
    dirs = [f.normal.direction for f in r.feet]
    conc, angles, angle_residual = configuration_certificates(
        "euclidean", feet_points, dirs, r.meeting_point, "normal_directions"
    )
    return {
        "feet": [
            {
                "param": float(f.param),
                "point": jsonable(np.asarray(f.point, dtype=float)),
                "normal_direction": jsonable(np.asarray(f.normal.direction, dtype=float)),
            }
            for f in r.feet
        ],
        "tripod_point": jsonable(np.asarray(r.meeting_point, dtype=float)),
        "angles": jsonable(angles),
        "concurrency_residual": float(conc),
        "angle_residual": float(angle_residual),
        "angle_convention": "normal_directions",
        "requested_angles": jsonable(np.asarray(r.requested_angles, dtype=float)),
        "achieved_angles": jsonable(np.asarray(r.achieved_angles, dtype=float)),
        "tangency_residual": float(r.tangency_residual),
        "orientation": int(r.orientation),
        "degenerate": bool(r.flat_contact),
        "representative": False,
        "inside": None,
    }


def _cmd_triple_normal(args) -> int:
    spec, kind, obj = _load(args.spec)
    if not isinstance(obj, SampledCurve) or obj.geometry.kind != "euclidean":
        if isinstance(obj, SupportCurve):
            from .curves import reconstruct

            obj = reconstruct(obj)
        else:
            raise io.SpecError("triple-normal applies to Euclidean curves")
    try:
        thetas = [float(x) for x in args.theta.split(",")]
    except ValueError:
        raise io.SpecError(f"--theta: expected three comma-separated numbers, got {args.theta!r}")
    if len(thetas) != 3:
        raise io.SpecError("--theta: exactly three angles are required")
    results = solve_triple_normal(obj, np.asarray(thetas))
    doc = io.base_document("triple-normal", spec, "euclidean")
    doc["diameter"] = obj.diameter()
    doc["requested_angles"] = thetas
    doc["configurations"] = [_triple_normal_config(obj, r) for r in results]
    doc["count"] = len(results)
    doc["triangles"] = [io.jsonable(r.circumscribing.vertices) for r in results]
    doc["curve"] = io.jsonable(io.curve_polyline(obj))
    return _emit(doc, args)


def _cmd_count_classes(args) -> int:
    classes = enumerate_classes(args.n)
    doc = io.base_document("count-classes", {"n": args.n}, "euclidean")
    doc["classes"] = len(classes)
    doc["bound"] = theorem_lower_bound(args.n)
    doc["guaranteed_minimum"] = 2 * len(classes)
    doc["orbits"] = [[list(pair) for pair in c.orbit] for c in classes]
    doc["representatives"] = [list(c.triple) for c in classes]
    return _emit(doc, args)


def _cmd_diameters(args) -> int:
    spec, kind, obj = _load(args.spec)
    if isinstance(obj, SupportCurve):
        from .curves import reconstruct

        obj = reconstruct(obj)
    if not isinstance(obj, SampledCurve):
        raise io.SpecError("diameters applies to curves, not polygons")
    dias, continuum = find_diameters(obj)
    doc = io.base_document("diameters", spec, obj.geometry.kind)
    doc["continuum"] = continuum
    doc["count"] = len(dias)
    doc["diameters"] = [
        {
            "params": [d.s, d.t],
            "endpoints": [io.jsonable(d.a), io.jsonable(d.b)],
            "length": d.length,
            "orientation": d.orientation_sign,
            "center_offset": d.center_offset,
            "curvature_centers": [io.jsonable(d.center_a), io.jsonable(d.center_b)],
            "orthogonality_residual": d.orthogonality_residual,
        }
        for d in dias
    ]
    doc["orientation_counts"] = {
        "positive": sum(1 for d in dias if d.orientation_sign > 0),
        "negative": sum(1 for d in dias if d.orientation_sign < 0),
    }
    doc["curve"] = io.jsonable(io.curve_polyline(obj))
    return _emit(doc, args)


def _cmd_morse(args) -> int:
    spec, kind, obj = _load(args.spec)
    if not isinstance(obj, SampledCurve):
        raise io.SpecError("morse applies to sampled curves")
    res = find_interior_critical_points(obj, eps=args.eps, starts=args.starts)
    dias, d_continuum = find_diameters(obj)
    continuum = res.continuum or d_continuum
    boundary = []
    if not continuum:
        for d in dias:
            for case in (1, 2):
                cp = classify_boundary_critical(obj, res.epsilon, d, case)
                boundary.append(
                    {
                        "case": case,
                        "orientation": d.orientation_sign,
                        "index": cp.morse_index,
                        "kind": cp.kind,
                        "degenerate": cp.degenerate,
                    }
                )
    bk = morse_bookkeeping(res.critical_points, dias, continuum=continuum)
    doc = io.base_document("morse", spec, obj.geometry.kind)
    doc["diameter"] = obj.diameter()
    doc["continuum"] = continuum
    doc["epsilon"] = res.epsilon
    doc["closeness_score"] = res.closeness
    doc["configurations"] = [
        io.configuration_dict(cp.configuration, "rays_from_point") for cp in res.critical_points
    ]
    doc["count"] = len(res.critical_points)
    doc["interior"] = [
        {
            "feet_params": io.jsonable(cp.location.feet_params),
            "tripod_point": io.jsonable(cp.location.p),
            "morse_index": cp.morse_index,
            "orbit_size": cp.orbit_size,
            "gradient_norm": cp.gradient_norm,
            "hessian_eigenvalues": io.jsonable(cp.hessian_eigenvalues),
            "degenerate": cp.degenerate,
        }
        for cp in res.critical_points
    ]
    doc["diameters_found"] = len(dias)
    doc["boundary"] = boundary
    doc["bookkeeping"] = {
        "skipped": bk.skipped,
        "n_pairs": bk.n_pairs,
        "C": poly_str(bk.c_poly),
        "D": poly_str(bk.d_poly),
        "M": poly_str(bk.morse_poly),
        "poincare": poly_str(bk.poincare_poly, var="T"),
        "quotient": poly_str(bk.quotient),
        "remainder": bk.remainder,
        "divisible": bk.divisible,
        "nonnegative_quotient": bk.nonnegative,
        "c_two_positive_degrees": bk.c_two_positive_degrees,
        "passed": bk.passed,
        "type_n_note": bk.type_n_note,
    }
    doc["curve"] = io.jsonable(io.curve_polyline(obj))
    return _emit(doc, args)


def _cmd_minors(args) -> int:
    cases = [args.case] if args.case else [1, 2]
    reports = []
    for case in cases:
        rep = hyperbolic_minor_checks(args.R, case)
        reports.append(
            {
                "case": case,
                "passed": rep.passed,
                "m4_sign_by_d": {repr(k): v for k, v in rep.m4_sign_by_d.items()},
                "checks": [
                    {
                        "name": c.name,
                        "computed": c.computed,
                        "expected": c.expected,
                        "rel_error": c.rel_error,
                        "sign_ok": c.sign_ok,
                        "sign_only": c.sign_only,
                        "ok": c.ok,
                    }
                    for c in rep.checks
                ],
            }
        )
    doc = io.base_document("minors", {"R": args.R, "case": args.case}, "hyperbolic_disk")
    doc["reports"] = reports
    doc["passed"] = all(r["passed"] for r in reports)
    code = _emit(doc, args)
    return code if doc["passed"] else 2


def _polygon_document(command: str, input_echo, poly: RegularPolygon):
    configs = enumerate_regular(poly.n, poly.circumradius)
    doc = io.base_document(command, input_echo, "euclidean")
    doc["count"] = len(configs)
    doc["expected"] = poly.n // 3 if poly.n % 3 == 0 else poly.n
    doc["configurations"] = [
        {
            "indices": list(c.indices),
            "fermat_point": io.jsonable(c.fermat_point),
            "support_angles_deg": [
                [i, float(np.degrees(an)), float(np.degrees(ap))]
                for i, an, ap in c.support_angle_checks
            ],
            "concurrency_residual": c.concurrency_residual,
            "angle_residual": c.angle_residual,
        }
        for c in configs
    ]
    doc["curve"] = io.jsonable(np.concatenate([poly.vertices, poly.vertices[:1]], axis=0))
    return doc


def _cmd_polygon(args) -> int:
    poly = RegularPolygon(args.n, args.circumradius)
    doc = _polygon_document("polygon", {"n": args.n, "circumradius": args.circumradius}, poly)
    return _emit(doc, args)


def _cmd_render(args) -> int:
    import json

    try:
        with open(args.result) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise io.SpecError(f"{args.result}: {exc}")
    text = render_svg(doc)
    with open(args.output, "w") as fh:
        fh.write(text + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tripods",
        description="Tripod configurations and triple normals of closed curves and regular polygons.",
    )
    ap.add_argument("--version", action="version", version=f"tripods {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def curve_cmd(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("spec", help="curve-spec JSON file")
        p.add_argument("-o", "--output", help="write the result JSON here instead of stdout")
        p.set_defaults(fn=fn)
        return p

    p = curve_cmd("find-tripods", _cmd_find_tripods, "locate and certify tripod configurations")
    p.add_argument("--eps", type=float, default=None, help="offset distance for the search space")
    p.add_argument("--starts", type=int, default=24, help="feet seeds per foot (multi-start)")

    p = curve_cmd("triple-normal", _cmd_triple_normal, "three concurrent normals with given angles")
    p.add_argument("--theta", required=True, help="three angles, comma separated, sum 2*pi")

    p = sub.add_parser("count-classes", help="index-class count and the published bound")
    p.add_argument("--n", type=int, required=True, help="rotation index")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_count_classes)

    curve_cmd("diameters", _cmd_diameters, "double normals with orientation signs")

    p = curve_cmd("morse", _cmd_morse, "interior/boundary critical points and bookkeeping")
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--starts", type=int, default=24)

    p = sub.add_parser("minors", help="hyperbolic boundary-Hessian minor checks")
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--case", type=int, choices=(1, 2), default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_minors)

    p = sub.add_parser("polygon", help="tripod configurations of the regular n-gon")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--circumradius", type=float, default=1.0)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_polygon)

    p = sub.add_parser("render", help="draw a result JSON as SVG")
    p.add_argument("result", help="result JSON file")
    p.add_argument("-o", "--output", required=True, help="output SVG path")
    p.set_defaults(fn=_cmd_render)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; the contract here is 1
        return 0 if exc.code == 0 else 1
    try:
        return args.fn(args)
    except (io.SpecError, GeometryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
