"""Curve-spec ingestion and result-document emission.

Curve specs are small JSON objects dispatched on ``kind``:

* ``support_fourier``     -- rotation_index, a0, cos[], sin[] (frequencies k/n)
* ``parametric_samples``  -- x[], y[]: uniform samples of a closed Euclidean curve
* ``disk_radial``         -- base_radius, cos[], sin[]: hyperbolic r(theta) profile
* ``sphere_radial``       -- base_radius, cos[], sin[]: spherical polar profile
* ``regular_polygon``     -- n, circumradius

Result documents are plain dicts with fixed key order and repr-float
values, so identical inputs produce byte-identical JSON.  Every emitted
configuration can be recertified from its raw coordinates alone;
:func:`recertify` recomputes the residuals with the same code path used
at build time and must reproduce them within 1e-12.
"""

from __future__ import annotations

import json
import numpy as np

from . import __version__
from .curves import (
    SampledCurve,
    SupportCurve,
    disk_radial_curve,
    parametric_curve,
    reconstruct,
    sphere_radial_curve,
)
from .geometry import get_geometry
from .polygons import RegularPolygon

TWO_PI = 2.0 * np.pi

CURVE_KINDS = ("support_fourier", "parametric_samples", "disk_radial", "sphere_radial", "regular_polygon")


class SpecError(ValueError):
    """Curve-spec validation failure with a field-precise message."""


def _field(spec, path, name, types, required=True, default=None):
    if name not in spec:
        if required:
            raise SpecError(f"{path}.{name}: missing required field")
        return default
    val = spec[name]
    if not isinstance(val, types) or isinstance(val, bool):
        raise SpecError(f"{path}.{name}: expected {types}, got {type(val).__name__}")
    return val


def _number_list(spec, path, name, default=()):
    if name not in spec:
        return list(default)
    val = spec[name]
    if not isinstance(val, list):
        raise SpecError(f"{path}.{name}: expected a list of numbers")
    for i, x in enumerate(val):
        if not isinstance(x, (int, float)) or isinstance(x, bool):
            raise SpecError(f"{path}.{name}[{i}]: expected a number, got {type(x).__name__}")
    return [float(x) for x in val]


def parse_curve_spec(spec, path: str = "$"):
    """Validate a curve-spec dict and build the corresponding object.

    Returns (kind, obj) where obj is a SupportCurve, SampledCurve, or
    RegularPolygon.  Raises SpecError with the offending field path.
    """
    if not isinstance(spec, dict):
        raise SpecError(f"{path}: expected an object")
    kind = _field(spec, path, "kind", str)
    if kind not in CURVE_KINDS:
        raise SpecError(f"{path}.kind: unknown kind {kind!r}; expected one of {CURVE_KINDS}")
    n_samples = spec.get("samples")
    if n_samples is not None and (not isinstance(n_samples, int) or n_samples < 64):
        raise SpecError(f"{path}.samples: expected an integer >= 64")

    if kind == "support_fourier":
        n = _field(spec, path, "rotation_index", int, required=False, default=1)
        if n < 1:
            raise SpecError(f"{path}.rotation_index: must be a positive integer")
        a0 = _field(spec, path, "a0", (int, float))
        cos = _number_list(spec, path, "cos")
        sin = _number_list(spec, path, "sin")
        try:
            return kind, SupportCurve(n, float(a0), cos, sin)
        except ValueError as exc:
            raise SpecError(f"{path}: {exc}") from exc

    if kind == "parametric_samples":
        x = _number_list(spec, path, "x")
        y = _number_list(spec, path, "y")
        if len(x) != len(y):
            raise SpecError(f"{path}.y: length {len(y)} does not match x length {len(x)}")
        if len(x) < 64:
            raise SpecError(f"{path}.x: need at least 64 samples")
        return kind, parametric_curve(np.stack([x, y], axis=-1))

    if kind in ("disk_radial", "sphere_radial"):
        r0 = _field(spec, path, "base_radius", (int, float))
        cos = _number_list(spec, path, "cos")
        sin = _number_list(spec, path, "sin")
        maker = disk_radial_curve if kind == "disk_radial" else sphere_radial_curve
        try:
            return kind, maker(float(r0), cos, sin, n_samples=n_samples or 4096)
        except ValueError as exc:
            raise SpecError(f"{path}: {exc}") from exc

    n = _field(spec, path, "n", int)
    if n < 3:
        raise SpecError(f"{path}.n: a polygon needs n >= 3")
    r = _field(spec, path, "circumradius", (int, float), required=False, default=1.0)
    return kind, RegularPolygon(n, float(r))


def load_curve_spec(path: str):
    try:
        with open(path) as fh:
            spec = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from exc
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from exc
    return spec, parse_curve_spec(spec)


# -- result documents --------------------------------------------------------


def jsonable(obj):
    """Recursively convert numpy scalars/arrays for deterministic JSON."""
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def configuration_certificates(geometry_kind, feet_points, normal_dirs, tripod_point, convention):
    """Residuals of one configuration from raw coordinates.

    ``convention`` is "normal_directions" (angles between the stored unit
    normals; Euclidean p-sum route) or "rays_from_point" (angles between
    the unit directions from the tripod point to the feet; Morse route).
    Used both when building documents and when recertifying them, so the
    two computations agree bit for bit.
    """
    g = get_geometry(geometry_kind)
    feet_points = np.asarray(feet_points, dtype=float)
    normal_dirs = np.asarray(normal_dirs, dtype=float)
    tp = np.asarray(tripod_point, dtype=float)
    lines = [g.line(feet_points[i], normal_dirs[i]) for i in range(3)]
    conc = max(abs(float(g.line_point_distance(line, tp))) for line in lines)
    if convention == "normal_directions":
        dirs = normal_dirs
    else:
        dirs = np.array([g.unit_direction(tp, feet_points[i]) for i in range(3)])
    angles = np.array(
        [
            float(np.arccos(np.clip(np.sum(dirs[i] * dirs[(i + 1) % 3]), -1.0, 1.0)))
            for i in range(3)
        ]
    )
    angle_residual = float(np.max(np.abs(angles - TWO_PI / 3.0)))
    return conc, angles, angle_residual


def configuration_dict(cfg, convention: str):
    """Serialize a TripodConfiguration; residuals recomputed from the
    serialized coordinates so recertification is exact."""
    feet_points = [np.asarray(f.point, dtype=float) for f in cfg.feet]
    dirs = [np.asarray(f.normal.direction, dtype=float) for f in cfg.feet]
    conc, angles, angle_residual = configuration_certificates(
        cfg.geometry, feet_points, dirs, cfg.tripod_point, convention
    )
    return {
        "feet": [
            {
                "param": float(f.param),
                "point": jsonable(np.asarray(f.point, dtype=float)),
                "normal_direction": jsonable(np.asarray(f.normal.direction, dtype=float)),
            }
            for f in cfg.feet
        ],
        "tripod_point": jsonable(np.asarray(cfg.tripod_point, dtype=float)),
        "angles": jsonable(angles),
        "concurrency_residual": float(conc),
        "angle_residual": float(angle_residual),
        "angle_convention": convention,
        "degenerate": bool(cfg.degenerate),
        "representative": bool(cfg.representative),
        "inside": None if cfg.inside is None else bool(cfg.inside),
    }


def base_document(command: str, input_echo, geometry_kind: str):
    return {
        "tool": "tripods",
        "version": __version__,
        "command": command,
        "geometry": geometry_kind,
        "input": jsonable(input_echo),
    }


def recertify(doc, rel_tol: float = 1e-12):
    """Recompute every configuration's residuals from its raw coordinates.

    Returns (ok, max_discrepancy); ok means each recomputed residual
    matches the stored one within rel_tol (absolute on values <= 1).
    """
    worst = 0.0
    for cfg in doc.get("configurations", []):
        feet = [f["point"] for f in cfg["feet"]]
        dirs = [f["normal_direction"] for f in cfg["feet"]]
        conc, _, angle_residual = configuration_certificates(
            doc["geometry"], feet, dirs, cfg["tripod_point"], cfg["angle_convention"]
        )
        worst = max(
            worst,
            abs(conc - cfg["concurrency_residual"]),
            abs(angle_residual - cfg["angle_residual"]),
        )
    return worst <= rel_tol, worst


def certification_ok(doc) -> bool:
    """Residual thresholds for exit-code-2 reporting."""
    scale = doc.get("diameter", 1.0) or 1.0
    for cfg in doc.get("configurations", []):
        if cfg["concurrency_residual"] > 1e-7 * scale:
            return False
        if cfg["angle_residual"] > 1e-7:
            return False
    return True


def curve_polyline(curve, n: int = 512):
    """Dense polyline of the curve for rendering, in chart coordinates."""
    if isinstance(curve, SupportCurve):
        t = np.linspace(0.0, curve.period, n, endpoint=False)
        return curve.point(t)
    if isinstance(curve, RegularPolygon):
        return curve.vertices
    t = np.linspace(0.0, curve.period, n, endpoint=False)
    return curve.point_at(t)


def dumps(doc) -> str:
    return json.dumps(jsonable(doc), indent=1)
