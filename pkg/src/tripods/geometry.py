"""Metric kernels for the three ambient geometries.

Points are numpy arrays: shape ``(2,)`` in the Euclidean plane and the
Poincare disk, ``(3,)`` (unit norm) on the sphere.  All operations accept
stacked arrays ``(..., d)`` and broadcast.

Conventions:

* Directions are chart vectors of Euclidean norm 1.  The Poincare metric
  is conformal, so chart angles equal hyperbolic angles and no metric
  rescaling is needed for angle work; lengths along geodesics are always
  produced by :meth:`Geometry.exp`, which is exact.
* ``unit_direction(x, y)`` points from x toward y (the gradient of the
  distance-to-y function is the opposite vector).
* The sphere is restricted to an open hemisphere around the +z pole
  (polar angle < pi/2 - SPHERE_MARGIN); minimizing geodesics are then
  unique and distance is smooth away from coincident points.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

TWO_PI = 2.0 * np.pi

# Single equality tolerance used by every angle certificate downstream.
ANGLE_TOL = 1e-9
SPHERE_MARGIN = 1e-3
DISK_MAX_NORM = 1.0 - 1e-12
_COND_LIMIT = 1e10


class GeometryError(ValueError):
    pass


class DomainError(GeometryError):
    """A point lies outside the geometry's working domain."""


class CoincidentPointsError(GeometryError):
    """A direction or angle was requested at coincident points."""


class IllConditionedError(GeometryError):
    """A line intersection is too close to parallel to be trusted."""


def mod_2pi(a):
    return np.mod(a, TWO_PI)


def angles_equal(a, b, tol: float = ANGLE_TOL):
    d = np.abs(mod_2pi(a) - mod_2pi(b))
    return np.minimum(d, TWO_PI - d) < tol


def _dot(a, b):
    return np.sum(a * b, axis=-1)


def rot90(v):
    """Left (counterclockwise) perpendicular of a plane vector."""
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


def cross2(a, b):
    """Scalar cross product of plane vectors."""
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _as_complex(v):
    v = np.asarray(v, dtype=float)
    return v[..., 0] + 1j * v[..., 1]


def _from_complex(z):
    return np.stack([z.real, z.imag], axis=-1)


@dataclass(frozen=True, eq=False)
class GeodesicLine:
    """Geodesic through ``base`` with chart-unit ``direction`` at base."""

    geometry: "Geometry"
    base: np.ndarray
    direction: np.ndarray

    def point_at(self, s):
        return self.geometry.exp(self.base, self.direction, s)


class Geometry:
    """Base class; subclasses provide the metric operations."""

    kind: str = ""
    ndim: int = 2

    def domain_check(self, x) -> None:
        ok = self.in_domain(x)
        if not np.all(ok):
            raise DomainError(f"point outside {self.kind} domain")

    def in_domain(self, x):
        raise NotImplementedError

    def distance(self, x, y):
        raise NotImplementedError

    def unit_direction(self, x, y):
        raise NotImplementedError

    def exp(self, x, v, s):
        raise NotImplementedError

    def angle_between(self, p, a, b):
        """Angle at p between the geodesics p->a and p->b, in [0, pi]."""
        u = self.unit_direction(p, a)
        w = self.unit_direction(p, b)
        return np.arccos(np.clip(_dot(u, w), -1.0, 1.0))

    def _prepare_direction(self, base, direction):
        return direction

    def line(self, base, direction) -> GeodesicLine:
        base = np.asarray(base, dtype=float)
        direction = self._prepare_direction(base, np.asarray(direction, dtype=float))
        n = np.linalg.norm(direction, axis=-1, keepdims=True)
        if np.any(n < 1e-300):
            raise CoincidentPointsError("zero direction vector")
        return GeodesicLine(self, base, direction / n)

    def line_signed_distance(self, line: GeodesicLine, x):
        """Signed distance from x to the geodesic line (continuous in x)."""
        raise NotImplementedError

    def line_point_distance(self, line: GeodesicLine, x):
        return np.abs(self.line_signed_distance(line, x))

    def line_coordinate(self, line: GeodesicLine, x):
        """Signed arc position along the line of the foot of x (x on the line)."""
        raise NotImplementedError

    def scan_span(self) -> float:
        """Parameter half-range that covers the working domain along any line."""
        raise NotImplementedError


class EuclideanGeometry(Geometry):
    kind = "euclidean"

    def in_domain(self, x):
        x = np.asarray(x, dtype=float)
        return np.all(np.isfinite(x), axis=-1)

    def distance(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return np.linalg.norm(y - x, axis=-1)

    def unit_direction(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        d = y - x
        n = np.linalg.norm(d, axis=-1, keepdims=True)
        if np.any(n < 1e-300):
            raise CoincidentPointsError("unit_direction at coincident points")
        return d / n

    def exp(self, x, v, s):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        s = np.asarray(s, dtype=float)
        return x + s[..., None] * v if s.ndim else x + s * v

    def line_signed_distance(self, line, x):
        x = np.asarray(x, dtype=float)
        d = x - line.base
        return line.direction[..., 0] * d[..., 1] - line.direction[..., 1] * d[..., 0]

    def line_coordinate(self, line, x):
        d = np.asarray(x, dtype=float) - line.base
        return _dot(d, line.direction)

    def scan_span(self):
        return 64.0  # desk-scale scenes; documented working window


class SphericalGeometry(Geometry):
    """Unit sphere, restricted to the open hemisphere around the +z pole."""

    kind = "spherical"
    ndim = 3
    margin = SPHERE_MARGIN

    def in_domain(self, x):
        x = np.asarray(x, dtype=float)
        unit = np.abs(_dot(x, x) - 1.0) < 1e-9
        return unit & (x[..., 2] > np.sin(self.margin))

    def distance(self, x, y):
        # atan2 form: exact at coincident points, accurate near pi
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return np.arctan2(np.linalg.norm(np.cross(x, y), axis=-1), _dot(x, y))

    def unit_direction(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        w = y - _dot(x, y)[..., None] * x
        n = np.linalg.norm(w, axis=-1, keepdims=True)
        if np.any(n < 1e-300):
            raise CoincidentPointsError("unit_direction at coincident points")
        return w / n

    def _prepare_direction(self, base, direction):
        return direction - _dot(base, direction)[..., None] * base

    def exp(self, x, v, s):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        s = np.asarray(s, dtype=float)
        c, sn = np.cos(s), np.sin(s)
        return c[..., None] * x + sn[..., None] * v if s.ndim else c * x + sn * v

    def tangent_frame(self, p):
        """Orthonormal tangent basis at p (vectorized)."""
        p = np.asarray(p, dtype=float)
        ref = np.zeros_like(p)
        use_z = np.abs(p[..., 2]) < 0.9
        ref[..., 2] = np.where(use_z, 1.0, 0.0)
        ref[..., 0] = np.where(use_z, 0.0, 1.0)
        e1 = np.cross(ref, p)
        e1 /= np.linalg.norm(e1, axis=-1, keepdims=True)
        e2 = np.cross(p, e1)
        return e1, e2

    def line_signed_distance(self, line, x):
        pole = np.cross(line.base, line.direction)
        pole = pole / np.linalg.norm(pole, axis=-1, keepdims=True)
        return np.arcsin(np.clip(_dot(np.asarray(x, dtype=float), pole), -1.0, 1.0))

    def line_coordinate(self, line, x):
        x = np.asarray(x, dtype=float)
        return np.arctan2(_dot(x, line.direction), _dot(x, line.base))

    def to_chart(self, x):
        """Gnomonic projection from the hemisphere pole (winding-preserving)."""
        x = np.asarray(x, dtype=float)
        return x[..., :2] / x[..., 2:3]

    def scan_span(self):
        return np.pi


class HyperbolicDiskGeometry(Geometry):
    """Poincare disk model of the hyperbolic plane (curvature -1)."""

    kind = "hyperbolic_disk"

    def in_domain(self, x):
        x = np.asarray(x, dtype=float)
        return np.linalg.norm(x, axis=-1) < DISK_MAX_NORM

    def distance(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        d2 = np.sum((y - x) ** 2, axis=-1)
        den = (1.0 - np.sum(x * x, axis=-1)) * (1.0 - np.sum(y * y, axis=-1))
        return np.arccosh(1.0 + 2.0 * d2 / den)

    def conformal_factor(self, x):
        x = np.asarray(x, dtype=float)
        return 2.0 / (1.0 - np.sum(x * x, axis=-1))

    def unit_direction(self, x, y):
        zx, zy = _as_complex(x), _as_complex(y)
        w = (zy - zx) / (1.0 - np.conj(zx) * zy)
        n = np.abs(w)
        if np.any(n < 1e-300):
            raise CoincidentPointsError("unit_direction at coincident points")
        return _from_complex(w / n)

    def exp(self, x, v, s):
        zx = _as_complex(x)
        zv = _as_complex(v)
        w = np.tanh(np.asarray(s, dtype=float) / 2.0) * zv
        return _from_complex((zx + w) / (1.0 + np.conj(zx) * w))

    def line_signed_distance(self, line, x):
        zb = _as_complex(line.base)
        zd = _as_complex(line.direction)
        z = _as_complex(np.asarray(x, dtype=float))
        w = (z - zb) / (1.0 - np.conj(zb) * z) * np.conj(zd)
        return np.arcsinh(2.0 * w.imag / np.maximum(1.0 - np.abs(w) ** 2, 1e-300))

    def line_coordinate(self, line, x):
        zb = _as_complex(line.base)
        zd = _as_complex(line.direction)
        z = _as_complex(np.asarray(x, dtype=float))
        w = (z - zb) / (1.0 - np.conj(zb) * z) * np.conj(zd)
        return 2.0 * np.arctanh(np.clip(w.real, -1 + 1e-15, 1 - 1e-15))

    def scan_span(self):
        return 2.0 * np.arctanh(1.0 - 1e-7)


EUCLIDEAN = EuclideanGeometry()
SPHERE = SphericalGeometry()
HYPERBOLIC = HyperbolicDiskGeometry()

_BY_KIND = {g.kind: g for g in (EUCLIDEAN, SPHERE, HYPERBOLIC)}


def get_geometry(kind: str) -> Geometry:
    try:
        return _BY_KIND[kind]
    except KeyError:
        raise GeometryError(f"unknown geometry kind {kind!r}") from None


def intersect_lines(l1: GeodesicLine, l2: GeodesicLine, scan_points: int = 512):
    """Common point of two geodesic lines, or None if they do not meet.

    Euclidean lines are intersected by the 2x2 linear system; on the
    sphere and the disk the intersection is found by 1-D root finding of
    the signed distance to l2 along l1 (bracket scan, bisection, then
    secant polish).  Raises IllConditionedError when the crossing angle
    makes the solution numerically meaningless (condition > 1e10).
    """
    g = l1.geometry
    if g is not l2.geometry:
        raise GeometryError("lines live in different geometries")

    if isinstance(g, EuclideanGeometry):
        d1, d2 = l1.direction, l2.direction
        cross = d1[0] * d2[1] - d1[1] * d2[0]
        if abs(cross) < 1e-14:
            return None
        if 1.0 / abs(cross) > _COND_LIMIT:
            raise IllConditionedError("nearly parallel lines")
        rhs = l2.base - l1.base
        t = (rhs[0] * d2[1] - rhs[1] * d2[0]) / cross
        return l1.base + t * d1

    span = g.scan_span()
    s = np.linspace(-span, span, scan_points)
    pts = l1.point_at(s)
    ok = g.in_domain(pts)
    vals = np.where(ok, g.line_signed_distance(l2, pts), np.nan)
    roots = []
    sign = np.sign(vals)
    for i in range(scan_points - 1):
        if not (ok[i] and ok[i + 1]):
            continue
        if sign[i] == 0.0:
            roots.append(s[i])
        elif sign[i] * sign[i + 1] < 0:
            lo, hi = s[i], s[i + 1]
            flo = vals[i]
            for _ in range(90):
                mid = 0.5 * (lo + hi)
                fm = float(g.line_signed_distance(l2, l1.point_at(mid)))
                if flo * fm <= 0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            roots.append(0.5 * (lo + hi))
    if not roots:
        return None
    root = min(roots, key=abs)
    h = 1e-7
    slope = (
        float(g.line_signed_distance(l2, l1.point_at(root + h)))
        - float(g.line_signed_distance(l2, l1.point_at(root - h)))
    ) / (2 * h)
    if abs(slope) < 1.0 / _COND_LIMIT:
        raise IllConditionedError("nearly tangent geodesics")
    return l1.point_at(np.float64(root))


def circle_through_chord(a, b, arc_measure: float, side: int):
    """Euclidean circle on which chord ab subtends an arc of given measure.

    ``side=+1`` places the center at ``midpoint + cot(arc/2) * |ab|/2``
    along the left normal of the directed chord a->b (so for arc < pi the
    arc itself lies on the right of a->b, and mirrored for ``side=-1``).
    Inscribed-angle check: any point of the complementary arc sees ab
    under arc_measure/2.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if not 0.0 < arc_measure < TWO_PI:
        raise GeometryError("arc measure must lie in (0, 2*pi)")
    chord = b - a
    c = np.linalg.norm(chord)
    if c < 1e-300:
        raise CoincidentPointsError("degenerate chord")
    mid = 0.5 * (a + b)
    n_left = rot90(chord / c)
    half = 0.5 * arc_measure
    offset = (c / 2.0) / np.tan(half)  # 0 at arc == pi (Thales)
    center = mid + side * offset * n_left
    radius = (c / 2.0) / np.sin(half)
    return center, radius


def intersect_circles(c0, r0, c1, r1):
    """Intersection points of two Euclidean circles (0, 1, or 2 points)."""
    c0 = np.asarray(c0, dtype=float)
    c1 = np.asarray(c1, dtype=float)
    d = np.linalg.norm(c1 - c0)
    if d < 1e-300:
        return []
    if d > r0 + r1 or d < abs(r0 - r1):
        return []
    a = (r0 * r0 - r1 * r1 + d * d) / (2 * d)
    h2 = r0 * r0 - a * a
    h = np.sqrt(max(h2, 0.0))
    u = (c1 - c0) / d
    base = c0 + a * u
    perp = rot90(u)
    if h < 1e-15:
        return [base]
    return [base + h * perp, base - h * perp]
