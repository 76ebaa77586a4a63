"""Curve representations and differential-geometric derived data.

Two models:

* :class:`SupportCurve` -- locally convex Euclidean curves given by the
  Fourier coefficients of their support function q(alpha) on
  [0, 2*pi*n), n the rotation index.  With outward unit normal
  nu(alpha) = (cos a, sin a) the curve point is

      gamma(a) = q(a) * nu(a) + q'(a) * nu_perp(a),

  nu_perp = (-sin a, cos a), so the tangent direction at parameter a is
  nu_perp(a) (angle a measured from the +y reference direction), the
  speed is the radius of curvature q + q'', and q = gamma . nu while
  q' = gamma . nu_perp is the signed distance from the origin to the
  normal line.

* :class:`SampledCurve` -- dense uniform samples of any smooth closed
  curve in any of the three geometries, backed by trigonometric
  interpolation so points/derivatives are available at arbitrary
  parameters with spectral accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .geometry import (
    EUCLIDEAN,
    HYPERBOLIC,
    SPHERE,
    GeodesicLine,
    Geometry,
    rot90,
)
from .trig import TrigSeries

TWO_PI = 2.0 * np.pi
DEFAULT_SAMPLES_PER_TURN = 4096


class CurveError(ValueError):
    pass


class ConvexityError(CurveError):
    """Radius of curvature q + q'' fails to be positive somewhere."""

    def __init__(self, alpha, value):
        self.alpha = float(alpha)
        self.value = float(value)
        super().__init__(f"q + q'' = {value:.3e} <= 0 at alpha = {alpha:.6f}")


class InflectionError(CurveError):
    """Curvature vanishes, so a center of curvature does not exist."""


def _nu(alpha):
    alpha = np.asarray(alpha, dtype=float)
    return np.stack([np.cos(alpha), np.sin(alpha)], axis=-1)


def _nu_perp(alpha):
    alpha = np.asarray(alpha, dtype=float)
    return np.stack([-np.sin(alpha), np.cos(alpha)], axis=-1)


class SupportCurve:
    """Locally convex plane curve defined by its support function.

    q(a) = a0 + sum_k cos_coeffs[k-1]*cos(k*a/n) + sin_coeffs[k-1]*sin(k*a/n)
    on a in [0, 2*pi*n); the k/n frequency grid is exactly the set of
    2*pi*n-periodic harmonics.
    """

    def __init__(self, rotation_index: int, a0: float, cos_coeffs=(), sin_coeffs=(), check: bool = True):
        n = int(rotation_index)
        if n < 1:
            raise CurveError("rotation index must be a positive integer")
        cos_coeffs = np.atleast_1d(np.asarray(cos_coeffs, dtype=float))
        sin_coeffs = np.atleast_1d(np.asarray(sin_coeffs, dtype=float))
        if cos_coeffs.size == 0:
            cos_coeffs = np.zeros(max(sin_coeffs.size, 1))
        if sin_coeffs.size == 0:
            sin_coeffs = np.zeros(cos_coeffs.size)
        k = max(cos_coeffs.size, sin_coeffs.size)
        cos_coeffs = np.pad(cos_coeffs, (0, k - cos_coeffs.size))
        sin_coeffs = np.pad(sin_coeffs, (0, k - sin_coeffs.size))
        self.rotation_index = n
        self.period = TWO_PI * n
        self._series = TrigSeries(float(a0), cos_coeffs, sin_coeffs, period=self.period)
        if check:
            self.validate_convexity()

    @property
    def a0(self) -> float:
        return float(self._series.a0)

    @property
    def cos_coeffs(self):
        return self._series.cos_coeffs

    @property
    def sin_coeffs(self):
        return self._series.sin_coeffs

    def q(self, alpha, deriv: int = 0):
        return self._series(alpha, deriv=deriv)

    def p(self, alpha):
        """Signed distance from the origin to the normal line: p = q'."""
        return self.q(alpha, deriv=1)

    def radius_of_curvature(self, alpha):
        return self.q(alpha) + self.q(alpha, deriv=2)

    def validate_convexity(self, grid: int | None = None) -> None:
        n_pts = grid or DEFAULT_SAMPLES_PER_TURN * self.rotation_index
        alpha = np.linspace(0.0, self.period, n_pts, endpoint=False)
        rho = self.radius_of_curvature(alpha)
        i = int(np.argmin(rho))
        if rho[i] <= 0.0:
            raise ConvexityError(alpha[i], rho[i])

    def point(self, alpha):
        q = self.q(alpha)
        dq = self.q(alpha, deriv=1)
        return q[..., None] * _nu(alpha) + dq[..., None] * _nu_perp(alpha)

    def tangent(self, alpha):
        return _nu_perp(alpha)

    def normal(self, alpha):
        """Outward unit normal (equals nu)."""
        return _nu(alpha)

    def normal_line(self, alpha) -> GeodesicLine:
        return EUCLIDEAN.line(self.point(alpha), _nu(alpha))

    def offset(self, r: float, check: bool = True) -> "SupportCurve":
        """Equidistant curve: only a0 shifts, all harmonics unchanged."""
        return SupportCurve(
            self.rotation_index,
            self.a0 + float(r),
            self.cos_coeffs.copy(),
            self.sin_coeffs.copy(),
            check=check,
        )

    def diameter_bound(self) -> float:
        """Cheap upper-bound scale for residual normalization."""
        amp = float(np.sum(np.hypot(self.cos_coeffs, self.sin_coeffs)))
        return 2.0 * (abs(self.a0) + 2.0 * amp)

    def contains(self, x) -> bool:
        """Winding-number test of the reconstructed curve around x."""
        grid = np.linspace(0.0, self.period, 1024 * self.rotation_index, endpoint=False)
        return winding_number(self.point(grid), np.asarray(x, dtype=float)) != 0


@dataclass(eq=False)
class NormalFoot:
    param: float
    point: np.ndarray
    normal: GeodesicLine


class SampledCurve:
    """Closed curve as dense samples plus spectral interpolators."""

    def __init__(self, geometry: Geometry, params, points, period: float):
        self.geometry = geometry
        self.params = np.asarray(params, dtype=float)
        self.points = np.asarray(points, dtype=float)
        self.period = float(period)
        self.closed = True
        self._interp = TrigSeries.fit(self.points, period=self.period)
        self._build_frames()

    @classmethod
    def from_point_function(cls, geometry, fn, period: float = TWO_PI, n_samples: int = DEFAULT_SAMPLES_PER_TURN):
        params = np.linspace(0.0, period, n_samples, endpoint=False)
        return cls(geometry, params, np.asarray(fn(params), dtype=float), period)

    # -- frames ---------------------------------------------------------

    def _build_frames(self):
        t = self.params
        vel = self.velocity_at(t)
        speed = np.linalg.norm(vel, axis=-1)
        if np.any(speed < 1e-13):
            raise CurveError("curve is not an immersion (zero velocity sample)")
        self.tangents = vel / speed[..., None]
        if self.geometry is SPHERE:
            self.normals = np.cross(self.tangents, self.point_at(t))
        else:
            # right normal of the tangent: outward for counterclockwise curves
            self.normals = -rot90(self.tangents)
        self.curvature = self._curvature(t)
        self.total_length = float(np.sum(speed) * (self.period / t.size)) if self.geometry is EUCLIDEAN else float(
            np.sum(speed * self._metric_scale(self.point_at(t))) * (self.period / t.size)
        )

    def _metric_scale(self, pts):
        if self.geometry is HYPERBOLIC:
            return HYPERBOLIC.conformal_factor(pts)
        return np.ones(pts.shape[:-1])

    def _curvature(self, t):
        """Signed geodesic curvature (positive for counterclockwise convex)."""
        vel = self._interp(t, deriv=1)
        acc = self._interp(t, deriv=2)
        if self.geometry is SPHERE:
            pts = self._interp(t)
            g = pts / np.linalg.norm(pts, axis=-1, keepdims=True)
            gv = vel - np.sum(vel * g, axis=-1, keepdims=True) * g
            speed = np.linalg.norm(gv, axis=-1)
            det = np.sum(g * np.cross(vel, acc), axis=-1)
            return det / speed**3
        speed2 = np.sum(vel * vel, axis=-1)
        kappa_e = (vel[..., 0] * acc[..., 1] - vel[..., 1] * acc[..., 0]) / speed2**1.5
        if self.geometry is EUCLIDEAN:
            return kappa_e
        # conformal metric lambda^2 * delta: k_g = (k_e - d(log lambda)/dn_left)/lambda
        pts = self._interp(t)
        lam = HYPERBOLIC.conformal_factor(pts)
        n_left = rot90(vel / np.sqrt(speed2)[..., None])
        dlog = np.sum(pts * n_left, axis=-1) * lam  # grad log lambda = lam * x
        return (kappa_e - dlog) / lam

    # -- evaluation -----------------------------------------------------

    def point_at(self, t):
        pts = self._interp(t)
        if self.geometry is SPHERE:
            pts = pts / np.linalg.norm(pts, axis=-1, keepdims=True)
        return pts

    def velocity_at(self, t):
        """Chart derivative d gamma / dt (tangential for the sphere)."""
        vel = self._interp(t, deriv=1)
        if self.geometry is SPHERE:
            pts = self._interp(t)
            nrm = np.linalg.norm(pts, axis=-1, keepdims=True)
            g = pts / nrm
            vel = (vel - np.sum(vel * g, axis=-1, keepdims=True) * g) / nrm
        return vel

    def tangent_at(self, t):
        v = self.velocity_at(t)
        return v / np.linalg.norm(v, axis=-1, keepdims=True)

    def normal_at(self, t):
        tangent = self.tangent_at(t)
        if self.geometry is SPHERE:
            return np.cross(tangent, self.point_at(t))
        return -rot90(tangent)

    def curvature_at(self, t):
        return self._curvature(np.asarray(t, dtype=float))

    def normal_line_at(self, t) -> GeodesicLine:
        return self.geometry.line(self.point_at(t), self.normal_at(t))

    def foot(self, t) -> NormalFoot:
        return NormalFoot(float(t), self.point_at(float(t)), self.normal_line_at(float(t)))

    # -- derived scalars --------------------------------------------------

    def radius_of_curvature_geodesic(self):
        """Geodesic radius of the osculating circle at each sample."""
        k = self.curvature
        if self.geometry is EUCLIDEAN:
            return 1.0 / k
        if self.geometry is SPHERE:
            return np.arctan2(1.0, k)
        if np.any(k <= 1.0):
            raise InflectionError("hyperbolic curvature <= 1: no center of curvature")
        return np.arctanh(1.0 / k)

    def diameter(self) -> float:
        """Max pairwise geodesic distance over a coarse subgrid."""
        idx = np.linspace(0, self.params.size - 1, 256).astype(int)
        pts = self.points[idx]
        d = self.geometry.distance(pts[:, None, :], pts[None, :, :])
        return float(np.max(d))

    def min_antipodal_distance(self) -> float:
        t = np.linspace(0.0, self.period, 1024, endpoint=False)
        d = self.geometry.distance(self.point_at(t), self.point_at(t + self.period / 2.0))
        return float(np.min(d))

    def centroid(self):
        m = self.points.mean(axis=0)
        if self.geometry is SPHERE:
            return m / np.linalg.norm(m)
        return m

    def contains(self, x) -> bool:
        pts = self.points
        if self.geometry is SPHERE:
            pts = SPHERE.to_chart(pts)
            x = SPHERE.to_chart(np.asarray(x, dtype=float))
        return winding_number(pts, np.asarray(x, dtype=float)) != 0


def winding_number(polygon_points, x) -> int:
    """Winding of a closed sampled loop around x (chart coordinates)."""
    d = polygon_points - x
    ang = np.arctan2(d[:, 1], d[:, 0])
    inc = np.diff(np.concatenate([ang, ang[:1]]))
    inc = (inc + np.pi) % TWO_PI - np.pi
    return int(np.rint(inc.sum() / TWO_PI))


# -- constructors ---------------------------------------------------------


def reconstruct(sc: SupportCurve, n_samples: int | None = None) -> SampledCurve:
    """Sampled curve gamma(a) = q*nu + q'*nu_perp from a support curve."""
    n_samples = n_samples or DEFAULT_SAMPLES_PER_TURN * sc.rotation_index
    return SampledCurve.from_point_function(EUCLIDEAN, sc.point, period=sc.period, n_samples=n_samples)


def parametric_curve(points, geometry: Geometry = EUCLIDEAN, period: float = TWO_PI, recenter: bool = True) -> SampledCurve:
    """Curve from uniform samples; Euclidean input is recentered on its centroid."""
    points = np.asarray(points, dtype=float)
    if geometry is EUCLIDEAN and recenter:
        points = points - points.mean(axis=0)
    params = np.linspace(0.0, period, points.shape[0], endpoint=False)
    return SampledCurve(geometry, params, points, period)


def _radial_series(base_radius, cos_coeffs, sin_coeffs):
    cos_coeffs = np.atleast_1d(np.asarray(cos_coeffs, dtype=float))
    sin_coeffs = np.atleast_1d(np.asarray(sin_coeffs, dtype=float))
    k = max(cos_coeffs.size, sin_coeffs.size, 1)
    cos_coeffs = np.pad(cos_coeffs, (0, k - cos_coeffs.size))
    sin_coeffs = np.pad(sin_coeffs, (0, k - sin_coeffs.size))
    return TrigSeries(float(base_radius), cos_coeffs, sin_coeffs, period=TWO_PI)


def disk_radial_curve(base_radius: float, cos_coeffs=(), sin_coeffs=(), n_samples: int = DEFAULT_SAMPLES_PER_TURN) -> SampledCurve:
    """Hyperbolic curve at geodesic radius r(theta) from the disk origin."""
    r = _radial_series(base_radius, cos_coeffs, sin_coeffs)

    def fn(theta):
        rr = r(theta)
        if np.any(rr <= 0):
            raise CurveError("radial profile must stay positive")
        a = np.tanh(rr / 2.0)
        return np.stack([a * np.cos(theta), a * np.sin(theta)], axis=-1)

    return SampledCurve.from_point_function(HYPERBOLIC, fn, n_samples=n_samples)


def sphere_radial_curve(base_radius: float, cos_coeffs=(), sin_coeffs=(), n_samples: int = DEFAULT_SAMPLES_PER_TURN) -> SampledCurve:
    """Spherical curve at polar geodesic radius r(theta) around the +z pole."""
    r = _radial_series(base_radius, cos_coeffs, sin_coeffs)

    def fn(theta):
        rr = r(theta)
        if np.any(rr <= 0) or np.any(rr >= np.pi / 2 - SPHERE.margin):
            raise CurveError("radial profile must stay inside the open hemisphere")
        return np.stack(
            [np.sin(rr) * np.cos(theta), np.sin(rr) * np.sin(theta), np.cos(rr)], axis=-1
        )

    return SampledCurve.from_point_function(SPHERE, fn, n_samples=n_samples)


def ellipse(a: float, b: float, n_samples: int = DEFAULT_SAMPLES_PER_TURN) -> SampledCurve:
    def fn(t):
        return np.stack([a * np.cos(t), b * np.sin(t)], axis=-1)

    return SampledCurve.from_point_function(EUCLIDEAN, fn, n_samples=n_samples)


def limacon(offset: float = 0.5, n_samples: int = DEFAULT_SAMPLES_PER_TURN) -> SampledCurve:
    """(cos t + offset)*(cos t, sin t): immersed, rotation index 2 for offset < 1."""

    def fn(t):
        r = np.cos(t) + offset
        return np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)

    return SampledCurve.from_point_function(EUCLIDEAN, fn, n_samples=n_samples)


# -- operations ------------------------------------------------------------


def evolute(c: SampledCurve):
    """Centers of curvature (raw point sequence; may be singular)."""
    k = c.curvature
    if np.any(np.abs(k) < 1e-12):
        i = int(np.argmin(np.abs(k)))
        raise InflectionError(f"curvature vanishes near parameter {c.params[i]:.6f}")
    if c.geometry is EUCLIDEAN:
        return c.points - c.normals / k[:, None]
    rc = c.radius_of_curvature_geodesic()
    return c.geometry.exp(c.points, -c.normals, rc)


def curvature_center_at(c: SampledCurve, t: float):
    k = float(c.curvature_at(t))
    if abs(k) < 1e-12:
        raise InflectionError("curvature vanishes: no center of curvature")
    if c.geometry is EUCLIDEAN:
        return c.point_at(t) - c.normal_at(t) / k
    if c.geometry is SPHERE:
        rc = np.arctan2(1.0, k)
    else:
        if k <= 1.0:
            raise InflectionError("hyperbolic curvature <= 1: no center of curvature")
        rc = np.arctanh(1.0 / k)
    return c.geometry.exp(c.point_at(t), -c.normal_at(t), rc)


def equidistant(c: SampledCurve, r: float, n_samples: int | None = None):
    """Offset curve at constant geodesic distance r along the outward normal.

    Returns (curve, regular).  ``regular`` is False when the offset
    develops cusps (Euclidean criterion 1 + r*kappa > 0; non-Euclidean
    offsets are checked through their sampled speed).
    """
    n_samples = n_samples or c.params.size
    params = np.linspace(0.0, c.period, n_samples, endpoint=False)
    pts = c.geometry.exp(c.point_at(params), c.normal_at(params), np.full(n_samples, float(r)))
    regular = True
    if c.geometry is EUCLIDEAN:
        regular = bool(np.all(1.0 + r * c.curvature_at(params) > 1e-9))
    try:
        out = SampledCurve(c.geometry, params, pts, c.period)
    except CurveError:
        return None, False  # fully degenerate offset (e.g. circle onto its center)
    if regular and c.geometry is not EUCLIDEAN:
        speed = np.linalg.norm(out.velocity_at(params), axis=-1)
        regular = bool(np.all(speed > 1e-9))
    return out, regular


def verify_rotation_index(c: SampledCurve) -> int:
    """Total turning of the tangent divided by 2*pi (Euclidean curves)."""
    ang = np.arctan2(c.tangents[:, 1], c.tangents[:, 0])
    inc = np.diff(np.concatenate([ang, ang[:1]]))
    inc = (inc + np.pi) % TWO_PI - np.pi
    total = inc.sum() / TWO_PI
    n = float(np.rint(total))
    if abs(total - n) > 1e-6:
        raise CurveError(f"turning number {total!r} is not an integer")
    return int(n)


def closeness_score(c: SampledCurve) -> float:
    """diameter(evolute) / min antipodal width: small means near-circular."""
    ev = evolute(c)
    idx = np.linspace(0, ev.shape[0] - 1, 256).astype(int)
    pts = ev[idx]
    dmax = float(np.max(c.geometry.distance(pts[:, None, :], pts[None, :, :])))
    return dmax / c.min_antipodal_distance()
