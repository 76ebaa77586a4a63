"""General-angle triple normals of arbitrary C^2 closed plane curves.

Given target angles (theta_1, theta_2, theta_3) with sum 2*pi and each
less than pi, a triangle of maximal area with vertex angles
tau_i = pi - theta_i circumscribing the curve touches it at three points
whose normals are concurrent and realize the requested angles.  The
meeting point is a tau-center of the touch triangle, and the
circumscribing triangle is antipedal to the touch triangle with respect
to it.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .curves import NormalFoot, SampledCurve
from .geometry import (
    EUCLIDEAN,
    GeometryError,
    circle_through_chord,
    cross2,
    intersect_circles,
    intersect_lines,
    rot90,
)

TWO_PI = 2.0 * np.pi


class DegenerateConstructionError(GeometryError):
    pass


class VertexFermatError(GeometryError):
    """The Fermat point degenerates to a vertex (some angle >= 2*pi/3)."""


@dataclass(eq=False)
class Triangle:
    vertices: np.ndarray  # (3, 2), ordered

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(3, 2)
        if abs(self.signed_area) <= 1e-12:
            raise DegenerateConstructionError("degenerate (collinear) triangle")

    @property
    def signed_area(self) -> float:
        a, b, c = self.vertices
        return 0.5 * float(cross2(b - a, c - a))

    @property
    def area(self) -> float:
        return abs(self.signed_area)

    def angles(self):
        """Interior angles at the three vertices, in vertex order."""
        v = self.vertices
        out = []
        for i in range(3):
            u1 = v[(i + 1) % 3] - v[i]
            u2 = v[(i + 2) % 3] - v[i]
            c = np.dot(u1, u2) / (np.linalg.norm(u1) * np.linalg.norm(u2))
            out.append(float(np.arccos(np.clip(c, -1.0, 1.0))))
        return np.array(out)


@dataclass(eq=False)
class TauCenter:
    triangle: Triangle
    taus: tuple
    center: np.ndarray
    circle_residual: float
    degenerate: bool = False


def _circle_on_side(a, b, arc, ref_point):
    """Circle through a, b whose arc of the given measure lies on ref_point's side.

    With the signed-cot center convention of circle_through_chord, the
    requested arc lands on the reference side exactly when side =
    -side_of_ref: for arc < pi the minor arc lies opposite the center,
    and for arc > pi the signed offset flips the center across the chord
    so the major arc lies on the reference side.
    """
    chord = b - a
    side_of_ref = np.sign(float(cross2(chord, ref_point - a)))
    if side_of_ref == 0.0:
        raise DegenerateConstructionError("reference point on the chord line")
    return circle_through_chord(a, b, arc, int(-side_of_ref))


def tau_center(t: Triangle, taus) -> TauCenter:
    """Intersection point of the three chord circles with arcs 2*tau_i.

    The circles sit over AB, BC, CA with arcs on the same sides as C, A,
    B respectively; the center sees the chords under the supplementary
    angles pi - tau_i.  When the taus equal the triangle's own vertex
    angles (C, A, B order) all three circles coincide with the
    circumcircle and the construction is flagged degenerate.
    """
    taus = tuple(float(x) for x in taus)
    if abs(sum(taus) - np.pi) > 1e-10:
        raise ValueError("tau angles must sum to pi")
    if any(not 0.0 < x < np.pi for x in taus):
        raise ValueError("each tau must lie in (0, pi)")
    a, b, c = t.vertices
    c1_center, c1_r = _circle_on_side(a, b, 2.0 * taus[0], c)
    c2_center, c2_r = _circle_on_side(b, c, 2.0 * taus[1], a)
    c3_center, c3_r = _circle_on_side(c, a, 2.0 * taus[2], b)

    if (
        np.linalg.norm(c1_center - c2_center) < 1e-12
        and np.linalg.norm(c1_center - c3_center) < 1e-12
    ):
        # all three circles coincide (circumcircle case)
        return TauCenter(t, taus, c1_center.copy(), 0.0, degenerate=True)

    pts = intersect_circles(c1_center, c1_r, c2_center, c2_r)
    pts = [p for p in pts if np.linalg.norm(p - b) > 1e-9]
    if not pts:
        return TauCenter(t, taus, b.copy(), np.inf, degenerate=True)
    center = pts[0]
    residual = abs(float(np.linalg.norm(center - c3_center)) - c3_r)
    return TauCenter(t, taus, center, residual)


def fermat_point(t: Triangle):
    """First isogonic center (tau_i = pi/3); raises if an angle >= 2*pi/3."""
    angles = t.angles()
    if np.max(angles) >= TWO_PI / 3.0 - 1e-12:
        raise VertexFermatError(
            f"vertex angle {np.max(angles):.6f} >= 2*pi/3: Fermat point is a vertex"
        )
    tc = tau_center(t, (np.pi / 3.0, np.pi / 3.0, np.pi / 3.0))
    if tc.degenerate:
        raise DegenerateConstructionError("isogonic construction degenerated")
    return tc.center


def antipedal_triangle(t: Triangle, p) -> Triangle:
    """Triangle whose sides pass through A, B, C perpendicular to PA, PB, PC."""
    p = np.asarray(p, dtype=float)
    lines = []
    for v in t.vertices:
        d = v - p
        n = np.linalg.norm(d)
        if n < 1e-12:
            raise DegenerateConstructionError("p coincides with a vertex")
        lines.append((v, rot90(d / n)))
    verts = []
    for i in range(3):
        (b1, d1) = lines[(i + 1) % 3]
        (b2, d2) = lines[(i + 2) % 3]
        cross = d1[0] * d2[1] - d1[1] * d2[0]
        if abs(cross) < 1e-13:
            raise DegenerateConstructionError("two perpendiculars are parallel")
        rhs = b2 - b1
        s = (rhs[0] * d2[1] - rhs[1] * d2[0]) / cross
        verts.append(b1 + s * d1)
    return Triangle(np.array(verts))


# -- circumscribing triangles ----------------------------------------------


class ConvexSupport:
    """Support function of the convex hull of a point cloud."""

    def __init__(self, points):
        pts = np.asarray(points, dtype=float)
        self.hull = _convex_hull(pts)
        edges = np.roll(self.hull, -1, axis=0) - self.hull
        normals = -rot90(edges / np.linalg.norm(edges, axis=1, keepdims=True))
        ang = np.mod(np.arctan2(normals[:, 1], normals[:, 0]), TWO_PI)
        order = np.argsort(ang)
        # vertex i supports all directions between edge normals i-1 and i
        self._edge_angles = ang[order]
        self._verts = self.hull[order]

    def support_point(self, phi):
        """Hull vertex attaining max <x, (cos phi, sin phi)>."""
        phi = np.mod(np.asarray(phi, dtype=float), TWO_PI)
        idx = np.searchsorted(self._edge_angles, phi, side="left") % len(self._verts)
        return self._verts[idx]

    def support(self, phi):
        n = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
        return np.sum(self.support_point(phi) * n, axis=-1)


def _convex_hull(points):
    """Andrew monotone chain; returns hull vertices counterclockwise."""
    pts = np.unique(np.round(points, 12), axis=0)
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
    if len(pts) < 3:
        raise GeometryError("hull of fewer than 3 distinct points")

    def half(seq):
        out = []
        for p in seq:
            while len(out) > 1 and cross2(out[-1] - out[-2], p - out[-2]) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])


@dataclass(eq=False)
class CircumscribingTriangle:
    triangle: Triangle
    alpha: float
    area: float
    touch_params: np.ndarray
    touch_points: np.ndarray
    normal_angles: np.ndarray
    flat_contact: bool = False


def _normal_angle_offsets(taus, orientation):
    d1 = np.pi - taus[1]
    d2 = np.pi - taus[2]
    if orientation < 0:
        return np.array([0.0, -d1, -(d1 + d2)])
    return np.array([0.0, d1, d1 + d2])


def _triangle_from_support(sup, psi):
    n = np.stack([np.cos(psi), np.sin(psi)], axis=-1)
    h = sup.support(psi)
    verts = []
    for i in range(3):
        n1, n2 = n[(i + 1) % 3], n[(i + 2) % 3]
        h1, h2 = h[(i + 1) % 3], h[(i + 2) % 3]
        det = n1[0] * n2[1] - n1[1] * n2[0]
        verts.append(np.array([h1 * n2[1] - h2 * n1[1], h2 * n1[0] - h1 * n2[0]]) / det)
    return np.array(verts)


def _area_of(sup, offsets, alpha):
    verts = _triangle_from_support(sup, offsets + alpha)
    a, b, c = verts
    return abs(0.5 * float(cross2(b - a, c - a)))


def _areas_on_grid(sup, offsets, alphas):
    """Vectorized support-line triangle areas over a grid of rotations."""
    psi = offsets[:, None] + alphas[None, :]  # (3, M)
    n = np.stack([np.cos(psi), np.sin(psi)], axis=-1)  # (3, M, 2)
    h = np.stack([sup.support(psi[i]) for i in range(3)])  # (3, M)
    verts = []
    for i in range(3):
        n1, n2 = n[(i + 1) % 3], n[(i + 2) % 3]
        h1, h2 = h[(i + 1) % 3], h[(i + 2) % 3]
        det = cross2(n1, n2)
        verts.append(
            np.stack(
                [h1 * n2[..., 1] - h2 * n1[..., 1], h2 * n1[..., 0] - h1 * n2[..., 0]], axis=-1
            )
            / det[..., None]
        )
    a, b, c = verts
    return np.abs(0.5 * cross2(b - a, c - a))


def _refine_touch_param(c: SampledCurve, s0: float, phi: float) -> float:
    """Newton-maximize <gamma(s), n(phi)> along the curve near s0."""
    n = np.array([np.cos(phi), np.sin(phi)])
    s = s0
    for _ in range(40):
        d1 = float(c.velocity_at(s) @ n)
        d2 = float(c._interp(np.float64(s), deriv=2) @ n)
        if d2 >= 0 or abs(d1) < 1e-15:
            break
        step = d1 / d2
        s -= step
        if abs(step) < 1e-15:
            break
    return float(np.mod(s, c.period))


def max_circumscribing_triangle(
    c: SampledCurve,
    taus,
    orientation: int = 1,
    scan_points: int = 2048,
):
    """Maximal-area circumscribing triangles of a fixed similarity class.

    Scans the rotation angle of the side-normal frame, refines local
    maxima of the support-line triangle area by golden section, and
    returns all global maximizers (symmetric curves legitimately have
    several) with touch points Newton-refined on the curve.
    """
    taus = tuple(float(x) for x in taus)
    if abs(sum(taus) - np.pi) > 1e-10 or any(not 0.0 < x < np.pi for x in taus):
        raise ValueError("class angles must be positive with sum pi")
    if c.geometry is not EUCLIDEAN:
        raise GeometryError("circumscribing triangles are Euclidean-only")

    sup = ConvexSupport(c.points)
    offsets = _normal_angle_offsets(np.asarray(taus), orientation)
    alphas = np.linspace(0.0, TWO_PI, scan_points, endpoint=False)
    areas = _areas_on_grid(sup, offsets, alphas)

    # near-global local maxima on the circular grid, capped for symmetric
    # curves where every grid point ties (circle: any alpha is optimal)
    best = float(np.max(areas))
    peaks = [
        i
        for i in range(scan_points)
        if areas[i] >= areas[i - 1]
        and areas[i] >= areas[(i + 1) % scan_points]
        and areas[i] >= best - 1e-6 * (1.0 + best)
    ]
    kept = []
    for i in sorted(peaks, key=lambda i: -areas[i]):
        if len(kept) >= 12:
            break
        if all(min(abs(i - j), scan_points - abs(i - j)) > 3 for j in kept):
            kept.append(i)

    results = []
    gr = (np.sqrt(5.0) - 1.0) / 2.0
    step = TWO_PI / scan_points
    for i in kept:
        lo, hi = alphas[i] - step, alphas[i] + step
        for _ in range(80):
            m1 = hi - gr * (hi - lo)
            m2 = lo + gr * (hi - lo)
            if _area_of(sup, offsets, m1) < _area_of(sup, offsets, m2):
                lo = m1
            else:
                hi = m2
        alpha = _concurrency_polish(c, sup, offsets, 0.5 * (lo + hi))
        res = _build_circumscribing(c, sup, offsets, alpha)
        if res is not None:
            results.append(res)

    if not results:
        raise GeometryError("no circumscribing triangle found")
    top = max(r.area for r in results)
    results = [r for r in results if r.area > top - 1e-8 * (1.0 + top)]
    return _dedup_circumscribing(results)


def _concurrency_gap(c, offsets, alpha):
    """Signed distance of the third normal from the first two's crossing."""
    psi = offsets + alpha
    lines = []
    for phi in psi:
        n = np.array([np.cos(phi), np.sin(phi)])
        proj = c.points @ n
        s = _refine_touch_param(c, float(c.params[int(np.argmax(proj))]), phi)
        lines.append(EUCLIDEAN.line(c.point_at(s), n))
    p = intersect_lines(lines[0], lines[1])
    if p is None:
        return None
    return float(EUCLIDEAN.line_signed_distance(lines[2], p))


def _concurrency_polish(c, sup, offsets, alpha, max_iter: int = 12):
    """Secant iteration driving the concurrency gap to machine precision.

    Area maximization alone locates alpha only to ~sqrt(eps) (the area is
    quadratically flat at the maximizer); the gap crosses zero
    transversally there, so a secant polish recovers full precision.
    """
    g0 = _concurrency_gap(c, offsets, alpha)
    if g0 is None or abs(g0) < 1e-13:
        return alpha
    h = 1e-6
    a0, a1 = alpha, alpha + h
    g1 = _concurrency_gap(c, offsets, a1)
    if g1 is None:
        return alpha
    best_a, best_g = (a0, abs(g0)) if abs(g0) < abs(g1) else (a1, abs(g1))
    for _ in range(max_iter):
        if g1 == g0:
            break
        a2 = a1 - g1 * (a1 - a0) / (g1 - g0)
        if abs(a2 - a1) > 10 * TWO_PI / 2048:
            break  # leaving the bracket: keep the area maximizer
        g2 = _concurrency_gap(c, offsets, a2)
        if g2 is None:
            break
        a0, g0, a1, g1 = a1, g1, a2, g2
        if abs(g2) < best_g:
            best_a, best_g = a2, abs(g2)
        if abs(g2) < 1e-14:
            break
    return best_a


def _build_circumscribing(c, sup, offsets, alpha):
    psi = offsets + alpha
    try:
        tri = Triangle(_triangle_from_support(sup, psi))
    except DegenerateConstructionError:
        return None
    params, points = [], []
    flat = False
    for phi in psi:
        n = np.array([np.cos(phi), np.sin(phi)])
        proj = c.points @ n
        top = float(np.max(proj))
        mask = proj > top - 1e-9 * (1.0 + abs(top))
        idx = np.nonzero(mask)[0]
        if _spread(c.params[idx], c.period) > 4.0 * c.period / c.params.size:
            flat = True  # side touches the curve along more than a point
        s = _refine_touch_param(c, float(c.params[idx[0]]), phi)
        params.append(s)
        points.append(c.point_at(s))
    return CircumscribingTriangle(
        triangle=tri,
        alpha=float(np.mod(alpha, TWO_PI)),
        area=tri.area,
        touch_params=np.array(params),
        touch_points=np.array(points),
        normal_angles=np.mod(psi, TWO_PI),
        flat_contact=flat,
    )


def _spread(params, period):
    if params.size <= 1:
        return 0.0
    ang = np.sort(np.mod(params, period))
    gaps = np.diff(np.concatenate([ang, [ang[0] + period]]))
    return period - float(np.max(gaps))


def _dedup_circumscribing(results):
    out = []
    for r in sorted(results, key=lambda x: x.alpha):
        key = np.sort(np.round(r.touch_params, 6))
        if any(np.allclose(key, np.sort(np.round(o.touch_params, 6)), atol=1e-5) for o in out):
            continue
        out.append(r)
    return out


# -- the triple-normal solver ------------------------------------------------


@dataclass(eq=False)
class TripleNormalResult:
    feet: list
    meeting_point: np.ndarray
    achieved_angles: np.ndarray
    requested_angles: np.ndarray
    circumscribing: Triangle
    concurrency_residual: float
    angle_residual: float
    tangency_residual: float
    orientation: int
    flat_contact: bool = False

    def certified(self, diameter: float, diameter_tol: float = 1e-7, angle_tol: float = 1e-7) -> bool:
        return (
            self.concurrency_residual < diameter_tol * diameter
            and self.angle_residual < angle_tol
            and self.tangency_residual < 1e-6
        )


def solve_triple_normal(c: SampledCurve, thetas, scan_points: int = 2048):
    """Three concurrent normals of the curve with prescribed angles.

    Both orientations of the similarity class are tried; every global
    maximizer of the circumscribing-triangle area yields one candidate,
    which is then certified (concurrency, achieved angles, tangency of
    the touch points).  Returns the list of certified results.
    """
    thetas = np.asarray([float(x) for x in thetas])
    if thetas.shape != (3,):
        raise ValueError("exactly three angles are required")
    if np.any(thetas >= np.pi) or np.any(thetas <= 0) or abs(thetas.sum() - TWO_PI) > 1e-9:
        raise ValueError("angles must be < pi with sum 2*pi")
    taus = np.pi - thetas

    results = []
    for orientation in (1, -1):
        for cand in max_circumscribing_triangle(c, taus, orientation, scan_points):
            res = _assemble_result(c, cand, thetas, orientation)
            if res is not None:
                results.append(res)
    diameter = c.diameter()
    certified = [r for r in results if r.certified(diameter)]
    return _dedup_results(certified if certified else results)


def _assemble_result(c, cand, thetas, orientation):
    feet = []
    for s, phi in zip(cand.touch_params, cand.normal_angles):
        point = c.point_at(float(s))
        n = np.array([np.cos(phi), np.sin(phi)])
        feet.append(NormalFoot(float(s), point, EUCLIDEAN.line(point, n)))

    # pairwise intersections of the three normals
    pts = []
    for i in range(3):
        p = intersect_lines(feet[i].normal, feet[(i + 1) % 3].normal)
        if p is None:
            return None
        pts.append(p)
    pts = np.array(pts)
    meeting = pts.mean(axis=0)
    conc = float(np.max(np.linalg.norm(pts - meeting, axis=-1)))

    dirs = np.array([f.normal.direction for f in feet])
    ang = np.sort(np.mod(np.arctan2(dirs[:, 1], dirs[:, 0]), TWO_PI))
    gaps = np.diff(np.concatenate([ang, [ang[0] + TWO_PI]]))
    achieved = _match_angles(gaps, thetas)
    if achieved is None:
        return None
    angle_residual = float(np.max(np.abs(achieved - thetas)))

    tangency = max(
        abs(float(c.tangent_at(f.param) @ f.normal.direction)) for f in feet
    )
    return TripleNormalResult(
        feet=feet,
        meeting_point=meeting,
        achieved_angles=achieved,
        requested_angles=thetas.copy(),
        circumscribing=cand.triangle,
        concurrency_residual=conc,
        angle_residual=angle_residual,
        tangency_residual=tangency,
        orientation=orientation,
        flat_contact=cand.flat_contact,
    )


def _match_angles(gaps, thetas):
    """Order the three direction gaps against the requested angles."""
    remaining = list(gaps)
    out = []
    for t in thetas:
        i = int(np.argmin([abs(g - t) for g in remaining]))
        out.append(remaining.pop(i))
    out = np.array(out)
    if np.max(np.abs(out - thetas)) > 0.3:
        return None  # wrong branch: gaps do not realize the request
    return out


def _dedup_results(results):
    out = []
    for r in results:
        key = np.sort(np.round([f.param for f in r.feet], 6))
        if any(
            np.allclose(key, np.sort(np.round([f.param for f in o.feet], 6)), atol=1e-5)
            and np.linalg.norm(r.meeting_point - o.meeting_point) < 1e-5
            for o in out
        ):
            continue
        out.append(r)
    return out
