"""Tripod configurations of locally convex Euclidean curves.

For a support curve with rotation index n the three normal lines at
parameters (a + 2*pi*i/3, a + 2*pi*j/3, a + 2*pi*k/3) are concurrent
exactly when the shifted sum

    P_{i,j,k}(a) = p(a + 2*pi*i/3) + p(a + 2*pi*j/3) + p(a + 2*pi*k/3)

vanishes, where p = q' is the signed origin-to-normal-line distance.
Index triples are taken with residues (0, 1, 2) mod 3 inside
{0, ..., 3n-1} and counted up to the simultaneous shift
{i, j, k} -> {i+m, j+m, k+m} mod 3n.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .geometry import EUCLIDEAN, intersect_lines
from .curves import NormalFoot, SupportCurve

TWO_PI = 2.0 * np.pi

CONTINUUM_TOL = 1e-10       # max |P| below this means a whole continuum of zeros
TANGENTIAL_SLOPE_TOL = 1e-8 # |P'| below this at a root marks it degenerate
ROOT_TOL = 1e-12


@dataclass(frozen=True)
class IndexClass:
    """Equivalence class of shift-related index triples, normalized to i=0."""

    n: int
    j: int
    k: int
    orbit: tuple = ()

    @property
    def triple(self):
        return (0, self.j, self.k)

    def shifts(self):
        """Angular shifts 2*pi*m/3 of the three feet."""
        return np.array([0.0, TWO_PI * self.j / 3.0, TWO_PI * self.k / 3.0])


def _orbit(n: int, j: int, k: int):
    """Orbit of the normalized pair under re-normalized set shifts."""
    m = 3 * n
    seen = []
    cur = (j, k)
    for _ in range(3):
        if cur not in seen:
            seen.append(cur)
        cur = ((cur[1] - cur[0]) % m, (-cur[0]) % m)
    return tuple(sorted(seen))


def enumerate_classes(n: int):
    """All distinct index classes for rotation index n.

    Count is (n^2 + 2)/3 when 3 does not divide n (the triple {0, n, 2n}
    is shift-invariant) and n^2/3 when 3 | n.
    """
    if n < 1:
        raise ValueError("rotation index must be >= 1")
    out = []
    seen = set()
    for j in range(1, 3 * n, 3):
        for k in range(2, 3 * n, 3):
            orbit = _orbit(n, j, k)
            if orbit in seen:
                continue
            seen.add(orbit)
            jj, kk = orbit[0]
            out.append(IndexClass(n=n, j=jj, k=kk, orbit=orbit))
    return out


def theorem_lower_bound(n: int) -> int:
    """Published lower bound 2*ceil((n^2+2)/3) on the configuration count."""
    return 2 * int(np.ceil((n * n + 2) / 3.0))


@dataclass(eq=False)
class TripodConfiguration:
    feet: list
    tripod_point: np.ndarray
    angles: np.ndarray
    concurrency_residual: float
    angle_residual: float
    geometry: str = "euclidean"
    index_class: tuple | None = None
    root: float | None = None
    degenerate: bool = False
    representative: bool = False
    inside: bool | None = None
    vector_sum_zero: bool | None = None

    @property
    def foot_params(self):
        return np.array([f.param for f in self.feet])


@dataclass(eq=False)
class TripodSearchResult:
    configurations: list
    continuum: bool
    continuum_classes: list
    failures: list
    diameter: float

    def certified(self, diameter_tol: float = 1e-7, angle_tol: float = 1e-8):
        lim = diameter_tol * self.diameter
        return [
            c
            for c in self.configurations
            if c.concurrency_residual < lim and c.angle_residual < angle_tol
        ]

    @property
    def count(self) -> int:
        return len(self.configurations)


def p_sum(sc: SupportCurve, cls: IndexClass, alpha, deriv: int = 0):
    shifts = cls.shifts()
    alpha = np.asarray(alpha, dtype=float)
    return sum(sc.q(alpha + s, deriv=deriv + 1) for s in shifts)


def _polish_root(sc, cls, a, lo=None, hi=None):
    """Newton polish with bisection fallback inside [lo, hi]."""
    for _ in range(60):
        f = float(p_sum(sc, cls, a))
        if abs(f) < ROOT_TOL:
            return a
        df = float(p_sum(sc, cls, a, deriv=1))
        if df == 0.0:
            break
        step = f / df
        a_new = a - step
        if lo is not None and not (lo - 1e-9 <= a_new <= hi + 1e-9):
            break
        a = a_new
        if abs(step) < 1e-16:
            break
    return a


def _configuration_from_root(sc, cls, alpha):
    params = np.mod(alpha + cls.shifts(), sc.period)
    feet = [NormalFoot(float(a), sc.point(a), sc.normal_line(a)) for a in params]
    point = intersect_lines(feet[0].normal, feet[1].normal)
    if point is None:
        return None
    # certificates are recomputed from the assembled data, not assumed
    conc = max(float(EUCLIDEAN.line_point_distance(f.normal, point)) for f in feet)
    dirs = [f.normal.direction for f in feet]
    angles = np.array(
        [
            np.arccos(np.clip(np.dot(dirs[i], dirs[(i + 1) % 3]), -1.0, 1.0))
            for i in range(3)
        ]
    )
    angle_residual = float(np.max(np.abs(angles - TWO_PI / 3.0)))
    vec = sum(sc.normal(a) for a in params)
    cfg = TripodConfiguration(
        feet=feet,
        tripod_point=point,
        angles=angles,
        concurrency_residual=conc,
        angle_residual=angle_residual,
        index_class=cls.triple,
        root=float(np.mod(alpha, sc.period)),
        inside=sc.contains(point),
        vector_sum_zero=bool(np.linalg.norm(vec) < 1e-6),
    )
    return cfg


def _dedup_key(cfg: TripodConfiguration, period: float):
    params = np.sort(np.mod(cfg.foot_params, period))
    params = np.where(period - params < 1e-7, params - period, params)
    key = tuple(np.round(np.sort(params), 7)) + tuple(np.round(cfg.tripod_point, 7))
    return key


def find_tripods(sc: SupportCurve, scan_points: int = 8192) -> TripodSearchResult:
    """Locate all tripod configurations of a support curve.

    Scans every index class over the full fundamental domain
    [0, 2*pi*n), bisects sign changes of the p-sum, Newton-polishes to
    |P| < 1e-12 and converts each zero to a certified configuration;
    geometric duplicates (same unordered feet + tripod point) are merged.
    Classes whose p-sum vanishes identically (circles, and curves whose
    tangent-triangle area is constant for that class) set the continuum
    flag and contribute two flagged representative configurations.
    """
    n_pts = max(scan_points, 4096 * sc.rotation_index)
    grid = np.linspace(0.0, sc.period, n_pts, endpoint=False)
    step = sc.period / n_pts
    configs = {}
    continuum_classes = []
    failures = []
    diameter = float(reconstruct_diameter(sc))

    for cls in enumerate_classes(sc.rotation_index):
        vals = p_sum(sc, cls, grid)
        if float(np.max(np.abs(vals))) < CONTINUUM_TOL:
            continuum_classes.append(cls)
            continue
        roots = []
        sign = np.sign(vals)
        for i in range(n_pts):
            a, b = grid[i], grid[i] + step
            fa, fb = vals[i], vals[(i + 1) % n_pts]
            if fa == 0.0:
                roots.append(a)
                continue
            if fa * fb < 0:
                lo, hi, flo = a, b, fa
                for _ in range(50):
                    mid = 0.5 * (lo + hi)
                    fm = float(p_sum(sc, cls, mid))
                    if flo * fm <= 0:
                        hi = mid
                    else:
                        lo, flo = mid, fm
                roots.append(_polish_root(sc, cls, 0.5 * (lo + hi), a, b))
        # tangential zeros produce no sign change: check p-sum extrema too
        dvals = p_sum(sc, cls, grid, deriv=1)
        dsign = np.sign(dvals)
        for i in range(n_pts):
            if dsign[i] * dsign[(i + 1) % n_pts] < 0:
                lo, hi, flo = grid[i], grid[i] + step, dvals[i]
                for _ in range(50):
                    mid = 0.5 * (lo + hi)
                    fm = float(p_sum(sc, cls, mid, deriv=1))
                    if flo * fm <= 0:
                        hi = mid
                    else:
                        lo, flo = mid, fm
                ext = 0.5 * (lo + hi)
                if abs(float(p_sum(sc, cls, ext))) < CONTINUUM_TOL:
                    roots.append(ext)
        for root in roots:
            resid = abs(float(p_sum(sc, cls, root)))
            if resid > 1e-9:
                failures.append((cls.triple, float(root), resid))
                continue
            cfg = _configuration_from_root(sc, cls, root)
            if cfg is None:
                failures.append((cls.triple, float(root), np.inf))
                continue
            cfg.degenerate = abs(float(p_sum(sc, cls, root, deriv=1))) < TANGENTIAL_SLOPE_TOL
            configs.setdefault(_dedup_key(cfg, sc.period), cfg)

    for cls in continuum_classes:
        # p-sum vanishes identically: emit two certified representatives
        for a in (0.0, sc.period / (6.0 * sc.rotation_index)):
            cfg = _configuration_from_root(sc, cls, a)
            if cfg is not None:
                cfg.degenerate = True
                cfg.representative = True
                configs.setdefault(_dedup_key(cfg, sc.period), cfg)

    ordered = sorted(configs.values(), key=lambda c: (c.root or 0.0, c.index_class or ()))
    return TripodSearchResult(
        configurations=ordered,
        continuum=bool(continuum_classes),
        continuum_classes=[c.triple for c in continuum_classes],
        failures=failures,
        diameter=diameter,
    )


def reconstruct_diameter(sc: SupportCurve) -> float:
    grid = np.linspace(0.0, sc.period, 512, endpoint=False)
    pts = sc.point(grid)
    return float(np.max(np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)))


def delta_curve_test(sc: SupportCurve, scan_points: int = 8192) -> bool:
    """True iff q(a) + q(a + 2*pi/3) + q(a + 4*pi/3) is constant (n = 1)."""
    if sc.rotation_index != 1:
        raise ValueError("delta-curve test applies to rotation index 1")
    grid = np.linspace(0.0, TWO_PI, scan_points, endpoint=False)
    s = sc.q(grid) + sc.q(grid + TWO_PI / 3.0) + sc.q(grid + 2.0 * TWO_PI / 3.0)
    return bool(np.max(s) - np.min(s) < 1e-10)


def equidistant_invariance_check(sc: SupportCurve, r: float, tol: float = 1e-7) -> bool:
    """Tripod points of the curve and of its offset agree pairwise."""
    base = find_tripods(sc)
    shifted = find_tripods(sc.offset(r))
    if base.continuum and shifted.continuum:
        return True
    a = np.array([c.tripod_point for c in base.configurations if not c.representative])
    b = np.array([c.tripod_point for c in shifted.configurations if not c.representative])
    if len(a) != len(b):
        return False
    if len(a) == 0:
        return True
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1)
    return bool(np.max(np.min(d, axis=1)) < tol and np.max(np.min(d, axis=0)) < tol)
