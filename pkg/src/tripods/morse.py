"""Critical-point machinery for spherical/hyperbolic tripod configurations.

The configuration space of a closed curve gamma is
P = gamma_eps x gamma_eps x gamma_eps x R, where gamma_eps is the
outward offset at distance eps and R the closed region enclosed by
gamma.  The tripod functional

    f(t, u, v, p) = rho(t, p) + rho(u, p) + rho(v, p)

has its interior critical points exactly at tripod configurations of
gamma (feet normal, directions from p summing to zero); boundary
critical points where the gradient points outward ("Dirichlet" type)
occur only on diameters of gamma, in two configurations:

* case 1 -- p at one end of the diameter, all three feet beyond the
  opposite end;
* case 2 -- one foot directly behind p, two feet beyond the far end.

Their boundary Morse indices depend only on the diameter's orientation
(the sign of the offset between the two centers of curvature along the
diameter): case 1 gives 3/4 and case 2 gives 2/3 for negatively /
positively oriented diameters.  The boundary bookkeeping polynomial then
combines with the interior counts in the half-space Morse inequality

    M_f^D(T) - T^5 * P(1/T) = (1 + T) * Q(T),     P(T) = (1+T)^3,

whose quotient Q must have nonnegative integer coefficients whenever the
critical-point search is complete.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import kernels
from . import _kernels_py as _kp
from .curves import NormalFoot, SampledCurve, closeness_score, curvature_center_at, equidistant
from .euclidean import TripodConfiguration
from .geometry import SPHERE

TWO_PI = 2.0 * np.pi

GRAD_TOL = 1e-12
DEGENERATE_EIG_TOL = 1e-7


# -- small integer polynomials (ascending coefficients) ---------------------


def poly_trim(c):
    c = list(int(x) for x in c)
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_add(a, b):
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def poly_sub(a, b):
    return poly_add(a, [-x for x in b])


def poly_divmod_one_plus_t(c):
    """(q, r) with c(T) = (1 + T) q(T) + r; synthetic division at T = -1."""
    c = list(c)
    q = [0] * max(len(c) - 1, 0)
    acc = 0
    for i in range(len(c) - 1, -1, -1):
        if i == 0:
            acc = c[0] - acc
            return poly_trim(q), int(acc)
        q[i - 1] = c[i] - acc
        acc = q[i - 1]
    return [], 0


def poly_str(c, var: str = "T") -> str:
    if not poly_trim(c):
        return "0"
    parts = []
    for k, v in enumerate(c):
        if v == 0:
            continue
        if k == 0:
            parts.append(f"{v}")
        elif k == 1:
            parts.append(f"{v}*{var}")
        else:
            parts.append(f"{v}*{var}^{k}")
    return " + ".join(parts)


# -- domain types ------------------------------------------------------------


@dataclass(eq=False)
class ConfigSpacePoint:
    feet_params: np.ndarray
    p: np.ndarray
    geometry: str
    epsilon: float


@dataclass(eq=False)
class CriticalPoint:
    location: ConfigSpacePoint
    kind: str  # "interior" | "type_D" | "type_N"
    morse_index: int
    gradient_norm: float
    hessian_eigenvalues: np.ndarray
    degenerate: bool = False
    configuration: TripodConfiguration | None = None
    case: int | None = None
    orientation: int | None = None
    # number of genuine critical points in the S3 orbit this entry stands
    # for (6 for distinct feet); bookkeeping sums these.
    orbit_size: int = 1


@dataclass(eq=False)
class Diameter:
    s: float
    t: float
    a: np.ndarray
    b: np.ndarray
    length: float
    orientation_sign: int
    center_a: np.ndarray
    center_b: np.ndarray
    center_offset: float
    orthogonality_residual: float


@dataclass(eq=False)
class MorsePolynomials:
    c_poly: list
    d_poly: list
    morse_poly: list
    poincare_poly: list = field(default_factory=lambda: [1, 3, 3, 1])
    quotient: list = field(default_factory=list)
    remainder: int = 0
    divisible: bool = False
    nonnegative: bool = False
    c_two_positive_degrees: bool = False
    n_pairs: int = 0
    passed: bool = False
    skipped: str = ""
    type_n_note: str = (
        "type-N boundary critical points may form continua and are not enumerated;"
        " only the Dirichlet-side identity is checked"
    )


# -- the functional ----------------------------------------------------------


def default_epsilon(c: SampledCurve) -> float:
    """0.05 x minimum geodesic radius of curvature."""
    return 0.05 * float(np.min(c.radius_of_curvature_geodesic()))


def offset_curve(c: SampledCurve, eps: float) -> SampledCurve:
    out, regular = equidistant(c, eps)
    if out is None or not regular:
        raise ValueError(f"offset at eps={eps} is not regular")
    return out


def tripod_functional(c: SampledCurve, x: ConfigSpacePoint, gamma_eps: SampledCurve | None = None) -> float:
    """Sum of ambient distances from p to the three offset feet."""
    gamma_eps = gamma_eps or offset_curve(c, x.epsilon)
    feet = gamma_eps.point_at(np.asarray(x.feet_params, dtype=float))
    return float(np.sum(c.geometry.distance(feet, np.asarray(x.p, dtype=float))))


# -- interior search ---------------------------------------------------------


def _seed_states(c: SampledCurve, gamma_eps: SampledCurve, starts: int):
    feet_grid = np.linspace(0.0, c.period, starts, endpoint=False)
    triples = np.array(list(combinations(range(starts), 3)), dtype=int)
    feet = feet_grid[triples]

    centroid = c.centroid()
    inradius = float(np.min(c.geometry.distance(c.points, centroid)))
    p_seeds = [centroid]
    if c.geometry is SPHERE:
        e1, e2 = SPHERE.tangent_frame(centroid)
        for k in range(8):
            ang = TWO_PI * k / 8.0
            d = np.cos(ang) * e1 + np.sin(ang) * e2
            p_seeds.append(SPHERE.exp(centroid, d, 0.3 * inradius))
    else:
        for k in range(8):
            ang = TWO_PI * k / 8.0
            d = np.array([np.cos(ang), np.sin(ang)])
            p_seeds.append(c.geometry.exp(centroid, d, 0.3 * inradius))
    p_seeds = np.array(p_seeds)

    n_f, n_p = feet.shape[0], p_seeds.shape[0]
    state = np.empty((n_f * n_p, 3 + p_seeds.shape[1]))
    state[:, :3] = np.repeat(feet, n_p, axis=0)
    state[:, 3:] = np.tile(p_seeds, (n_f, 1))
    return state


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get("TRIPOD_THREADS", "1")))
    except ValueError:
        return 1


def _refine_all(table, state, **kw):
    workers = _worker_count()
    if workers == 1 or state.shape[0] < 2 * workers:
        return kernels.newton_refine(table, state, **kw)
    chunks = np.array_split(state, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda s: kernels.newton_refine(table, s, **kw), chunks))
    states = np.concatenate([p[0] for p in parts], axis=0)
    norms = np.concatenate([p[1] for p in parts], axis=0)
    return states, norms


def _canonical_feet(feet, period, tol):
    """Sorted feet with the period wrap resolved (a foot at ~period is ~0)."""
    f = np.sort(np.mod(feet, period))
    f = np.where(period - f < tol, f - period, f)
    return np.sort(f)


def _orbit_dedup(states, norms, period, scale, cap: int = 512):
    """Collapse converged states into S3 orbits (feet already sorted)."""
    tol_feet = 1e-6 * period
    tol_p = 1e-6 * max(scale, 1e-9)
    # fast exact-duplicate collapse before tolerance clustering
    uniq = {}
    for s, nrm in sorted(zip(states, norms), key=lambda x: x[1]):
        feet = _canonical_feet(s[:3], period, tol_feet)
        p = s[3:]
        key = tuple(np.round(feet, 7)) + tuple(np.round(p, 7))
        if key not in uniq:
            uniq[key] = {"feet": feet, "p": p, "norm": nrm, "count": 1}
        else:
            uniq[key]["count"] += 1
    orbits = []
    for o in uniq.values():
        matched = False
        for existing in orbits:
            df = np.abs(o["feet"] - existing["feet"])
            df = np.minimum(df, period - df)
            if np.max(df) < tol_feet and np.linalg.norm(o["p"] - existing["p"]) < tol_p:
                existing["count"] += o["count"]
                matched = True
                break
        if not matched:
            orbits.append(o)
            if len(orbits) >= cap:
                break
    return orbits


def _chart_hessian(table, feet, p, step: float = 1e-5):
    """Symmetrized Jacobian of the chart gradient, Richardson-extrapolated."""
    frame = _kp._frame(p[None]) if table.kind == _kp.SPHERE_KIND else None

    def jac(h):
        J = np.empty((5, 5))
        for j in range(5):
            d = np.zeros((1, 5))
            d[0, j] = h
            tp, pp = _kp._apply_step(table, feet[None], p[None], frame, -d)
            tm, pm = _kp._apply_step(table, feet[None], p[None], frame, d)
            J[:, j] = (
                kernels.residual(table, tp, pp)[0] - kernels.residual(table, tm, pm)[0]
            ) / (2 * h)
        return J

    J = (4.0 * jac(step / 2.0) - jac(step)) / 3.0
    return 0.5 * (J + J.T)


def _certify_interior(c: SampledCurve, gamma_eps: SampledCurve, feet, p):
    """Recertify a converged point as a tripod configuration of gamma."""
    g = c.geometry
    feet_eps = gamma_eps.point_at(feet)
    dirs = np.array([g.unit_direction(p, feet_eps[i]) for i in range(3)])
    balance = float(np.linalg.norm(dirs.sum(axis=0)))
    angles = np.array(
        [
            np.arccos(np.clip(np.sum(dirs[i] * dirs[(i + 1) % 3], axis=-1), -1, 1))
            for i in range(3)
        ]
    )
    normals = [c.normal_line_at(float(t)) for t in feet]
    conc = max(abs(float(g.line_point_distance(line, p))) for line in normals)
    cfg = TripodConfiguration(
        feet=[NormalFoot(float(t), c.point_at(float(t)), line) for t, line in zip(feet, normals)],
        tripod_point=np.asarray(p, dtype=float),
        angles=angles,
        concurrency_residual=conc,
        angle_residual=float(np.max(np.abs(angles - TWO_PI / 3.0))),
        geometry=g.kind,
        inside=c.contains(p),
    )
    return cfg, balance


@dataclass(eq=False)
class InteriorSearchResult:
    critical_points: list
    continuum: bool
    epsilon: float
    attempted: int
    converged_raw: int
    closeness: float | None = None

    @property
    def count(self) -> int:
        return len(self.critical_points)


def find_interior_critical_points(
    c: SampledCurve,
    eps: float | None = None,
    starts: int = 24,
    balance_tol: float = 1e-8,
    conc_tol: float = 1e-7,
    angle_tol: float = 1e-8,
) -> InteriorSearchResult:
    """Multi-start Newton search for interior critical points.

    Feet are seeded at ``starts`` equally spaced parameters (ordered
    triples), p at the centroid plus 8 interior offsets.  Converged
    states are merged into S3 orbits, each orbit recertified as a tripod
    configuration (unit-direction balance, concurrency against the
    normal geodesics of gamma, angles 2*pi/3) and classified by the
    eigenvalues of the chart Hessian.  A near-singular Hessian on most
    orbits flags a continuum (metric circles).
    """
    eps = float(eps) if eps is not None else default_epsilon(c)
    gamma_eps = offset_curve(c, eps)
    table = kernels.table_from_curve(gamma_eps)
    state = _seed_states(c, gamma_eps, starts)
    attempted = state.shape[0]
    states, norms = _refine_all(table, state, tol=GRAD_TOL)

    diameter = c.diameter()
    orbits = _orbit_dedup(states, norms, c.period, diameter)

    # a continuum (metric circle) floods the orbit list; sample instead of
    # classifying thousands of rotated copies of the same family
    sampled_continuum = False
    if len(orbits) > 48:
        sample = orbits[:: max(1, len(orbits) // 16)][:16]
        n_deg = 0
        for o in sample:
            eig = np.linalg.eigvalsh(_chart_hessian(table, o["feet"], o["p"]))
            n_deg += bool(np.min(np.abs(eig)) < DEGENERATE_EIG_TOL)
        if n_deg >= 0.75 * len(sample):
            orbits = sample
            sampled_continuum = True

    critical = []
    degenerate_orbits = 0
    for o in orbits:
        feet, p = o["feet"], o["p"]
        if not c.contains(p):
            continue
        if float(np.min(c.geometry.distance(c.points, p))) < 1e-9:
            continue  # p must lie strictly inside gamma
        cfg, balance = _certify_interior(c, gamma_eps, feet, p)
        if balance > balance_tol or cfg.concurrency_residual > conc_tol * diameter:
            continue
        if cfg.angle_residual > angle_tol:
            continue
        H = _chart_hessian(table, feet, p)
        eig = np.linalg.eigvalsh(H)
        degenerate = bool(np.min(np.abs(eig)) < DEGENERATE_EIG_TOL)
        degenerate_orbits += degenerate
        distinct = len({round(float(x), 9) for x in feet})
        orbit_size = {3: 6, 2: 3, 1: 1}[distinct]
        critical.append(
            CriticalPoint(
                location=ConfigSpacePoint(feet, p, c.geometry.kind, eps),
                kind="interior",
                morse_index=int(np.sum(eig < 0.0)),
                gradient_norm=float(o["norm"]),
                hessian_eigenvalues=eig,
                degenerate=degenerate,
                configuration=cfg,
                orbit_size=orbit_size,
            )
        )

    continuum = sampled_continuum or (
        len(critical) >= 4 and degenerate_orbits >= 0.9 * len(critical)
    )
    try:
        closeness = closeness_score(c)
    except Exception:
        closeness = None
    return InteriorSearchResult(
        critical_points=critical,
        continuum=continuum,
        epsilon=eps,
        attempted=attempted,
        converged_raw=len(states),
        closeness=closeness,
    )


# -- diameters ---------------------------------------------------------------


def _pair_gradient(c: SampledCurve, s, t):
    """(d rho / ds, d rho / dt) for the two-point distance on the curve."""
    g = c.geometry
    a = c.point_at(s)
    b = c.point_at(t)
    ua = g.unit_direction(a, b)  # at a toward b
    ub = g.unit_direction(b, a)
    va = c.velocity_at(s)
    vb = c.velocity_at(t)
    if g.kind == "hyperbolic_disk":
        la = 2.0 / (1.0 - np.sum(a * a, axis=-1))
        lb = 2.0 / (1.0 - np.sum(b * b, axis=-1))
    else:
        la = lb = 1.0
    return (-la * np.sum(ua * va, axis=-1), -lb * np.sum(ub * vb, axis=-1))


def find_diameters(c: SampledCurve, grid: int = 512):
    """Double normals of a simple closed convex curve.

    Critical points of (s, t) -> rho(gamma(s), gamma(t)) are located by
    sign-change cells of both partial derivatives on a grid, polished by
    2x2 Newton, certified doubly orthogonal, and oriented by the signed
    offset of the two curvature centers along the chord geodesic.
    Returns (diameters, continuum_flag).
    """
    L = c.period
    ss = np.linspace(0.0, L, grid, endpoint=False)
    S, T = np.meshgrid(ss, ss, indexing="ij")
    mask = np.minimum(np.abs(S - T), L - np.abs(S - T)) > L / 16.0
    F1 = np.zeros_like(S)
    F2 = np.zeros_like(S)
    f1, f2 = _pair_gradient(c, S[mask], T[mask])
    F1[mask], F2[mask] = f1, f2

    rho_anti = c.geometry.distance(c.point_at(ss), c.point_at(ss + L / 2.0))
    f1a, f2a = _pair_gradient(c, ss, ss + L / 2.0)
    if (
        float(np.std(rho_anti)) < 1e-10
        and float(np.max(np.abs(f1a))) < 1e-8
        and float(np.max(np.abs(f2a))) < 1e-8
    ):
        return [], True  # metric circle: the whole antipodal family is critical

    def corners(a):
        return np.stack([a, np.roll(a, -1, 0), np.roll(a, -1, 1), np.roll(np.roll(a, -1, 0), -1, 1)])

    m4 = np.all(corners(mask), axis=0)
    q1 = corners(F1)
    q2 = corners(F2)
    cand = m4 & (q1.min(0) < 0) & (q1.max(0) > 0) & (q2.min(0) < 0) & (q2.max(0) > 0)
    cells = [
        (ss[i] + L / (2 * grid), ss[j] + L / (2 * grid)) for i, j in np.argwhere(cand)
    ]

    found = []
    for s0, t0 in cells:
        st = np.array([s0, t0])
        ok = False
        for _ in range(60):
            f = np.array(_pair_gradient(c, st[0], st[1]), dtype=float)
            if np.max(np.abs(f)) < 1e-13:
                ok = True
                break
            h = 1e-6
            J = np.empty((2, 2))
            for k in range(2):
                d = np.zeros(2)
                d[k] = h
                fp = np.array(_pair_gradient(c, *(st + d)), dtype=float)
                fm = np.array(_pair_gradient(c, *(st - d)), dtype=float)
                J[:, k] = (fp - fm) / (2 * h)
            try:
                step = np.linalg.solve(J, f)
            except np.linalg.LinAlgError:
                break
            st = st - step
            if not np.all(np.isfinite(st)):
                break
        if not ok:
            continue
        s, t = float(np.mod(st[0], L)), float(np.mod(st[1], L))
        if min(abs(s - t), L - abs(s - t)) < L / 64.0:
            continue
        if s > t:
            s, t = t, s

        def circ(a, b):
            d = abs(a - b) % L
            return min(d, L - d)

        if any(
            max(circ(s, d[0]), circ(t, d[1])) < 1e-6 or max(circ(s, d[1]), circ(t, d[0])) < 1e-6
            for d in found
        ):
            continue
        found.append((s, t))

    out = []
    for s, t in found:
        d = _build_diameter(c, s, t)
        if d is not None:
            out.append(d)
    return out, False


def _build_diameter(c: SampledCurve, s: float, t: float):
    g = c.geometry
    a, b = c.point_at(s), c.point_at(t)
    ua = g.unit_direction(a, b)
    ub = g.unit_direction(b, a)
    resid = max(
        abs(float(np.sum(ua * c.tangent_at(s)))), abs(float(np.sum(ub * c.tangent_at(t))))
    )
    if resid > 1e-9:
        return None
    ca = curvature_center_at(c, s)
    cb = curvature_center_at(c, t)
    line = g.line(a, ua)
    pos_ca = float(g.line_coordinate(line, ca))
    pos_cb = float(g.line_coordinate(line, cb))
    offset = pos_cb - pos_ca
    return Diameter(
        s=s,
        t=t,
        a=a,
        b=b,
        length=float(g.distance(a, b)),
        orientation_sign=int(np.sign(offset)) or 1,
        center_a=ca,
        center_b=cb,
        center_offset=offset,
        orthogonality_residual=resid,
    )


# -- boundary critical points -------------------------------------------------


def classify_boundary_critical(
    c: SampledCurve,
    eps: float,
    diameter: Diameter,
    case: int,
    side: int = 1,
    step: float = 1e-4,
) -> CriticalPoint:
    """Morse data of the Dirichlet boundary point built on a diameter.

    ``side=+1`` puts p at the diameter endpoint a, ``side=-1`` at b.
    Case 1 places all three feet on the offset curve beyond the far
    endpoint; case 2 keeps one foot directly behind p.  The Hessian of
    the boundary-restricted functional (p constrained to gamma) is
    computed by central differences at the given step with one Richardson
    level; the Morse index is its count of negative eigenvalues.
    """
    if case not in (1, 2):
        raise ValueError("case must be 1 or 2")
    gamma_eps = offset_curve(c, eps)
    g = c.geometry
    near, far = (diameter.s, diameter.t) if side >= 0 else (diameter.t, diameter.s)
    if case == 1:
        x0 = np.array([near, far, far, far])
    else:
        x0 = np.array([near, near, far, far])

    def h(x):
        p = c.point_at(x[0])
        feet = gamma_eps.point_at(np.asarray(x[1:]))
        return float(np.sum(g.distance(feet, p)))

    # type check: the p-gradient must point outward along gamma (type D)
    p0 = c.point_at(x0[0])
    feet0 = gamma_eps.point_at(x0[1:])
    grad_p = sum(-g.unit_direction(p0, feet0[i]) for i in range(3))
    outward = float(np.sum(grad_p * c.normal_at(x0[0])))
    kind = "type_D" if outward > 0 else "type_N"

    def hessian(hh):
        H = np.empty((4, 4))
        f0 = h(x0)
        for i in range(4):
            ei = np.zeros(4)
            ei[i] = hh
            H[i, i] = (h(x0 + ei) - 2 * f0 + h(x0 - ei)) / hh**2
        for i in range(4):
            for j in range(i + 1, 4):
                ei = np.zeros(4)
                ej = np.zeros(4)
                ei[i] = hh
                ej[j] = hh
                H[i, j] = H[j, i] = (
                    h(x0 + ei + ej) - h(x0 + ei - ej) - h(x0 - ei + ej) + h(x0 - ei - ej)
                ) / (4 * hh**2)
        return H

    H = (4.0 * hessian(step / 2.0) - hessian(step)) / 3.0
    eig = np.linalg.eigvalsh(0.5 * (H + H.T))
    degenerate = bool(np.min(np.abs(eig)) < DEGENERATE_EIG_TOL)
    return CriticalPoint(
        location=ConfigSpacePoint(x0[1:].copy(), c.point_at(x0[0]), g.kind, eps),
        kind=kind,
        morse_index=int(np.sum(eig < 0.0)),
        gradient_norm=0.0,
        hessian_eigenvalues=eig,
        degenerate=degenerate,
        case=case,
        orientation=diameter.orientation_sign,
    )


# -- bookkeeping ---------------------------------------------------------------


def morse_bookkeeping(interior, diameters, continuum: bool = False) -> MorsePolynomials:
    """Assemble the boundary Morse polynomial and check the (1+T) identity.

    M(T) = C(T) + n(2T^4 + 6T^3) + n(2T^5 + 6T^4) with n = diameters/2;
    the quotient (M(T) - T^2 (1+T)^3) / (1 + T) must exist and have
    nonnegative integer coefficients, otherwise the critical-point
    search missed something.  Also reports whether C(T) has two positive
    coefficients of distinct degree (the existence mechanism for two
    tripod configurations).
    """
    if continuum:
        return MorsePolynomials(
            c_poly=[], d_poly=[], morse_poly=[], skipped="continuum (metric circle)"
        )
    n_pos = sum(1 for d in diameters if d.orientation_sign > 0)
    n_neg = sum(1 for d in diameters if d.orientation_sign < 0)
    result = MorsePolynomials(c_poly=[], d_poly=[], morse_poly=[], n_pairs=min(n_pos, n_neg))
    if n_pos != n_neg:
        result.skipped = f"unpaired diameter orientations ({n_pos} positive, {n_neg} negative)"
        return result
    n = n_pos

    c_poly = []
    for cp in interior:
        k = cp.morse_index
        if len(c_poly) <= k:
            c_poly += [0] * (k + 1 - len(c_poly))
        c_poly[k] += getattr(cp, "orbit_size", 1)
    c_poly = poly_trim(c_poly)

    d_poly = poly_add([0, 0, 0, 6 * n, 2 * n], [0, 0, 0, 0, 6 * n, 2 * n])
    morse_poly = poly_add(c_poly, d_poly)
    target = [0, 0, 1, 3, 3, 1]  # T^5 * (1 + 1/T)^3
    quotient, remainder = poly_divmod_one_plus_t(poly_sub(morse_poly, target))

    result.c_poly = c_poly
    result.d_poly = d_poly
    result.morse_poly = morse_poly
    result.quotient = quotient
    result.remainder = remainder
    result.divisible = remainder == 0
    result.nonnegative = result.divisible and all(x >= 0 for x in quotient)
    positives = [k for k, v in enumerate(c_poly) if v > 0]
    result.c_two_positive_degrees = len(positives) >= 2
    result.passed = result.divisible and result.nonnegative
    return result
