"""Pure-numpy backend for the tripod-functional search kernels.

The tripod functional f(t, u, v, p) = sum_i rho(e(t_i), p) is driven to
a critical point by Newton iteration on its chart gradient

    F = (df/dt, df/du, df/dv, grad_p f)   in R^5,

with the curve e = gamma_eps given as a truncated trigonometric series.
This backend advances all seeds simultaneously (batched linear algebra,
masked damping); the compiled backend in ``_seeds.pyx`` implements the
identical semantics seed by seed.  Both must stay interchangeable: the
driver treats them as black boxes returning the same converged sets.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

EUCLIDEAN_KIND = 0
SPHERE_KIND = 1
HYPERBOLIC_KIND = 2

_SPHERE_Z_MIN = np.sin(1e-3)
_DISK_MAX = 0.97


@dataclass(eq=False)
class CurveTable:
    """Trig-series data of the offset curve, shared by both backends."""

    kind: int
    a0: np.ndarray      # (dim,)
    cos: np.ndarray     # (K, dim)
    sin: np.ndarray     # (K, dim)
    omega: float        # 2*pi / period
    period: float

    @property
    def dim(self) -> int:
        return self.a0.size

    @property
    def state_size(self) -> int:
        return 3 + self.dim


def table_from_curve(curve) -> CurveTable:
    from .geometry import EUCLIDEAN, SPHERE

    interp = curve._interp
    kind = EUCLIDEAN_KIND
    if curve.geometry is SPHERE:
        kind = SPHERE_KIND
    elif curve.geometry is not EUCLIDEAN:
        kind = HYPERBOLIC_KIND
    return CurveTable(
        kind=kind,
        a0=np.atleast_1d(np.asarray(interp.a0, dtype=float)).copy(),
        cos=np.atleast_2d(np.asarray(interp.cos_coeffs, dtype=float)).copy(),
        sin=np.atleast_2d(np.asarray(interp.sin_coeffs, dtype=float)).copy(),
        omega=float(interp.omega),
        period=float(interp.period),
    )


def eval_curve(table: CurveTable, t):
    """Points and chart velocities of the offset curve at parameters t."""
    t = np.asarray(t, dtype=float)
    k = np.arange(1, table.cos.shape[0] + 1, dtype=float)
    theta = np.multiply.outer(t, k) * table.omega
    ct, st = np.cos(theta), np.sin(theta)
    pts = ct @ table.cos + st @ table.sin + table.a0
    w = k * table.omega
    vel = (-st * w) @ table.cos + (ct * w) @ table.sin
    if table.kind == SPHERE_KIND:
        nrm = np.linalg.norm(pts, axis=-1, keepdims=True)
        pts = pts / nrm
        vel = (vel - np.sum(vel * pts, axis=-1, keepdims=True) * pts) / nrm
    return pts, vel


def _frame(p):
    """Orthonormal tangent frame at unit vectors p (sphere only)."""
    ref = np.zeros_like(p)
    use_z = np.abs(p[..., 2]) < 0.9
    ref[..., 2] = np.where(use_z, 1.0, 0.0)
    ref[..., 0] = np.where(use_z, 0.0, 1.0)
    e1 = np.cross(ref, p)
    e1 /= np.linalg.norm(e1, axis=-1, keepdims=True)
    e2 = np.cross(p, e1)
    return e1, e2


def residual(table: CurveTable, tuv, p, frame=None):
    """Chart gradient of the tripod functional; (N, 5) for (N,) seed blocks."""
    tuv = np.asarray(tuv, dtype=float)
    p = np.asarray(p, dtype=float)
    n = tuv.shape[0]
    F = np.empty((n, 5))
    if table.kind == EUCLIDEAN_KIND:
        gp = np.zeros((n, 2))
        for i in range(3):
            e, v = eval_curve(table, tuv[:, i])
            diff = p - e
            r = np.linalg.norm(diff, axis=-1)
            F[:, i] = -np.sum(diff * v, axis=-1) / r
            gp += diff / r[:, None]
        F[:, 3:] = gp
    elif table.kind == SPHERE_KIND:
        if frame is None:
            frame = _frame(p)
        e1, e2 = frame
        gp = np.zeros((n, 3))
        for i in range(3):
            e, v = eval_curve(table, tuv[:, i])
            c = np.sum(e * p, axis=-1)
            s = np.sqrt(np.maximum(1.0 - c * c, 1e-300))
            F[:, i] = -np.sum(p * v, axis=-1) / s
            gp -= (e - c[:, None] * p) / s[:, None]
        F[:, 3] = np.sum(gp * e1, axis=-1)
        F[:, 4] = np.sum(gp * e2, axis=-1)
    else:
        w = p[:, 0] + 1j * p[:, 1]
        lam_p = 2.0 / (1.0 - np.abs(w) ** 2)
        gp = np.zeros(n, dtype=complex)
        for i in range(3):
            e, v = eval_curve(table, tuv[:, i])
            z = e[:, 0] + 1j * e[:, 1]
            vz = v[:, 0] + 1j * v[:, 1]
            u_pz = (z - w) / (1.0 - np.conj(w) * z)
            u_pz /= np.abs(u_pz)
            u_zp = (w - z) / (1.0 - np.conj(z) * w)
            u_zp /= np.abs(u_zp)
            lam_z = 2.0 / (1.0 - np.abs(z) ** 2)
            F[:, i] = -lam_z * (u_zp.conj() * vz).real
            gp -= lam_p * u_pz
        F[:, 3] = gp.real
        F[:, 4] = gp.imag
    return F


def _alive(table: CurveTable, tuv, p):
    ok = np.all(np.isfinite(tuv), axis=-1) & np.all(np.isfinite(p), axis=-1)
    if table.kind == SPHERE_KIND:
        ok &= p[:, 2] > _SPHERE_Z_MIN
    elif table.kind == HYPERBOLIC_KIND:
        ok &= np.linalg.norm(p, axis=-1) < _DISK_MAX
    return ok


def _apply_step(table, tuv, p, frame, delta):
    tuv2 = tuv - delta[:, :3]
    if table.kind == SPHERE_KIND:
        e1, e2 = frame
        p2 = p - delta[:, 3:4] * e1 - delta[:, 4:5] * e2
        p2 /= np.linalg.norm(p2, axis=-1, keepdims=True)
    else:
        p2 = p - delta[:, 3:]
    return tuv2, p2


def newton_refine(
    table: CurveTable,
    state,
    tol: float = 1e-12,
    max_iter: int = 60,
    fd_step: float = 1e-6,
    consolidate_every: int = 8,
):
    """Newton iteration on the chart gradient for a batch of seeds.

    Returns (states, grad_norms) of the converged seeds only, with feet
    parameters sorted modulo the period.  Seeds that leave the working
    domain or hit a singular Jacobian are dropped.  Identical
    trajectories are merged periodically; this only prunes duplicates
    and cannot change the converged set.
    """
    state = np.array(state, dtype=float)
    n = state.shape[0]
    tuv = state[:, :3].copy()
    p = state[:, 3:].copy()
    converged = np.zeros(n, dtype=bool)
    alive = _alive(table, tuv, p)
    tuv, p = tuv[alive], p[alive]

    for it in range(max_iter):
        if tuv.shape[0] == 0:
            break
        frame = _frame(p) if table.kind == SPHERE_KIND else None
        F = residual(table, tuv, p, frame)
        fnorm = np.max(np.abs(F), axis=-1)
        done = fnorm < tol
        if it == max_iter - 1 or np.all(done):
            break

        m = tuv.shape[0]
        J = np.empty((m, 5, 5))
        for j in range(5):
            delta = np.zeros((m, 5))
            delta[:, j] = fd_step
            tp, pp = _apply_step(table, tuv, p, frame, -delta)
            tm, pm = _apply_step(table, tuv, p, frame, delta)
            J[:, :, j] = (residual(table, tp, pp, frame) - residual(table, tm, pm, frame)) / (
                2 * fd_step
            )

        delta = np.full((m, 5), np.nan)
        ok = np.zeros(m, dtype=bool)
        with np.errstate(all="ignore"):
            try:
                delta = np.linalg.solve(J, F[..., None])[..., 0]
                ok = np.all(np.isfinite(delta), axis=-1)
            except np.linalg.LinAlgError:
                for i in range(m):
                    try:
                        delta[i] = np.linalg.solve(J[i], F[i])
                        ok[i] = np.all(np.isfinite(delta[i]))
                    except np.linalg.LinAlgError:
                        ok[i] = False
        ok |= done  # keep converged rows regardless of their Jacobian
        delta[done] = 0.0

        # damped update: halve the step (twice at most) where |F| worsens
        scale = np.ones(m)
        tuv_new, p_new = _apply_step(table, tuv, p, frame, delta)
        with np.errstate(all="ignore"):
            f_new = np.where(
                _alive(table, tuv_new, p_new),
                np.max(np.abs(residual(table, tuv_new, p_new, frame)), axis=-1),
                np.inf,
            )
        for _ in range(2):
            worse = (f_new > fnorm) & ~done
            if not np.any(worse):
                break
            scale[worse] *= 0.5
            tuv_try, p_try = _apply_step(table, tuv, p, frame, delta * scale[:, None])
            with np.errstate(all="ignore"):
                f_try = np.where(
                    _alive(table, tuv_try, p_try),
                    np.max(np.abs(residual(table, tuv_try, p_try, frame)), axis=-1),
                    np.inf,
                )
            tuv_new = np.where(worse[:, None], tuv_try, tuv_new)
            p_new = np.where(worse[:, None], p_try, p_new)
            f_new = np.where(worse, f_try, f_new)
        still = ok & (np.isfinite(f_new) | done)
        tuv = np.where(done[:, None], tuv, tuv_new)[still]
        p = np.where(done[:, None], p, p_new)[still]

        if consolidate_every and (it + 1) % consolidate_every == 0 and tuv.shape[0] > 64:
            tuv = np.sort(np.mod(tuv, table.period), axis=-1)
            key = np.round(np.concatenate([tuv, p], axis=-1), 9)
            _, idx = np.unique(key, axis=0, return_index=True)
            idx = np.sort(idx)
            tuv, p = tuv[idx], p[idx]

    if tuv.shape[0] == 0:
        return np.empty((0, state.shape[1])), np.empty(0)
    frame = _frame(p) if table.kind == SPHERE_KIND else None
    F = residual(table, tuv, p, frame)
    fnorm = np.max(np.abs(F), axis=-1)
    keep = fnorm < tol
    out = np.concatenate([np.sort(np.mod(tuv[keep], table.period), axis=-1), p[keep]], axis=-1)
    return out, fnorm[keep]


BACKEND_NAME = "python"
