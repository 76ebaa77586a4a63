import numpy as np
import pytest

from tripods.curves import SampledCurve, SupportCurve, parametric_curve


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_convex_support(rng, n: int = 1, max_k: int = 6, perturbation: float = 0.15) -> SupportCurve:
    """Random convex support curve with bounded perturbation.

    Coefficients are rescaled so that sum |c_k| <= perturbation and the
    curvature bound sum |c_k| (1 + (k/n)^2) stays below 0.8, keeping
    q + q'' uniformly positive.
    """
    k = rng.integers(1, max_k + 1)
    a = rng.normal(size=k)
    b = rng.normal(size=k)
    amp = np.hypot(a, b)
    freq = (np.arange(1, k + 1) / n) ** 2 + 1.0
    scale = min(
        perturbation / max(amp.sum(), 1e-12),
        0.8 / max((amp * freq).sum(), 1e-12),
    )
    return SupportCurve(n, 1.0, a * scale, b * scale)


def random_nonconvex_curve(rng, n_samples: int = 4096) -> SampledCurve:
    """Random smooth closed non-convex (possibly self-intersecting) curve."""
    while True:
        style = rng.integers(0, 2)
        t = np.linspace(0.0, 2 * np.pi, n_samples, endpoint=False)
        if style == 0:
            # limacon-style immersed loop with an inner loop
            c = rng.uniform(0.35, 0.8)
            phase = rng.uniform(0.0, 2 * np.pi)
            r = np.cos(t + phase) + c
            pts = np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)
        else:
            # star-like radial wiggle deep enough to lose convexity
            k = int(rng.integers(3, 6))
            a = rng.uniform(0.25, 0.45)
            phase = rng.uniform(0.0, 2 * np.pi)
            r = 1.0 + a * np.cos(k * t + phase)
            pts = np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)
        curve = parametric_curve(pts)
        speed = np.linalg.norm(curve.velocity_at(curve.params), axis=-1)
        if np.min(speed) < 1e-3:
            continue
        if np.min(curve.curvature) < -1e-6 or style == 0:
            return curve


def brute_force_class_count(n: int) -> int:
    """Independent orbit count: canonicalize every admissible set under
    all 3n shifts and count distinct canonical forms."""
    m = 3 * n
    seen = set()
    for j in range(1, m, 3):
        for k in range(2, m, 3):
            best = None
            for shift in range(m):
                s = sorted(((0 + shift) % m, (j + shift) % m, (k + shift) % m))
                zero = [x for x in s if x % 3 == 0][0]
                canon = tuple(sorted((x - zero) % m for x in s))
                if best is None or canon < best:
                    best = canon
            seen.add(best)
    return len(seen)
