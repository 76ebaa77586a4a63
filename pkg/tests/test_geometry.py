import numpy as np
import pytest

from tripods.geometry import (
    EUCLIDEAN,
    HYPERBOLIC,
    SPHERE,
    CoincidentPointsError,
    DomainError,
    IllConditionedError,
    circle_through_chord,
    intersect_lines,
)

GEOMS = (EUCLIDEAN, SPHERE, HYPERBOLIC)


def random_points(g, rng, n):
    if g is EUCLIDEAN:
        return rng.uniform(-3, 3, size=(n, 2))
    if g is HYPERBOLIC:
        r = 0.97 * np.sqrt(rng.uniform(0, 1, n))
        t = rng.uniform(0, 2 * np.pi, n)
        return np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)
    # sphere: polar angle bounded away from the equator
    theta = rng.uniform(0, np.pi / 2 - 2e-3, n)
    phi = rng.uniform(0, 2 * np.pi, n)
    return np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
    )


def test_distance_examples():
    assert EUCLIDEAN.distance(np.array([0.0, 0.0]), np.array([3.0, 4.0])) == pytest.approx(5.0)
    z = np.array([0.0, 0.0])
    assert HYPERBOLIC.distance(z, z) == 0.0
    # closed form: arccosh(1 + 2*0.25/(1*0.75)) = ln 3
    d = HYPERBOLIC.distance(z, np.array([0.5, 0.0]))
    assert d == pytest.approx(np.arccosh(1 + 2 * 0.25 / 0.75), abs=1e-14)
    assert d == pytest.approx(1.0986122886681098, abs=1e-12)


def test_hyperbolic_distance_vs_geodesic_integration():
    # numerical arc-length along the chart segment with the conformal factor
    x = np.array([-0.21, 0.33])
    y = np.array([0.52, 0.1])
    # the segment is not the geodesic, so integrate along the true geodesic
    d = HYPERBOLIC.distance(x, y)
    u = HYPERBOLIC.unit_direction(x, y)
    line = HYPERBOLIC.line(x, u)
    s = np.linspace(0, d, 20001)
    pts = line.point_at(s)
    seg = np.diff(pts, axis=0)
    mid = 0.5 * (pts[1:] + pts[:-1])
    lam = 2.0 / (1.0 - np.sum(mid * mid, axis=-1))
    length = np.sum(lam * np.linalg.norm(seg, axis=-1))
    assert length == pytest.approx(d, abs=1e-8)
    assert HYPERBOLIC.distance(y, line.point_at(np.float64(d))) < 1e-14  # endpoint check


def test_distance_symmetry_and_triangle_inequality(rng):
    for g in GEOMS:
        pts = random_points(g, rng, 3 * 10_000).reshape(3, 10_000, -1)
        a, b, c = pts
        dab = g.distance(a, b)
        assert np.allclose(dab, g.distance(b, a), atol=1e-12)
        assert np.all(dab >= 0)
        viol = dab + g.distance(b, c) - g.distance(a, c)
        tol = 1e-9 if g is HYPERBOLIC else 1e-12
        assert np.min(viol) > -tol


def test_distance_zero_iff_equal(rng):
    for g in GEOMS:
        p = random_points(g, rng, 5)
        assert np.all(g.distance(p, p) < 1e-15)
        q = random_points(g, rng, 5)
        far = g.distance(p, q) > 1e-9
        same = np.linalg.norm(p - q, axis=-1) < 1e-12
        assert np.all(far | same)


def test_unit_direction_examples():
    assert np.allclose(
        EUCLIDEAN.unit_direction(np.array([0.0, 0.0]), np.array([1.0, 0.0])), [1, 0]
    )
    # sphere pole toward a point on the x-z meridian: tangent along x
    pole = np.array([0.0, 0.0, 1.0])
    target = np.array([np.sin(0.4), 0.0, np.cos(0.4)])
    assert np.allclose(SPHERE.unit_direction(pole, target), [1, 0, 0], atol=1e-14)
    # disk-model direction along the positive x-axis
    assert np.allclose(
        HYPERBOLIC.unit_direction(np.array([0.3, 0.0]), np.array([0.7, 0.0])), [1, 0]
    )
    with pytest.raises(CoincidentPointsError):
        EUCLIDEAN.unit_direction(np.array([1.0, 1.0]), np.array([1.0, 1.0]))


def test_unit_direction_matches_finite_differences(rng):
    # unit_direction == -grad distance (chart gradient / conformal factor)
    h = 1e-6
    for g in GEOMS:
        for _ in range(40):
            x, y = random_points(g, rng, 2)
            if g.distance(x, y) < 1e-2:
                continue
            u = g.unit_direction(x, y)
            if g is SPHERE:
                e1, e2 = g.tangent_frame(x)
                grad = np.zeros(2)
                for i, e in enumerate((e1, e2)):
                    xp = x + h * e
                    xm = x - h * e
                    xp /= np.linalg.norm(xp)
                    xm /= np.linalg.norm(xm)
                    grad[i] = (g.distance(xp, y) - g.distance(xm, y)) / (2 * h)
                u = np.array([u @ e1, u @ e2])
            else:
                grad = np.zeros(2)
                for i in range(2):
                    e = np.zeros(2)
                    e[i] = h
                    grad[i] = (g.distance(x + e, y) - g.distance(x - e, y)) / (2 * h)
                if g is HYPERBOLIC:
                    grad /= 2.0 / (1.0 - x @ x)
            assert np.linalg.norm(u + grad) < 1e-5 * max(1.0, np.linalg.norm(grad))


def test_exp_reproduces_distance(rng):
    for g in GEOMS:
        for _ in range(25):
            x, y = random_points(g, rng, 2)
            if g.distance(x, y) < 1e-3:
                continue
            u = g.unit_direction(x, y)
            s = rng.uniform(0.05, 0.9)
            p = g.exp(x, u, s)
            assert abs(g.distance(x, p) - s) < 1e-12
    # geodesic from x toward y of length d(x, y) arrives at y
    for g in GEOMS:
        x, y = random_points(g, rng, 2)
        d = g.distance(x, y)
        u = g.unit_direction(x, y)
        assert g.distance(g.exp(x, u, np.float64(d)), y) < 1e-10


def test_angle_examples():
    p = np.array([0.0, 0.0])
    assert EUCLIDEAN.angle_between(p, np.array([1.0, 0.0]), np.array([0.0, 1.0])) == pytest.approx(
        np.pi / 2
    )
    a = np.array([0.3, 0.4])
    for g in (EUCLIDEAN, HYPERBOLIC):
        assert g.angle_between(np.array([0.01, 0.02]), a, a) == pytest.approx(0.0, abs=1e-9)
    # diameters of the disk meet the origin at the chart angle
    assert HYPERBOLIC.angle_between(
        p, np.array([0.5, 0.0]), np.array([-0.5, 0.0])
    ) == pytest.approx(np.pi)


def test_angle_additivity(rng):
    # angle(a, b) + angle(b, c) == angle(a, c) when b lies between a and c
    for g in GEOMS:
        for _ in range(30):
            (p,) = random_points(g, rng, 1)
            targets = random_points(g, rng, 2)
            if min(g.distance(p, t) for t in targets) < 5e-2:
                continue
            u1 = g.unit_direction(p, targets[0])
            u3 = g.unit_direction(p, targets[1])
            full = g.angle_between(p, targets[0], targets[1])
            if full < 0.1 or full > np.pi - 0.1:
                continue
            # a direction strictly between the two
            w = u1 + u3
            w /= np.linalg.norm(w)
            mid = g.exp(p, w, min(0.1, 0.5 * g.distance(p, targets[0])))
            a1 = g.angle_between(p, targets[0], mid)
            a2 = g.angle_between(p, mid, targets[1])
            assert abs(a1 + a2 - full) < 1e-10


def test_domain_checks():
    with pytest.raises(DomainError):
        HYPERBOLIC.domain_check(np.array([1.0, 0.2]))
    with pytest.raises(DomainError):
        SPHERE.domain_check(np.array([1.0, 0.0, 0.0]))  # on the equator
    SPHERE.domain_check(np.array([0.0, 0.0, 1.0]))


def test_intersect_lines_euclidean():
    x_axis = EUCLIDEAN.line(np.array([0.0, 0.0]), np.array([1.0, 0.0]))
    y_axis = EUCLIDEAN.line(np.array([0.0, 0.0]), np.array([0.0, 1.0]))
    assert np.allclose(intersect_lines(x_axis, y_axis), [0, 0])
    l1 = EUCLIDEAN.line(np.array([0.0, 0.0]), np.array([1.0, 0.0]))
    l2 = EUCLIDEAN.line(np.array([0.0, 1.0]), np.array([1.0, 0.0]))
    assert intersect_lines(l1, l2) is None
    l3 = EUCLIDEAN.line(np.array([0.0, 1.0]), np.array([1.0, 1e-12]))
    with pytest.raises(IllConditionedError):
        intersect_lines(l1, l3)


def test_intersect_lines_non_euclidean():
    # two disk diameters at angle pi/3 meet at the origin
    l1 = HYPERBOLIC.line(np.array([0.4, 0.0]), np.array([1.0, 0.0]))
    d = np.array([np.cos(np.pi / 3), np.sin(np.pi / 3)])
    l2 = HYPERBOLIC.line(0.3 * d, d)
    p = intersect_lines(l1, l2)
    assert np.linalg.norm(p) < 1e-10
    # two meridians meet at the pole
    m1 = SPHERE.line(np.array([np.sin(0.3), 0.0, np.cos(0.3)]), np.array([-1.0, 0.0, 0.0]))
    v = np.array([-np.cos(1.0), -np.sin(1.0), 0.0])
    b2 = np.array([np.sin(0.4) * np.cos(1.0), np.sin(0.4) * np.sin(1.0), np.cos(0.4)])
    m2 = SPHERE.line(b2, v)
    p = intersect_lines(m1, m2)
    assert SPHERE.distance(p, np.array([0.0, 0.0, 1.0])) < 1e-9
    # ultraparallel disk geodesics do not meet
    g1 = HYPERBOLIC.line(np.array([0.0, 0.9]), np.array([1.0, 0.0]))
    g2 = HYPERBOLIC.line(np.array([0.0, -0.9]), np.array([1.0, 0.0]))
    assert intersect_lines(g1, g2) is None


def test_circle_through_chord_examples():
    a = np.array([-1.0, 0.0])
    b = np.array([1.0, 0.0])
    center, radius = circle_through_chord(a, b, 2 * np.pi / 3, +1)
    assert np.allclose(center, [0.0, 1.0 / np.sqrt(3)], atol=1e-14)
    assert radius == pytest.approx(2.0 / np.sqrt(3), abs=1e-14)
    # Thales: arc pi puts the center at the midpoint
    center, radius = circle_through_chord(a, b, np.pi, +1)
    assert np.allclose(center, [0, 0], atol=1e-14)
    assert radius == pytest.approx(1.0)
    # mirror symmetry across the chord
    a2 = np.array([0.0, 0.0])
    b2 = np.array([0.0, 2.0])
    cp, rp = circle_through_chord(a2, b2, 2 * np.pi / 3, +1)
    cm, rm = circle_through_chord(a2, b2, 2 * np.pi / 3, -1)
    assert rp == pytest.approx(rm)
    assert np.allclose(cp * [-1, 1], cm, atol=1e-14)


def test_circle_through_chord_inscribed_angle(rng):
    # endpoints lie on the circle; points of the complementary arc see the
    # chord under arc/2 (inscribed-angle certificate, 100 sampled points)
    for _ in range(20):
        a, b = rng.uniform(-2, 2, size=(2, 2))
        if np.linalg.norm(a - b) < 0.1:
            continue
        arc = rng.uniform(0.2, 2 * np.pi - 0.2)
        side = int(rng.choice([-1, 1]))
        center, radius = circle_through_chord(a, b, arc, side)
        assert abs(np.linalg.norm(a - center) - radius) < 1e-12
        assert abs(np.linalg.norm(b - center) - radius) < 1e-12
        pa = np.arctan2(a[1] - center[1], a[0] - center[0])
        pb = np.arctan2(b[1] - center[1], b[0] - center[0])
        # walk the complementary arc from a to b and check the viewing angle
        sweep = (pb - pa) % (2 * np.pi)
        if not np.isclose(sweep, 2 * np.pi - arc, atol=1e-9):
            pa, pb = pb, pa
            sweep = (pb - pa) % (2 * np.pi)
        assert np.isclose(sweep, 2 * np.pi - arc, atol=1e-9)
        ts = pa + sweep * np.linspace(0.01, 0.99, 100)
        pts = center + radius * np.stack([np.cos(ts), np.sin(ts)], axis=-1)
        u = a - pts
        w = b - pts
        cosang = np.sum(u * w, axis=-1) / (
            np.linalg.norm(u, axis=-1) * np.linalg.norm(w, axis=-1)
        )
        ang = np.arccos(np.clip(cosang, -1, 1))
        assert np.max(np.abs(ang - arc / 2)) < 1e-10
