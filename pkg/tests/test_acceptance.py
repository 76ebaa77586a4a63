"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
report.  Tolerances are pinned here and match the certificates the
library itself enforces.
"""

import time

import numpy as np
import pytest

from conftest import brute_force_class_count, random_convex_support, random_nonconvex_curve
from tripods.curves import (
    SupportCurve,
    disk_radial_curve,
    equidistant,
    reconstruct,
    sphere_radial_curve,
)
from tripods.euclidean import (
    delta_curve_test,
    enumerate_classes,
    equidistant_invariance_check,
    find_tripods,
)
from tripods.minors import hyperbolic_minor_checks
from tripods.morse import (
    classify_boundary_critical,
    find_diameters,
    find_interior_critical_points,
    morse_bookkeeping,
)
from tripods.triple_normal import Triangle, solve_triple_normal, tau_center

TWO_PI = 2 * np.pi

INDEX_TABLE = {(1, 1): 4, (1, -1): 3, (2, 1): 3, (2, -1): 2}


def _noneuclidean_battery():
    hyp, sph = [], []
    for r0, k, rel in [
        (0.45, 2, 0.04), (0.50, 2, 0.04), (0.55, 2, 0.03), (0.60, 2, 0.05), (0.65, 2, 0.04),
        (0.45, 3, 0.03), (0.50, 3, 0.03), (0.55, 3, 0.04), (0.60, 3, 0.03), (0.50, 4, 0.02),
    ]:
        cos = [0.0] * k
        cos[k - 1] = rel * r0
        hyp.append(disk_radial_curve(r0, cos))
    for r0, k, rel in [
        (0.40, 2, 0.04), (0.45, 2, 0.04), (0.50, 2, 0.03), (0.55, 2, 0.05), (0.60, 2, 0.04),
        (0.40, 3, 0.03), (0.45, 3, 0.03), (0.50, 3, 0.04), (0.55, 3, 0.03), (0.50, 4, 0.02),
    ]:
        cos = [0.0] * k
        cos[k - 1] = rel * r0
        sph.append(sphere_radial_curve(r0, cos))
    return hyp, sph


def test_criterion_1_convex_existence(rng):
    """Every C^2 closed convex curve has at least two tripod configurations."""
    worst_time = 0.0
    n_continuum = 0
    for i in range(50):
        sc = random_convex_support(rng, n=1, max_k=6, perturbation=0.15)
        t0 = time.perf_counter()
        res = find_tripods(sc)
        worst_time = max(worst_time, time.perf_counter() - t0)
        certified = [
            c
            for c in res.configurations
            if c.concurrency_residual < 1e-7 * res.diameter and c.angle_residual < 1e-8
        ]
        assert res.continuum or len(certified) >= 2, f"curve {i}: {len(certified)} certified"
        n_continuum += res.continuum
        for c in res.configurations:
            assert c.concurrency_residual < 1e-7 * res.diameter
            assert c.angle_residual < 1e-8
    assert worst_time < 1.0
    print(
        f"\nCRITERION 1 PASS: 50/50 convex curves with >= 2 certified configurations "
        f"({n_continuum} continua), worst runtime {worst_time:.2f}s < 1s"
    )


def test_criterion_2_class_count_bound():
    """Class enumeration matches brute force; index-2/3 curves meet the bound."""
    for n in range(1, 11):
        assert len(enumerate_classes(n)) == brute_force_class_count(n), f"n={n}"

    t0 = time.perf_counter()
    res2 = find_tripods(SupportCurve(2, 1.0, [0.06, 0.0, 0.0], [0.0, 0.0, 0.04]))
    t2 = time.perf_counter() - t0
    n2 = len(res2.certified())
    assert n2 >= 4 and t2 < 5.0

    t0 = time.perf_counter()
    res3 = find_tripods(SupportCurve(3, 1.0, [0.0, 0.01, 0.0, 0.05]))
    t3 = time.perf_counter() - t0
    n3 = len(res3.certified())
    assert n3 >= 8 and t3 < 5.0
    print(
        f"\nCRITERION 2 PASS: classes == brute force for n=1..10; "
        f"n=2 curve: {n2} >= 4 certified ({t2:.2f}s); n=3 curve: {n3} >= 8 certified ({t3:.2f}s)"
    )


def test_criterion_3_triple_normal_theorem(rng):
    """Prescribed-angle triple normals exist on convex and immersed curves."""
    curves = [reconstruct(random_convex_support(rng, n=1, max_k=5)) for _ in range(10)]
    curves += [random_nonconvex_curve(rng) for _ in range(10)]
    checked = 0
    for ci, c in enumerate(curves):
        diam = c.diameter()
        for _ in range(5):
            w = rng.dirichlet([4.0, 4.0, 4.0])
            thetas = TWO_PI * w
            if np.max(thetas) > np.pi - 0.05 or np.min(thetas) < 0.25:
                thetas = np.array([2.0, 2.1, TWO_PI - 4.1])
            results = solve_triple_normal(c, thetas)
            good = [
                r
                for r in results
                if r.concurrency_residual < 1e-7 * diam
                and np.max(np.abs(r.achieved_angles - thetas)) < 1e-7
            ]
            assert good, f"curve {ci}: no certified triple normal for {thetas}"
            checked += 1
    # 2*pi/3 specialization on every non-convex curve
    for ci, c in enumerate(curves[10:]):
        results = solve_triple_normal(c, np.array([TWO_PI / 3] * 3))
        good = [r for r in results if r.concurrency_residual < 1e-7 * c.diameter()]
        assert good, f"non-convex curve {ci}: no tripod configuration"
    print(
        f"\nCRITERION 3 PASS: {checked}/100 (curve, angle-triple) instances certified; "
        f"2pi/3 specialization holds on all 10 non-convex curves"
    )


def test_criterion_4_tau_center_concurrency(rng):
    """Three-circle concurrency of tau-centers on 1000 random instances."""
    from tripods.triple_normal import DegenerateConstructionError

    worst = 0.0
    n_done = 0
    while n_done < 1000:
        v = rng.uniform(-2, 2, size=(3, 2))
        try:
            t = Triangle(v)
        except DegenerateConstructionError:
            continue
        if t.area < 0.05:
            continue
        w = rng.dirichlet([2.0, 2.0, 2.0])
        taus = np.pi * w
        if np.min(taus) < 0.05:
            continue
        tc = tau_center(t, tuple(taus))
        if tc.degenerate:
            continue
        assert tc.circle_residual < 1e-9
        worst = max(worst, tc.circle_residual)
        n_done += 1
    print(f"\nCRITERION 4 PASS: 1000/1000 tau-centers concurrent; worst residual {worst:.2e} < 1e-9")


def test_criterion_5_hyperbolic_minors():
    """Finite-difference Hessian minors match the closed forms and sign table."""
    t0 = time.perf_counter()
    lines = []
    for R in (0.3, 0.5, 0.7):
        rep1 = hyperbolic_minor_checks(R, case=1)
        for c in rep1.checks:
            if c.name in ("M1", "M2", "M3"):
                assert c.rel_error < 1e-4, (R, c.name, c.rel_error)
        assert rep1.m4_sign_by_d[1e-7] == 1 and rep1.m4_sign_by_d[-1e-7] == -1
        rep2 = hyperbolic_minor_checks(R, case=2)
        for c in rep2.checks:
            assert c.ok, (R, c.name)
        assert rep2.m4_sign_by_d[1e-6] == -1 and rep2.m4_sign_by_d[-1e-6] == 1
        worst1 = max(c.rel_error for c in rep1.checks if c.name != "M4/d")
        lines.append(f"R={R}: case-1 worst rel {worst1:.1e}, case-2 signs ok")
    dt = time.perf_counter() - t0
    assert dt < 10.0
    print(f"\nCRITERION 5 PASS: {'; '.join(lines)}; total {dt:.1f}s < 10s")


def test_criterion_6_morse_index_table():
    """Boundary Morse indices follow the case/orientation table everywhere."""
    from tripods.morse import default_epsilon

    hyp, sph = _noneuclidean_battery()
    n_checked = 0
    for c in hyp[:5] + sph[:5]:
        eps = default_epsilon(c)
        dias, continuum = find_diameters(c)
        assert not continuum and dias
        for d in dias:
            for case in (1, 2):
                for side in (1, -1):
                    cp = classify_boundary_critical(c, eps, d, case, side)
                    assert cp.kind == "type_D"
                    assert not cp.degenerate
                    assert cp.morse_index == INDEX_TABLE[(case, d.orientation_sign)]
                    n_checked += 1
    print(
        f"\nCRITERION 6 PASS: {n_checked}/{n_checked} boundary classifications match "
        f"the case/orientation index table on 5 hyperbolic + 5 spherical curves"
    )


def test_criterion_7_noneuclidean_existence_and_bookkeeping():
    """>= 2 interior critical orbits and a clean Morse identity per curve."""
    hyp, sph = _noneuclidean_battery()
    worst_time = 0.0
    total_orbits = 0
    for c in hyp + sph:
        t0 = time.perf_counter()
        res = find_interior_critical_points(c)
        dias, continuum = find_diameters(c)
        bk = morse_bookkeeping(res.critical_points, dias, continuum=res.continuum or continuum)
        worst_time = max(worst_time, time.perf_counter() - t0)
        assert res.count >= 2, f"{c.geometry.kind}: only {res.count} orbits"
        assert bk.divisible and bk.nonnegative and bk.passed
        assert bk.c_two_positive_degrees
        total_orbits += res.count
    assert worst_time < 60.0
    print(
        f"\nCRITERION 7 PASS: 20/20 curves with >= 2 interior orbits "
        f"({total_orbits} total) and nonnegative Morse quotients; "
        f"worst runtime {worst_time:.1f}s < 60s"
    )


def test_criterion_8_polygon_counts():
    """Regular n-gon has n configurations (3 not dividing n) or n/3."""
    from tripods.polygons import enumerate_regular, expected_regular_count

    for n in range(3, 31):
        configs = enumerate_regular(n)
        assert len(configs) == expected_regular_count(n), f"n={n}"
        for cfg in configs:
            assert cfg.concurrency_residual < 1e-10
            assert cfg.angle_residual < 1e-10
            for _, a_next, a_prev in cfg.support_angle_checks:
                assert a_next < np.pi / 2 and a_prev < np.pi / 2
    print("\nCRITERION 8 PASS: exact counts and full certificates for n = 3..30")


def test_criterion_9_property_suites(rng):
    """Cross-cutting property suites from the per-module invariants."""
    # gradient vs finite differences (delegated suite runs in test_morse;
    # spot-check one instance per geometry here)
    from tripods import kernels
    from tripods.morse import default_epsilon, offset_curve

    for c in (
        reconstruct(SupportCurve(1, 1.0, [0.0, 0.0, 0.08]), n_samples=2048),
        disk_radial_curve(0.5, [0.0, 0.02], n_samples=2048),
        sphere_radial_curve(0.5, [0.0, 0.0, 0.02], n_samples=2048),
    ):
        gamma_eps = offset_curve(c, default_epsilon(c))
        table = kernels.table_from_curve(gamma_eps)
        g = c.geometry
        tuv = np.array([[0.3, 2.0, 4.4]])
        p = (
            np.array([[0.05, -0.03]])
            if g.kind != "spherical"
            else np.array([[np.sin(0.1), 0.0, np.cos(0.1)]])
        )
        F = kernels.residual(table, tuv, p)[0]
        h = 1e-6

        def f_of(t3):
            return float(np.sum(g.distance(gamma_eps.point_at(t3), p[0])))

        for j in range(3):
            d = np.zeros(3)
            d[j] = h
            fd = (f_of(tuv[0] + d) - f_of(tuv[0] - d)) / (2 * h)
            assert abs(F[j] - fd) / max(1.0, abs(fd)) < 1e-5

    # equidistant tripod invariance
    for _ in range(5):
        sc = random_convex_support(rng, n=1, max_k=5)
        assert equidistant_invariance_check(sc, float(rng.uniform(-0.15, 0.4)))

    # delta-curve detection
    assert delta_curve_test(SupportCurve(1, 1.0, [0.04, 0.03]))
    assert not delta_curve_test(SupportCurve(1, 1.0, [0.0, 0.0, 0.1]))

    # diameter orientation pairing
    for c in (disk_radial_curve(0.5, [0.0, 0.02]), sphere_radial_curve(0.5, [0.0, 0.0, 0.02])):
        dias, _ = find_diameters(c)
        assert sum(d.orientation_sign for d in dias) == 0

    # reconstruction round trips
    for _ in range(10):
        n = int(rng.integers(1, 4))
        sc = random_convex_support(rng, n=n, max_k=8)
        a = np.linspace(0, sc.period, 512, endpoint=False)
        pts = sc.point(a)
        nu = np.stack([np.cos(a), np.sin(a)], axis=-1)
        assert np.max(np.abs(np.sum(pts * nu, axis=-1) - sc.q(a))) < 1e-8

    # offset support shift q_r = q + r survives sampling
    sc = SupportCurve(1, 1.0, [0.0, 0.0, 0.1])
    c_off, regular = equidistant(reconstruct(sc), 0.3)
    assert regular
    a = np.linspace(0, TWO_PI, 256, endpoint=False)
    nu = np.stack([np.cos(a), np.sin(a)], axis=-1)
    assert np.max(np.abs(np.sum(c_off.point_at(a) * nu, axis=-1) - (sc.q(a) + 0.3))) < 1e-8
    print("\nCRITERION 9 PASS: gradient/equidistant/delta/pairing/round-trip property suites")
