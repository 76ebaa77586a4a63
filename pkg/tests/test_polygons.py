import numpy as np
import pytest

from tripods.polygons import (
    RegularPolygon,
    Rejection,
    admissible_k,
    check_polygon_tripod,
    enumerate_regular,
    expected_regular_count,
    isoceles_support_angle_degrees,
)

TWO_PI = 2 * np.pi


def test_counts_match_theorem_3_to_30():
    for n in range(3, 31):
        configs = enumerate_regular(n)
        assert len(configs) == expected_regular_count(n), f"n={n}"


def test_triangle_single_configuration():
    configs = enumerate_regular(3)
    assert len(configs) == 1
    assert configs[0].indices == (0, 1, 2)
    assert np.linalg.norm(configs[0].fermat_point) < 1e-12


def test_square_all_triples_accepted():
    poly = RegularPolygon(4)
    for idx in ((0, 1, 3), (0, 1, 2), (1, 2, 3), (0, 2, 3)):
        res = check_polygon_tripod(poly.vertices, idx)
        assert res, f"{idx} rejected: {res}"
    assert len(enumerate_regular(4)) == 4


def test_hexagon_two_configurations():
    configs = enumerate_regular(6)
    assert sorted(c.indices for c in configs) == [(0, 2, 4), (1, 3, 5)]
    rej = check_polygon_tripod(RegularPolygon(6).vertices, (0, 1, 2))
    assert isinstance(rej, Rejection)


def test_pentagon_example():
    poly = RegularPolygon(5)
    assert check_polygon_tripod(poly.vertices, (0, 2, 3))
    assert admissible_k(5) == [2]  # n = 3m+2 admits only k = m+1


def test_admissible_k_criterion():
    for n in range(3, 31):
        ks = admissible_k(n)
        m = n // 3
        if n % 3 == 0:
            assert ks == [m]
        elif n % 3 == 1:
            assert ks == [m]
        else:
            assert ks == [m + 1]


def test_support_angle_formula():
    # measured angle at v_k toward v_{k+1} matches the closed form (degrees)
    for n in range(4, 25):
        for k in admissible_k(n):
            poly = RegularPolygon(n)
            res = check_polygon_tripod(poly.vertices, (0, k, n - k))
            if isinstance(res, Rejection):
                continue
            checks = {i: (an, ap) for i, an, ap in res.support_angle_checks}
            measured = np.degrees(checks[k][0])
            assert measured == pytest.approx(isoceles_support_angle_degrees(n, k), abs=1e-9)


def test_configuration_certificates():
    for n in (4, 5, 7, 9, 12):
        for cfg in enumerate_regular(n):
            assert cfg.concurrency_residual < 1e-10
            assert cfg.angle_residual < 1e-10
            for _, a_next, a_prev in cfg.support_angle_checks:
                assert a_next < np.pi / 2
                assert a_prev < np.pi / 2


def test_rotational_covariance():
    n = 7
    configs = enumerate_regular(n)
    sets = {c.indices for c in configs}
    rotated = {tuple(sorted((i + 1) % n for i in idx)) for idx in sets}
    assert rotated == sets


def test_scaling_invariance():
    small = {c.indices for c in enumerate_regular(8, 1.0)}
    large = {c.indices for c in enumerate_regular(8, 7.5)}
    assert small == large


def test_vertex_fermat_rejection():
    poly = RegularPolygon(12)
    # three nearly-collinear vertices: the middle angle exceeds 2*pi/3
    res = check_polygon_tripod(poly.vertices, (0, 1, 2))
    assert isinstance(res, Rejection)
    assert res.reason in ("vertex_fermat", "support_line")
