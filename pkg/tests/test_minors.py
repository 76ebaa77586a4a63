import numpy as np
import pytest

from tripods.minors import hyperbolic_minor_checks


def test_case1_closed_forms_at_half():
    rep = hyperbolic_minor_checks(0.5, case=1)
    by_name = {}
    for c in rep.checks:
        by_name.setdefault(c.name, c)
    assert by_name["M1"].computed == pytest.approx(-1.2, abs=1e-10)
    assert by_name["M2"].computed == pytest.approx(0.32, abs=1e-10)
    assert by_name["M3"].computed == pytest.approx(-0.064, abs=1e-10)
    assert rep.passed


@pytest.mark.parametrize("R", [0.3, 0.5, 0.7])
def test_case1_relative_accuracy(R):
    rep = hyperbolic_minor_checks(R, case=1)
    for c in rep.checks:
        if c.name in ("M1", "M2", "M3"):
            assert c.rel_error < 1e-4
            # closed forms evaluated independently
            if c.name == "M1":
                assert c.expected == pytest.approx(-3 * R / (R**2 + 1))
            if c.name == "M2":
                assert c.expected == pytest.approx(2 * R**2 / (R**2 + 1) ** 2)
            if c.name == "M3":
                assert c.expected == pytest.approx(-(R**3) / (R**2 + 1) ** 3)
        else:
            assert c.rel_error < 1e-3
    assert rep.m4_sign_by_d[1e-7] == 1
    assert rep.m4_sign_by_d[-1e-7] == -1


@pytest.mark.parametrize("R", [0.3, 0.5, 0.7])
def test_case2_scaled_limits_and_signs(R):
    rep = hyperbolic_minor_checks(R, case=2)
    signs = {"eps*M1": 1, "eps*M2": -1, "eps*M3": 1}
    for c in rep.checks:
        if c.name in signs:
            assert np.sign(c.computed) == signs[c.name]
            assert c.rel_error < 1e-3
        else:
            # M4 carries the orientation information in its sign only
            assert c.sign_only
            assert np.sign(c.computed) == np.sign(c.expected) == -np.sign(1)
    # sign of det(M4) follows -sign(d): index 3 for d > 0, 2 for d < 0
    assert rep.m4_sign_by_d[1e-6] == -1
    assert rep.m4_sign_by_d[-1e-6] == 1
    assert rep.passed


def test_domain_rejection():
    with pytest.raises(ValueError):
        hyperbolic_minor_checks(0.97)
    with pytest.raises(ValueError):
        hyperbolic_minor_checks(1.2)
    with pytest.raises(ValueError):
        hyperbolic_minor_checks(0.5, case=3)
