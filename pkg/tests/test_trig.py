import numpy as np

from tripods.trig import TrigSeries


def test_fit_reproduces_analytic_series():
    t = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    vals = 1.5 + 0.3 * np.cos(2 * t) - 0.7 * np.sin(5 * t)
    f = TrigSeries.fit(vals)
    x = np.linspace(0, 2 * np.pi, 999)
    assert np.allclose(f(x), 1.5 + 0.3 * np.cos(2 * x) - 0.7 * np.sin(5 * x), atol=1e-13)
    assert f.n_terms == 5  # truncated at the highest surviving harmonic


def test_derivatives_are_termwise():
    f = TrigSeries(1.0, [0.0, 0.25], [0.5, 0.0])
    x = np.linspace(0, 2 * np.pi, 100)
    d1 = f(x, deriv=1)
    expect = 0.5 * np.cos(x) - 0.5 * np.sin(2 * x)
    assert np.allclose(d1, expect, atol=1e-14)
    d2 = f(x, deriv=2)
    assert np.allclose(d2, -0.5 * np.sin(x) - np.cos(2 * x), atol=1e-14)


def test_vector_valued_and_nonstandard_period():
    t = np.linspace(0, 4 * np.pi, 512, endpoint=False)
    vals = np.stack([np.cos(t / 2), np.sin(1.5 * t)], axis=-1)
    f = TrigSeries.fit(vals, period=4 * np.pi)
    x = np.array([0.3, 1.1, 7.6])
    assert np.allclose(f(x)[:, 0], np.cos(x / 2), atol=1e-13)
    assert np.allclose(f(x, deriv=1)[:, 1], 1.5 * np.cos(1.5 * x), atol=1e-12)


def test_shifted():
    f = TrigSeries(0.2, [0.3, 0.1], [0.0, -0.4])
    g = f.shifted(0.7)
    x = np.linspace(0, 2 * np.pi, 57)
    assert np.allclose(g(x), f(x + 0.7), atol=1e-14)
