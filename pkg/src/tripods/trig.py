"""Truncated trigonometric series for smooth periodic data.

All closed curves handled by this package are smooth and periodic, so
trigonometric interpolation of uniform samples converges spectrally; a
handful of harmonics reproduces analytic inputs to machine precision.
Coefficients may be scalar (shape ``(K,)``) or vector valued (``(K, m)``),
in which case all components share the evaluated cos/sin tables.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi


class TrigSeries:
    """f(x) = a0 + sum_k a_k cos(k*w*x) + b_k sin(k*w*x) with w = 2*pi/period."""

    def __init__(self, a0, cos_coeffs, sin_coeffs, period: float = TWO_PI):
        self.a0 = np.asarray(a0, dtype=float)
        self.cos_coeffs = np.atleast_1d(np.asarray(cos_coeffs, dtype=float))
        self.sin_coeffs = np.atleast_1d(np.asarray(sin_coeffs, dtype=float))
        if self.cos_coeffs.shape != self.sin_coeffs.shape:
            raise ValueError("cos and sin coefficient arrays must have the same shape")
        self.period = float(period)
        self.omega = TWO_PI / self.period

    @property
    def n_terms(self) -> int:
        return self.cos_coeffs.shape[0]

    @property
    def n_components(self) -> int:
        return 1 if self.cos_coeffs.ndim == 1 else self.cos_coeffs.shape[1]

    @classmethod
    def fit(cls, values, period: float = TWO_PI, rel_tol: float = 1e-15) -> "TrigSeries":
        """Interpolate uniform samples over one period (endpoint excluded).

        The result is the exact trigonometric interpolant truncated where
        the coefficient amplitudes fall below ``rel_tol`` relative to the
        largest one, which keeps evaluation cheap for analytic data.
        """
        values = np.asarray(values, dtype=float)
        n = values.shape[0]
        spec = np.fft.rfft(values, axis=0) / n
        a0 = spec[0].real
        a = 2.0 * spec[1:].real
        b = -2.0 * spec[1:].imag
        if n % 2 == 0 and a.shape[0] > 0:
            a[-1] *= 0.5  # Nyquist bin is not doubled
            b[-1] = 0.0
        amp = np.hypot(a, b)
        if amp.ndim > 1:
            amp = amp.max(axis=tuple(range(1, amp.ndim)))
        scale = max(float(np.max(amp, initial=0.0)), float(np.max(np.abs(a0))), 1e-300)
        keep = np.nonzero(amp > rel_tol * scale)[0]
        k_max = int(keep[-1]) + 1 if keep.size else 0
        return cls(a0, a[:k_max], b[:k_max], period)

    def _deriv_coeffs(self, deriv: int):
        a, b = self.cos_coeffs, self.sin_coeffs
        if deriv == 0:
            return self.a0, a, b
        k = np.arange(1, self.n_terms + 1, dtype=float) * self.omega
        if a.ndim > 1:
            k = k[:, None]
        for _ in range(deriv):
            a, b = k * b, -k * a
        return np.zeros_like(self.a0), a, b

    def __call__(self, x, deriv: int = 0):
        """Evaluate the series (or its term-wise derivative) at x."""
        a0, a, b = self._deriv_coeffs(deriv)
        x = np.asarray(x, dtype=float)
        if self.n_terms == 0:
            out = np.broadcast_to(a0, x.shape + np.shape(a0)).copy()
            return out
        k = np.arange(1, self.n_terms + 1, dtype=float)
        theta = np.multiply.outer(x, k) * self.omega
        vals = np.cos(theta) @ a + np.sin(theta) @ b
        return vals + a0

    def shifted(self, delta: float) -> "TrigSeries":
        """Series of x -> f(x + delta)."""
        k = np.arange(1, self.n_terms + 1, dtype=float) * self.omega * float(delta)
        c, s = np.cos(k), np.sin(k)
        if self.cos_coeffs.ndim > 1:
            c, s = c[:, None], s[:, None]
        a = c * self.cos_coeffs + s * self.sin_coeffs
        b = -s * self.cos_coeffs + c * self.sin_coeffs
        return TrigSeries(self.a0, a, b, self.period)
