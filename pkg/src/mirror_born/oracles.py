"""Independent reference computations used to cross-check the main code paths.

Nothing here calls the FFT transform or the Jacobi eigensolver; each oracle is
a direct, slow evaluation of a definition or a closed form.
"""

from __future__ import annotations

import math

import numpy as np


def direct_dft(amp, x, p, dx: float) -> np.ndarray:
    """O(n^2) evaluation of ``dx/sqrt(2 pi) * sum_j amp_j exp(-i p_k x_j)``."""
    kernel = np.exp(-1j * np.outer(p, x))
    return (dx / math.sqrt(2.0 * math.pi)) * (kernel @ np.asarray(amp, dtype=complex))


def gaussian_momentum(p, x0: float, p0: float, sigma_x: float) -> np.ndarray:
    """Continuum momentum amplitude of the position-gauged Gaussian packet.

    Gauge: position amplitude real positive at ``x0``, which puts a phase
    ``exp(-i (p - p0) x0)`` on the momentum side.
    """
    p = np.asarray(p, dtype=float)
    sigma_p = 1.0 / (2.0 * sigma_x)
    env = (2.0 * math.pi * sigma_p**2) ** -0.25 * np.exp(-((p - p0) ** 2) / (4.0 * sigma_p**2))
    return env * np.exp(-1j * (p - p0) * x0)


def mirror_deviation_closed_form(p, x0: float, p0: float, sigma_x: float) -> float:
    """``max_j |psi(-p_j) - conj(psi(p_j))|`` from the closed-form momentum Gaussian."""
    p = np.asarray(p, dtype=float)
    return float(np.max(np.abs(
        gaussian_momentum(-p, x0, p0, sigma_x) - np.conj(gaussian_momentum(p, x0, p0, sigma_x))
    )))


def hermitian_cubic_eigenvalues(h) -> np.ndarray:
    """Eigenvalues of a 3x3 Hermitian matrix from its characteristic polynomial.

    ``det(lambda I - H) = lambda^3 - a lambda^2 + b lambda - c`` with
    ``a = tr H``, ``b`` the sum of principal 2x2 minors and ``c = det H``.
    All roots are real; the trigonometric form of the cubic solution is used.
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix")
    a = (h[0, 0] + h[1, 1] + h[2, 2]).real
    b = (
        h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0]
        + h[0, 0] * h[2, 2] - h[0, 2] * h[2, 0]
        + h[1, 1] * h[2, 2] - h[1, 2] * h[2, 1]
    ).real
    c = (
        h[0, 0] * (h[1, 1] * h[2, 2] - h[1, 2] * h[2, 1])
        - h[0, 1] * (h[1, 0] * h[2, 2] - h[1, 2] * h[2, 0])
        + h[0, 2] * (h[1, 0] * h[2, 1] - h[1, 1] * h[2, 0])
    ).real
    # depressed cubic t^3 + q t + r = 0 with lambda = t + a/3
    shift = a / 3.0
    q = b - a * a / 3.0
    r = -2.0 * a**3 / 27.0 + a * b / 3.0 - c
    if q >= 0.0:
        # only possible for a triple root (q == 0) when all roots are real
        return np.full(3, shift)
    m = 2.0 * math.sqrt(-q / 3.0)
    arg = 3.0 * r / (q * m)
    theta = math.acos(max(-1.0, min(1.0, arg))) / 3.0
    roots = [shift + m * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3)]
    return np.sort(np.array(roots))


def binomial_sigma(prob: float, n: int) -> float:
    return math.sqrt(prob * (1.0 - prob) / n)
