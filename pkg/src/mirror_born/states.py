"""Free-particle packet constructors and plane-wave phase bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mirror_born.grid import POSITION, GridSpec, WaveFunction, check_compatible, normalize

SUPPORT_SIGMAS = 8.0


@dataclass(frozen=True)
class PacketSpec:
    x0: float = 0.0
    p0: float = 0.0
    sigma_x: float = 1.0
    m: float = 1.0
    t: float = 0.0

    def __post_init__(self):
        for name in ("x0", "p0", "sigma_x", "m", "t"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.sigma_x <= 0:
            raise ValueError(f"sigma_x must be positive, got {self.sigma_x}")
        if self.m <= 0:
            raise ValueError(f"m must be positive, got {self.m}")

    @property
    def sigma_p(self) -> float:
        return 1.0 / (2.0 * self.sigma_x)

    def check_fits(self, g: GridSpec) -> None:
        lo = self.x0 - SUPPORT_SIGMAS * self.sigma_x
        hi = self.x0 + SUPPORT_SIGMAS * self.sigma_x
        if lo < g.x_min or hi > g.x_max:
            raise ValueError(
                f"packet support [{lo:g}, {hi:g}] (x0 +/- {SUPPORT_SIGMAS:g} sigma_x) "
                f"does not fit the grid [{g.x_min:g}, {g.x_max:g}]"
            )


def _fix_gauge(amp: np.ndarray) -> np.ndarray:
    peak = int(np.argmax(np.abs(amp)))
    out = amp * (np.abs(amp[peak]) / amp[peak])
    out[peak] = np.abs(amp[peak])
    return out


def gaussian_packet(spec: PacketSpec, g: GridSpec) -> WaveFunction:
    """Position-space Gaussian with centre ``x0``, mean momentum ``p0`` and width ``sigma_x``.

    The result is normalized on the grid and its global phase is chosen so the
    amplitude at the largest-modulus node is real and positive.
    """
    spec.check_fits(g)
    x = g.x
    amp = (
        (2.0 * np.pi * spec.sigma_x**2) ** -0.25
        * np.exp(-((x - spec.x0) ** 2) / (4.0 * spec.sigma_x**2))
        * np.exp(1j * spec.p0 * x)
    )
    return normalize(WaveFunction(g, POSITION, _fix_gauge(amp)))


def superpose(terms) -> WaveFunction:
    """Normalized linear combination of ``(coeff, psi)`` pairs."""
    terms = list(terms)
    if not terms:
        raise ValueError("superpose needs at least one term")
    first = terms[0][1]
    total = np.zeros(first.grid.n, dtype=np.complex128)
    for coeff, psi in terms:
        check_compatible(first, psi)
        total = total + complex(coeff) * psi.amp
    if not np.any(total):
        raise ValueError("superposition vanishes identically")
    return normalize(first.with_amp(total))


def plane_wave_phase(p: float, x: float, t: float, m: float = 1.0) -> float:
    """``E t - p x`` with the free-particle energy ``E = p^2 / 2m``.

    The energy term is even in ``p`` while ``p x`` is odd, so flipping the sign
    of ``p`` does not simply negate the phase unless ``t = 0``.
    """
    if m <= 0:
        raise ValueError(f"m must be positive, got {m}")
    return (p * p / (2.0 * m)) * t - p * x
