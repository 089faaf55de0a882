"""Uniform 1-D lattice, complex fields on it, and the unitary position/momentum transform.

Units are dimensionless with hbar = 1.  For ``n`` points on ``[x_min, x_max)``::

    dx  = (x_max - x_min) / n
    dp  = 2 pi / (n dx)
    x_j = x_min + j dx
    p_k = (k - n/2) dp

The transform pair is

    psi~(p_k) = dx / sqrt(2 pi) * sum_j psi(x_j) exp(-i p_k x_j)
    psi(x_j)  = dp / sqrt(2 pi) * sum_k psi~(p_k) exp(+i p_k x_j)

which is exactly unitary for the rectangle-rule norms ``sum |psi|^2 dx`` and
``sum |psi~|^2 dp``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal

import numpy as np

POSITION = "position"
MOMENTUM = "momentum"
Representation = Literal["position", "momentum"]


class GridMismatchError(ValueError):
    """Two fields do not live on the same grid or in the same representation."""


@dataclass(frozen=True)
class GridSpec:
    n: int
    x_min: float
    x_max: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise ValueError(f"n must be an integer, got {self.n!r}")
        if self.n < 8:
            raise ValueError(f"n must be at least 8, got {self.n}")
        if self.n % 2:
            raise ValueError(f"n must be even, got {self.n}")
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise ValueError("grid bounds must be finite")
        if self.x_max <= self.x_min:
            raise ValueError(f"x_max ({self.x_max}) must exceed x_min ({self.x_min})")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "x_max", float(self.x_max))

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def dp(self) -> float:
        return 2.0 * np.pi / (self.n * self.dx)

    @cached_property
    def x(self) -> np.ndarray:
        x = self.x_min + np.arange(self.n) * self.dx
        x.flags.writeable = False
        return x

    @cached_property
    def p(self) -> np.ndarray:
        p = (np.arange(self.n) - self.n // 2) * self.dp
        p.flags.writeable = False
        return p

    def step(self, rep: Representation) -> float:
        if rep == POSITION:
            return self.dx
        if rep == MOMENTUM:
            return self.dp
        raise ValueError(f"unknown representation {rep!r}")

    def nodes(self, rep: Representation) -> np.ndarray:
        return self.x if rep == POSITION else self.p


def make_grid(n: int, x_min: float, x_max: float) -> GridSpec:
    return GridSpec(n, x_min, x_max)


@dataclass(frozen=True)
class WaveFunction:
    """Complex amplitudes sampled on ``grid`` in the ``rep`` representation.

    The amplitude array is copied on construction and frozen, so instances can
    be shared freely.
    """

    grid: GridSpec
    rep: Representation
    amp: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.rep not in (POSITION, MOMENTUM):
            raise ValueError(f"rep must be 'position' or 'momentum', got {self.rep!r}")
        amp = np.array(self.amp, dtype=np.complex128, copy=True).reshape(-1)
        if amp.shape[0] != self.grid.n:
            raise ValueError(f"expected {self.grid.n} amplitudes, got {amp.shape[0]}")
        if not np.all(np.isfinite(amp)):
            raise ValueError("amplitudes must be finite")
        amp.flags.writeable = False
        object.__setattr__(self, "amp", amp)

    @property
    def step(self) -> float:
        return self.grid.step(self.rep)

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes(self.rep)

    def density(self) -> np.ndarray:
        return np.abs(self.amp) ** 2

    def with_amp(self, amp) -> "WaveFunction":
        return WaveFunction(self.grid, self.rep, amp)

    def __eq__(self, other):
        if not isinstance(other, WaveFunction):
            return NotImplemented
        return (
            self.grid == other.grid
            and self.rep == other.rep
            and np.array_equal(self.amp, other.amp)
        )

    __hash__ = None


def _require_rep(psi: WaveFunction, rep: str) -> None:
    if psi.rep != rep:
        raise ValueError(f"expected a {rep}-representation wave function, got {psi.rep}")


def check_compatible(psi: WaveFunction, chi: WaveFunction) -> None:
    if psi.grid != chi.grid:
        raise GridMismatchError(f"grids differ: {psi.grid} vs {chi.grid}")
    if psi.rep != chi.rep:
        raise GridMismatchError(f"representations differ: {psi.rep} vs {chi.rep}")


def _phase_factors(g: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    # exp(-i p_k x_j) = exp(-i p_k x_min) * (-1)^j * exp(-2 pi i j k / n)
    sign = np.where(np.arange(g.n) % 2 == 0, 1.0, -1.0)
    shift = np.exp(-1j * g.p * g.x_min)
    return sign, shift


def to_momentum(psi: WaveFunction) -> WaveFunction:
    _require_rep(psi, POSITION)
    g = psi.grid
    sign, shift = _phase_factors(g)
    amp = (g.dx / np.sqrt(2.0 * np.pi)) * shift * np.fft.fft(sign * psi.amp)
    return WaveFunction(g, MOMENTUM, amp)


def to_position(psi: WaveFunction) -> WaveFunction:
    _require_rep(psi, MOMENTUM)
    g = psi.grid
    sign, shift = _phase_factors(g)
    # numpy's ifft carries 1/n; dp * n / sqrt(2 pi) restores the unitary weight
    amp = (g.dp * g.n / np.sqrt(2.0 * np.pi)) * sign * np.fft.ifft(np.conj(shift) * psi.amp)
    return WaveFunction(g, POSITION, amp)


def norm(psi: WaveFunction) -> float:
    return float(np.sqrt(np.sum(psi.density()) * psi.step))


def inner(psi: WaveFunction, chi: WaveFunction) -> complex:
    """``sum conj(psi) * chi * step``, conjugate-linear in the first slot."""
    check_compatible(psi, chi)
    return complex(np.vdot(psi.amp, chi.amp) * psi.step)


def normalize(psi: WaveFunction) -> WaveFunction:
    nrm = norm(psi)
    if nrm == 0.0:
        raise ValueError("cannot normalize the zero field")
    return psi.with_amp(psi.amp / nrm)
