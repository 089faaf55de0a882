"""Apparatus image states and the comparison of psi(p) psi(-p) against |psi(p)|^2.

On the centered even-``n`` momentum grid node ``j`` carries ``p_j = (j - n/2) dp``,
so ``-p_j`` sits at index ``(n - j) mod n``.  Node 0 (``p = -n/2 dp``) has no
partner on the grid and is mapped to itself.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from mirror_born.grid import MOMENTUM, WaveFunction, check_compatible

EDGE_TOL = 1e-12
DEFAULT_TOLERANCE = 1e-8
CSV_HEADER = ("p", "born_density", "mirror_re", "mirror_im")


class EdgeBinWarning(UserWarning):
    """The unpaired extreme-momentum node carries weight, so reflection is ambiguous."""


@dataclass(frozen=True)
class ExchangeRecord:
    dp_part: float
    dp_ap: float
    dE_part: float
    dE_ap: float
    dphi_part: float
    dphi_ap: float


@dataclass(frozen=True)
class MirrorReport:
    dev_reflect_conj: float
    dev_product: float
    max_imag: float
    evenness_defect: float
    mirror_norm: float
    tolerance: float
    verdict: str

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    def to_dict(self) -> dict:
        return asdict(self)


def _require_momentum(psi: WaveFunction) -> None:
    if psi.rep != MOMENTUM:
        raise ValueError(f"expected a momentum-representation wave function, got {psi.rep}")


def reflection_index(n: int) -> np.ndarray:
    return (n - np.arange(n)) % n


def _warn_edge(psi: WaveFunction) -> None:
    if abs(psi.amp[0]) > EDGE_TOL:
        warnings.warn(
            f"edge momentum node carries amplitude {abs(psi.amp[0]):.3e}; "
            "its reflection is not represented on the grid",
            EdgeBinWarning,
            stacklevel=3,
        )


def reflect(psi: WaveFunction) -> WaveFunction:
    """``psi(p) -> psi(-p)`` by node permutation; an involution."""
    _require_momentum(psi)
    _warn_edge(psi)
    return psi.with_amp(psi.amp[reflection_index(psi.grid.n)])


def conjugate(psi: WaveFunction) -> WaveFunction:
    return psi.with_amp(np.conj(psi.amp))


def apparatus_image_segmentwise(psi: WaveFunction) -> WaveFunction:
    """Build the apparatus image one momentum cell at a time.

    Each cell hands its content to the mirrored cell with the momentum sign
    flipped and the phase reversed; the modulus is carried over unchanged.
    """
    _require_momentum(psi)
    _warn_edge(psi)
    n = psi.grid.n
    out = np.empty(n, dtype=np.complex128)
    for j in range(n):
        a = psi.amp[j]
        # phase reversal keeps the real part and flips the imaginary part
        out[(n - j) % n] = complex(a.real, -a.imag)
    return psi.with_amp(out)


def segment_exchange(delta_p: float, delta_E: float, x: float, tau: float) -> ExchangeRecord:
    """Equal and opposite momentum, energy and phase changes for one segment.

    The particle loses ``delta_p`` and ``delta_E`` to the apparatus at the
    common point ``x`` over the window ``tau``; each side's phase change is
    ``dE * tau - dp * x``.
    """
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    dp_part, dp_ap = -float(delta_p), float(delta_p)
    dE_part, dE_ap = -float(delta_E), float(delta_E)
    return ExchangeRecord(
        dp_part=dp_part,
        dp_ap=dp_ap,
        dE_part=dE_part,
        dE_ap=dE_ap,
        dphi_part=dE_part * tau - dp_part * x,
        dphi_ap=dE_ap * tau - dp_ap * x,
    )


def joint_amplitude(psi: WaveFunction, psi_ap: WaveFunction) -> np.ndarray:
    """Pointwise product of particle and apparatus amplitudes, not renormalized."""
    check_compatible(psi, psi_ap)
    return psi.amp * psi_ap.amp


def born_compare(psi: WaveFunction, tolerance: float = DEFAULT_TOLERANCE) -> MirrorReport:
    _require_momentum(psi)
    if not tolerance >= 0:
        raise ValueError(f"tolerance must be non-negative, got {tolerance}")
    refl = reflect(psi)
    conj = np.conj(psi.amp)
    product = joint_amplitude(psi, refl)
    born = psi.density()
    dev = float(np.max(np.abs(refl.amp - conj)))
    return MirrorReport(
        dev_reflect_conj=dev,
        dev_product=float(np.max(np.abs(product - born))),
        max_imag=float(np.max(np.abs(product.imag))),
        evenness_defect=float(np.max(np.abs(np.abs(refl.amp) - np.abs(psi.amp)))),
        mirror_norm=float(np.sum(product.real) * psi.step),
        tolerance=float(tolerance),
        verdict="holds" if dev <= tolerance else "fails",
    )


def mirror_rows(psi: WaveFunction):
    """Per-node ``(p, |psi|^2, Re P, Im P)`` with ``P = psi(p) psi(-p)``."""
    _require_momentum(psi)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EdgeBinWarning)
        product = joint_amplitude(psi, reflect(psi))
    return zip(psi.nodes, psi.density(), product.real, product.imag)


def fmt(value: float) -> str:
    return format(float(value), ".17g")


def mirror_csv(psi: WaveFunction) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in mirror_rows(psi):
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()
