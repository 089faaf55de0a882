"""Finite-dimensional Hermitian observables, their spectra and Born statistics.

Expectation values are available by two independent routes: directly as
``<psi|H|psi>`` and through the eigenbasis as ``sum_k |c_k|^2 lambda_k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mirror_born.grid import MOMENTUM, POSITION, WaveFunction, norm, to_momentum, to_position
from mirror_born.rng import SplitMix64, advance, check_seed, shard_schedule

HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-10
SWEEP_THRESHOLD = 1e-13
MAX_SWEEPS = 100
MAX_DIM = 64


class ConvergenceError(RuntimeError):
    def __init__(self, sweeps: int, residual: float):
        super().__init__(f"Jacobi did not converge in {sweeps} sweeps (residual {residual:.3e})")
        self.sweeps = sweeps
        self.residual = residual


@dataclass(frozen=True)
class HermitianOperator:
    entries: np.ndarray

    def __post_init__(self):
        h = np.array(self.entries, dtype=np.complex128, copy=True)
        if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] == 0:
            raise ValueError(f"operator must be a non-empty square matrix, got shape {h.shape}")
        if h.shape[0] > MAX_DIM:
            raise ValueError(f"dimension {h.shape[0]} exceeds the supported maximum {MAX_DIM}")
        if not np.all(np.isfinite(h)):
            raise ValueError("operator entries must be finite")
        defect = np.max(np.abs(h - h.conj().T))
        if defect > HERMITIAN_TOL:
            raise ValueError(f"operator is not Hermitian (max |H - H^dagger| = {defect:.3e})")
        h.flags.writeable = False
        object.__setattr__(self, "entries", h)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns are eigenvectors
    residual: float
    sweeps: int = 0

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def gram_defect(self) -> float:
        v = self.eigenvectors
        return float(np.max(np.abs(v.conj().T @ v - np.eye(self.dim))))


@dataclass(frozen=True)
class ProbabilityTable:
    probs: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float, copy=True).reshape(-1)
        labels = np.array(self.labels, copy=True).reshape(-1)
        if probs.shape != labels.shape:
            raise ValueError("probs and labels must have equal length")
        if probs.size == 0:
            raise ValueError("empty probability table")
        if np.any(probs < 0) or np.any(probs > 1):
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(probs.sum() - 1.0) > NORM_TOL:
            raise ValueError(f"probabilities sum to {probs.sum():.15g}, not 1")
        probs.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return self.probs.shape[0]


def _off_norm(h: np.ndarray) -> float:
    off = h - np.diag(np.diag(h))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def _rotate(h: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Annihilate ``h[p, q]`` in place with a complex Jacobi rotation."""
    b = h[p, q]
    mag = abs(b)
    phase = b / mag
    app, aqq = h[p, p].real, h[q, q].real
    # phase-strip the pair, then a real symmetric rotation
    theta = (aqq - app) / (2.0 * mag)
    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    j = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
    idx = [p, q]
    h[:, idx] = h[:, idx] @ j
    h[idx, :] = j.conj().T @ h[idx, :]
    v[:, idx] = v[:, idx] @ j
    h[p, q] = h[q, p] = 0.0
    h[p, p] = app - t * mag
    h[q, q] = aqq + t * mag


def _canonical_order(values: np.ndarray, vectors: np.ndarray):
    k = values.shape[0]
    lead = np.argmax(np.abs(vectors), axis=0)
    # phase: largest-modulus component real positive
    phases = vectors[lead, np.arange(k)]
    vectors = vectors * (np.abs(phases) / phases)
    vectors[lead, np.arange(k)] = np.abs(phases)
    scale = max(1.0, float(np.max(np.abs(values))))
    order = np.argsort(values, kind="stable")
    # group near-equal eigenvalues, then order each cluster by leading index
    clusters, current = [], [order[0]]
    for i in order[1:]:
        if values[i] - values[current[-1]] <= 1e-10 * scale:
            current.append(i)
        else:
            clusters.append(current)
            current = [i]
    clusters.append(current)
    final = []
    for cl in clusters:
        final.extend(sorted(cl, key=lambda i: (lead[i], values[i])))
    final = np.array(final)
    return values[final], vectors[:, final]


def eigendecompose(op: HermitianOperator) -> SpectralDecomposition:
    """Cyclic complex Jacobi diagonalization.

    Sweeps visit pairs ``(p, q)`` with ``p < q`` in row-major order until the
    off-diagonal Frobenius norm drops to ``SWEEP_THRESHOLD`` relative to the
    matrix norm (floored at 1).  Eigenvalues come back ascending; inside a
    degenerate cluster vectors are ordered by the index of their
    largest-modulus component, and every vector's largest component is real
    positive.
    """
    h = np.array(op.entries, dtype=np.complex128)
    k = op.dim
    v = np.eye(k, dtype=np.complex128)
    target = SWEEP_THRESHOLD * max(1.0, float(np.linalg.norm(h)))
    sweeps = 0
    residual = _off_norm(h)
    while residual > target:
        if sweeps >= MAX_SWEEPS:
            raise ConvergenceError(sweeps, residual)
        for p in range(k - 1):
            for q in range(p + 1, k):
                if h[p, q] != 0:
                    _rotate(h, v, p, q)
        sweeps += 1
        residual = _off_norm(h)
    values = np.diag(h).real.copy()
    values, vectors = _canonical_order(values, v)
    off = h - np.diag(np.diag(h))
    max_off = float(np.max(np.abs(off))) if k > 1 else 0.0
    values.flags.writeable = False
    vectors.flags.writeable = False
    return SpectralDecomposition(values, vectors, max_off, sweeps)


def _as_state(state, dim: int) -> np.ndarray:
    s = np.asarray(state, dtype=np.complex128).reshape(-1)
    if s.shape[0] != dim:
        raise ValueError(f"state has dimension {s.shape[0]}, operator has {dim}")
    nrm = np.sqrt(np.sum(np.abs(s) ** 2))
    if abs(nrm - 1.0) > NORM_TOL:
        raise ValueError(f"state is not normalized (norm {nrm:.15g})")
    return s


def coefficients(d: SpectralDecomposition, state) -> np.ndarray:
    """Expansion coefficients ``c_k = <v_k, state>``."""
    s = _as_state(state, d.dim)
    return d.eigenvectors.conj().T @ s


def born_table(c, labels=None) -> ProbabilityTable:
    c = np.asarray(c, dtype=np.complex128).reshape(-1)
    total = float(np.sum(np.abs(c) ** 2))
    if abs(total - 1.0) > NORM_TOL:
        raise ValueError(f"sum |c_k|^2 = {total:.15g}, expected 1")
    if labels is None:
        labels = np.arange(c.shape[0])
    return ProbabilityTable(np.abs(c) ** 2, labels)


def expectation_spectral(table: ProbabilityTable) -> float:
    return float(np.dot(table.probs, np.asarray(table.labels, dtype=float)))


def expectation_matrix(op: HermitianOperator, state) -> float:
    s = _as_state(state, op.dim)
    value = np.vdot(s, op.entries @ s)
    scale = max(1.0, float(np.max(np.abs(op.entries))))
    if abs(value.imag) > 1e-12 * scale:
        raise ArithmeticError(f"expectation has imaginary part {value.imag:.3e}")
    return float(value.real)


def expectation_grid(psi: WaveFunction, kind: str, m: float = 1.0) -> float:
    """Rectangle-rule expectation of ``x``, ``p`` or ``p^2 / 2m``."""
    if abs(norm(psi) - 1.0) > NORM_TOL:
        raise ValueError("expectation_grid needs a normalized wave function")
    if kind == "position":
        pos = psi if psi.rep == POSITION else to_position(psi)
        return float(np.sum(pos.nodes * pos.density()) * pos.step)
    if kind not in ("momentum", "kinetic"):
        raise ValueError(f"unknown expectation kind {kind!r}")
    mom = psi if psi.rep == MOMENTUM else to_momentum(psi)
    weight = mom.nodes if kind == "momentum" else mom.nodes**2 / (2.0 * m)
    return float(np.sum(weight * mom.density()) * mom.step)


def _draw(cdf: np.ndarray, seed: int, n: int) -> np.ndarray:
    u = SplitMix64(seed).doubles(n)
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, cdf.shape[0] - 1)


def _cdf(table: ProbabilityTable) -> np.ndarray:
    cdf = np.cumsum(table.probs)
    # last outcome with nonzero weight absorbs rounding slack at the top
    last = int(np.flatnonzero(table.probs)[-1])
    cdf[last:] = 1.0
    return cdf


def sample_outcomes(table: ProbabilityTable, n: int, seed: int, shards: int = 1) -> np.ndarray:
    """Counts per outcome from ``n`` inverse-CDF draws.

    With ``shards > 1`` the draws are split into contiguous blocks (see
    :func:`mirror_born.rng.shard_schedule`), each seeded with the root seed
    advanced to its start.  The summed counts equal the single-stream counts.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    seed = check_seed(seed)
    cdf = _cdf(table)
    counts = np.zeros(len(table), dtype=np.int64)
    for start, count in shard_schedule(int(n), shards):
        if count:
            counts += np.bincount(_draw(cdf, advance(seed, start), count), minlength=len(table))
    return counts


def chi_square(counts, probs) -> tuple[float, int]:
    """Pearson statistic over outcomes with nonzero expected count, and its dof."""
    counts = np.asarray(counts, dtype=float)
    probs = np.asarray(probs, dtype=float)
    n = counts.sum()
    mask = probs > 0
    expected = n * probs[mask]
    stat = float(np.sum((counts[mask] - expected) ** 2 / expected))
    return stat, int(mask.sum()) - 1
