"""Classical two-ball coincidence experiment.

Ball 1 lands in a bin drawn from ``p1``, ball 2 (the "detector" ball) in a bin
drawn from ``p2``.  Only trials where both land in the same bin are recorded,
so the observed bin distribution is the normalized product ``p1 * p2``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from mirror_born.rng import SplitMix64, advance, check_seed, derive_stream, shard_schedule

SUM_TOL = 1e-12
BALL1_STREAM = 0x62616C6C31  # "ball1"
BALL2_STREAM = 0x62616C6C32  # "ball2"


class UndefinedConditionalError(ValueError):
    """The two distributions have disjoint support, so no coincidence can occur."""


def _check_table(name: str, p) -> np.ndarray:
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size < 2:
        raise ValueError(f"{name} needs at least 2 bins")
    if not np.all(np.isfinite(p)) or np.any(p < 0):
        raise ValueError(f"{name} entries must be finite and non-negative")
    if abs(p.sum() - 1.0) > SUM_TOL:
        raise ValueError(f"{name} sums to {p.sum():.17g}, not 1")
    return p


@dataclass(frozen=True)
class TwoBallConfig:
    p1: np.ndarray
    p2: np.ndarray
    n: int
    seed: int = 1

    def __post_init__(self):
        p1 = _check_table("p1", self.p1)
        p2 = _check_table("p2", self.p2)
        if p1.size != p2.size:
            raise ValueError(f"p1 has {p1.size} bins but p2 has {p2.size}")
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "seed", check_seed(self.seed))

    @property
    def bins(self) -> int:
        return self.p1.size


@dataclass(frozen=True)
class TwoBallResult:
    n: int
    coincidences: int
    counts: np.ndarray
    empirical_coincidence_rate: float
    empirical_conditional: np.ndarray
    exact_rate: float
    exact_conditional: np.ndarray
    tv_distance: float | None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "coincidences": self.coincidences,
            "empirical_coincidence_rate": self.empirical_coincidence_rate,
            "exact_rate": self.exact_rate,
            "tv_distance": self.tv_distance,
            "empirical_conditional": self.empirical_conditional.tolist(),
            "exact_conditional": self.exact_conditional.tolist(),
        }


def product_distribution(p1, p2) -> tuple[float, np.ndarray]:
    """Coincidence rate ``sum p1 p2`` and the conditional bin table ``p1 p2 / rate``."""
    p1 = _check_table("p1", p1)
    p2 = _check_table("p2", p2)
    if p1.size != p2.size:
        raise ValueError(f"p1 has {p1.size} bins but p2 has {p2.size}")
    joint = p1 * p2
    rate = float(joint.sum())
    if rate == 0.0:
        raise UndefinedConditionalError("p1 and p2 have disjoint support; coincidence rate is 0")
    return rate, joint / rate


def _bins(p: np.ndarray, seed: int, count: int) -> np.ndarray:
    cdf = np.cumsum(p)
    cdf[int(np.flatnonzero(p)[-1]):] = 1.0
    u = SplitMix64(seed).doubles(count)
    return np.minimum(np.searchsorted(cdf, u, side="right"), p.size - 1)


def coincidence_counts(cfg: TwoBallConfig, shards: int = 1) -> np.ndarray:
    """Per-bin coincidence counts; sharded runs reproduce the single-stream result."""
    s1 = derive_stream(cfg.seed, BALL1_STREAM)
    s2 = derive_stream(cfg.seed, BALL2_STREAM)
    counts = np.zeros(cfg.bins, dtype=np.int64)
    for start, count in shard_schedule(cfg.n, shards):
        if not count:
            continue
        b1 = _bins(cfg.p1, advance(s1, start), count)
        b2 = _bins(cfg.p2, advance(s2, start), count)
        counts += np.bincount(b1[b1 == b2], minlength=cfg.bins)
    return counts


def run_two_ball(cfg: TwoBallConfig, shards: int = 1) -> TwoBallResult:
    exact_rate, exact_cond = product_distribution(cfg.p1, cfg.p2)
    counts = coincidence_counts(cfg, shards)
    hits = int(counts.sum())
    if hits:
        emp_cond = counts / hits
        tv = 0.5 * float(np.sum(np.abs(emp_cond - exact_cond)))
    else:
        emp_cond = np.zeros(cfg.bins)
        tv = None
    return TwoBallResult(
        n=cfg.n,
        coincidences=hits,
        counts=counts,
        empirical_coincidence_rate=hits / cfg.n,
        empirical_conditional=emp_cond,
        exact_rate=exact_rate,
        exact_conditional=exact_cond,
        tv_distance=tv,
    )


def two_ball_csv(result: TwoBallResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("bin", "empirical_conditional", "exact_conditional"))
    for b, (e, x) in enumerate(zip(result.empirical_conditional, result.exact_conditional)):
        writer.writerow((b, format(float(e), ".17g"), format(float(x), ".17g")))
    return buf.getvalue()
