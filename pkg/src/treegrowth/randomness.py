"""Seeded random streams and distribution checks.

Streams are derived from a master seed plus an integer path via
``SeedSequence(master_seed, spawn_key=path)``, so every trial of every
experiment gets an independent, reproducible generator no matter how work
is scheduled across processes.

Exponential variates are drawn by inverse CDF (-log(1 - U)) rather than
the generator's ziggurat method: the same uniform stream then yields the
same weights everywhere, which the law-equivalence and replay tests rely
on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def stream_for(master_seed: int, *path: int) -> np.random.Generator:
    """Independent generator addressed by (master_seed, path)."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(path))
    return np.random.Generator(np.random.Philox(ss))


def sample_exponential(stream: np.random.Generator, size=None, rate: float = 1.0):
    u = stream.random(size)
    return -np.log1p(-u) / rate


def sample_erlang(stream: np.random.Generator, k: int, size: int) -> np.ndarray:
    """Sum of k unit-rate exponentials."""
    out = np.zeros(size)
    for _ in range(k):
        out += sample_exponential(stream, size)
    return out


def sample_two_stage_min(
    stream: np.random.Generator, a: int, b: int, size: int
) -> np.ndarray:
    """Minimum root-to-leaf weight in the two-level tree with branching (a, b).

    The root has a children, each child has b leaf children, and every edge
    carries an independent unit-rate exponential weight.  Sampled literally,
    in chunks to bound memory.
    """
    out = np.empty(size)
    chunk = max(1, (1 << 22) // (a * b))
    for start in range(0, size, chunk):
        c = min(chunk, size - start)
        child = sample_exponential(stream, (c, a))
        leaf = sample_exponential(stream, (c, a, b))
        out[start : start + c] = (child + leaf.min(axis=2)).min(axis=1)
    return out


# -- closed-form bounds -------------------------------------------------------


def erlang_head_bound(k: int, d: float) -> float:
    """Upper bound on Pr{Erlang(k, 1) <= k / d}."""
    return (math.e / d) ** k


def erlang_tail_bound(k: int, t: float) -> float:
    """Upper bound on Pr{Erlang(k, 1) >= k * t}."""
    return math.exp(k - k * t / 2.0)


def two_stage_tail_bound(a: int, b: int, t: float) -> float:
    """Upper bound on Pr{two-stage minimum > t}."""
    return math.exp(-a * t / 64.0) + math.exp(-a * b * t * t / 1024.0)


def two_stage_sum_threshold(a: int, b: int, m: int) -> float:
    """Deviation threshold for a sum of m independent two-stage minima."""
    return 3.0 * m * (64.0 / a + 1024.0 / math.sqrt(a * b))


def two_stage_sum_bound(m: int) -> float:
    """Upper bound on the probability of exceeding the sum threshold."""
    return math.exp(-m / 9.0)


# -- empirical check battery -----------------------------------------------------


@dataclass(frozen=True)
class TailCheckRow:
    threshold: float
    empirical: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class TailCheckReport:
    name: str
    trials: int
    rows: tuple[TailCheckRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)


def _row(threshold: float, phat: float, bound: float, trials: int) -> TailCheckRow:
    # Three-sigma slack keeps a true-but-tight bound from failing on noise.
    slack = 3.0 * math.sqrt(phat * (1.0 - phat) / trials)
    capped = min(bound, 1.0)
    return TailCheckRow(threshold, phat, capped, phat <= capped + slack)


def check_erlang_head(
    stream: np.random.Generator, k: int, d: float, trials: int
) -> TailCheckReport:
    x = sample_erlang(stream, k, trials)
    t = k / d
    phat = float(np.mean(x <= t))
    row = _row(t, phat, erlang_head_bound(k, d), trials)
    return TailCheckReport(f"erlang_head_k{k}_d{d:g}", trials, (row,))


def check_erlang_tail(
    stream: np.random.Generator, k: int, t_values, trials: int
) -> TailCheckReport:
    x = sample_erlang(stream, k, trials)
    rows = []
    for t in t_values:
        phat = float(np.mean(x >= k * t))
        rows.append(_row(k * t, phat, erlang_tail_bound(k, t), trials))
    return TailCheckReport(f"erlang_tail_k{k}", trials, tuple(rows))


def check_two_stage_tail(
    stream: np.random.Generator, a: int, b: int, t_values, trials: int
) -> TailCheckReport:
    y = sample_two_stage_min(stream, a, b, trials)
    rows = []
    for t in t_values:
        phat = float(np.mean(y > t))
        rows.append(_row(float(t), phat, two_stage_tail_bound(a, b, t), trials))
    return TailCheckReport(f"two_stage_tail_a{a}_b{b}", trials, tuple(rows))


def check_two_stage_sum(
    stream: np.random.Generator, a: int, b: int, m: int, trials: int
) -> TailCheckReport:
    total = np.zeros(trials)
    for _ in range(m):
        total += sample_two_stage_min(stream, a, b, trials)
    thr = two_stage_sum_threshold(a, b, m)
    phat = float(np.mean(total >= thr))
    row = _row(thr, phat, two_stage_sum_bound(m), trials)
    return TailCheckReport(f"two_stage_sum_a{a}_b{b}_m{m}", trials, (row,))
