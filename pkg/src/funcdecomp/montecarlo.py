"""Unbiased sampling estimator of the averaged sequential decomposition for
dimensions where enumerating all d! activation orders is infeasible.

Activation orders are drawn uniformly from counter-based random streams:
sample chunk ``c`` of a run with seed ``s`` always uses the Philox stream
keyed by ``(s, c)``, so the estimate is reproducible bit for bit no matter
how many workers evaluate the chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import NonzeroOriginError, Point, as_point, project
from .decomp import ORIGIN_TOLERANCE
from .expr import FunctionHandle

_CHUNK = 256  # samples per random stream; fixed, part of the reproducibility contract


@dataclass(frozen=True)
class EstimatorReport:
    """Sampling estimate of the averaged sequential contributions.

    Every sampled order telescopes exactly to the function value, so the
    estimates do too; the standard errors are per coordinate (sample
    standard deviation over the drawn orders divided by sqrt(n)).
    """

    estimate: tuple[float, ...]
    standard_error: tuple[float, ...]
    n_samples: int
    seed: int

    @property
    def total(self) -> float:
        return math.fsum(self.estimate)


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, chunk_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _chunk_contributions(fn: FunctionHandle, x: Point, base: float,
                         memo: dict[int, float], seed: int, chunk_index: int,
                         size: int) -> np.ndarray:
    """Per-sample contribution matrix (size x d) for one chunk."""
    d = fn.d
    rng = _chunk_rng(seed, chunk_index)
    perms = rng.permuted(np.tile(np.arange(d), (size, 1)), axis=1)
    prefix = np.bitwise_or.accumulate(np.left_shift(1, perms), axis=1)
    for mask in np.unique(prefix):
        m = int(mask)
        if m not in memo:
            memo[m] = fn(project(x, m))
    at_step = np.array([[memo[int(m)] for m in row] for row in prefix])
    before = np.concatenate([np.full((size, 1), base), at_step[:, :-1]], axis=1)
    out = np.empty((size, d))
    np.put_along_axis(out, perms, at_step - before, axis=1)
    return out


def estimate_as(fn: FunctionHandle, x: Sequence[float], n: int, seed: int,
                workers: int = 1) -> EstimatorReport:
    """Estimate the averaged sequential contributions from ``n`` uniformly
    sampled activation orders.

    Requires the function to vanish at the origin and ``n >= 2`` (a single
    sample has no variance estimate).  Fixed ``(fn, x, n, seed)`` gives a
    bitwise-identical report for any ``workers`` count.
    """
    point = as_point(x, fn.d)
    d = fn.d
    if n < 2:
        raise ValueError(f"need at least 2 samples for a standard error, got {n}")
    base = fn(project(point, 0))
    if abs(base) > ORIGIN_TOLERANCE:
        raise NonzeroOriginError(
            f"estimate_as needs F to vanish at the origin, got {base!r}; "
            "decompose F - F(0) and split F(0) separately"
        )
    seed = int(seed)
    if d == 1:
        # Only one activation order exists: the estimate is exact.
        value = fn(point) - base
        return EstimatorReport((value,), (0.0,), n, seed)

    memo: dict[int, float] = {}
    sizes = [_CHUNK] * (n // _CHUNK)
    if n % _CHUNK:
        sizes.append(n % _CHUNK)

    def run_chunk(c: int) -> np.ndarray:
        return _chunk_contributions(fn, point, base, memo, seed, c, sizes[c])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(run_chunk, range(len(sizes))))
    else:
        chunks = [run_chunk(c) for c in range(len(sizes))]
    samples = np.vstack(chunks)

    estimate = samples.mean(axis=0)
    se = samples.std(axis=0, ddof=1) / math.sqrt(n)
    return EstimatorReport(
        tuple(float(v) for v in estimate),
        tuple(float(v) for v in se),
        n, seed,
    )
