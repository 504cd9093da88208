"""Per-sample seed derivation and an order-preserving worker pool.

Sample ``index`` of statistic ``stream`` under master seed ``seed`` uses the
configuration seed ``derive_seed(seed, stream, index)``: the first 64-bit
word of ``SeedSequence(seed, spawn_key=(crc32(stream), index))``.  Any single
sample can therefore be replayed without running the others.
"""

from __future__ import annotations

import os
import zlib
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np


def stream_id(stream: str) -> int:
    return zlib.crc32(stream.encode())


def derive_seed(seed: int, stream: str, index: int) -> int:
    seq = np.random.SeedSequence(int(seed), spawn_key=(stream_id(stream), int(index)))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def default_workers() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def _run_chunk(func, chunk):
    return [func(i) for i in chunk]


def map_samples(func, count: int, workers: int | None = 1, chunk: int = 64) -> list:
    """``[func(i) for i in range(count)]``, optionally spread over processes.

    The result list is always in index order, so any reduction over it is
    independent of the worker count.  ``func`` must be picklable when
    ``workers > 1``.
    """
    if workers is None:
        workers = default_workers()
    if workers <= 1 or count <= chunk:
        return [func(i) for i in range(count)]
    chunks = [range(a, min(a + chunk, count)) for a in range(0, count, chunk)]
    out = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(partial(_run_chunk, func), chunks):
            out.extend(part)
    return out
