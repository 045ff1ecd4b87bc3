"""Range partitioning and process-pool fan-out for the exhaustive checks."""

import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor


def split_range(start, stop, parts):
    """Split ``range(start, stop)`` into at most ``parts`` contiguous pieces."""
    parts = max(1, parts)
    total = stop - start
    if total <= 0:
        return []
    step, extra = divmod(total, parts)
    out = []
    lo = start
    for k in range(parts):
        hi = lo + step + (1 if k < extra else 0)
        if hi > lo:
            out.append((lo, hi))
        lo = hi
    return out


def run_chunks(fn, chunks, jobs=1):
    """Apply ``fn(*chunk)`` to every chunk; results come back in chunk order.

    With ``jobs <= 1`` everything runs in-process.  ``fn`` must be a
    module-level function so it can be pickled.
    """
    chunks = list(chunks)
    if jobs <= 1 or len(chunks) <= 1:
        return [fn(*c) for c in chunks]
    ctx = mp.get_context("fork")
    with ProcessPoolExecutor(max_workers=min(jobs, len(chunks)), mp_context=ctx) as pool:
        futures = [pool.submit(fn, *c) for c in chunks]
        return [f.result() for f in futures]
