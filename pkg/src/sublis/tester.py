"""Nonadaptive erasure-resilient monotonicity tester.

A single run picks a search point ``s``, walks a randomized binary search
toward ``s`` (querying every pivot) and queries a window of ``ceil(20/eps)``
indices on each side of ``s``. It rejects iff two nonerased answers violate
monotonicity. Every query index is fixed by ``s`` and the pivot draws, never
by an answer.

Runs are simulated in vectorised batches; the random stream is consumed in
the same way whether one run or many are requested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .oracle import OK, QueryOracle, make_rng

DEPTH_CONSTANT = 3  # b in the per-run cap 10 * (b log2 n + 40/eps)


@dataclass
class TesterVerdict:
    decision: str  # "Accept" | "Reject"
    queries_used: int
    witness: tuple | None = None
    runs: int = 1
    capped_runs: int = 0
    run_queries: list = field(default_factory=list, repr=False)

    @property
    def rejected(self) -> bool:
        return self.decision == "Reject"


def window_size(eps: float) -> int:
    return math.ceil(20 / eps)


def run_cap(n: int, eps: float, b: float = DEPTH_CONSTANT) -> int:
    return math.floor(10 * (b * math.log2(max(n, 2)) + 40 / eps))


def repetitions(eps: float) -> int:
    return math.ceil(120 / eps ** 2)


def _plan_runs(n: int, eps: float, runs: int, rng, cap: int):
    """Query index lists for ``runs`` independent runs, truncated at ``cap``.

    Per run the order is: ``s``, the pivots in search order, then the window.
    Returns (flat 1-based indices, run offsets, capped mask).
    """
    s = rng.integers(1, n + 1, size=runs)
    lo = np.ones(runs, dtype=np.int64)
    hi = np.full(runs, n, dtype=np.int64)
    depth = np.zeros(runs, dtype=np.int64)
    ids = np.arange(runs)
    piv_run, piv_pos, piv_idx = [], [], []
    while ids.size:
        # a run whose next pivot would exceed the cap stops drawing
        ids = ids[depth[ids] + 1 < cap]
        if ids.size == 0:
            break
        p = lo[ids] + rng.integers(0, hi[ids] - lo[ids] + 1)
        depth[ids] += 1
        piv_run.append(ids)
        piv_pos.append(depth[ids].copy())
        piv_idx.append(p)
        left = s[ids] <= p
        hi[ids[left]] = p[left]
        lo[ids[~left]] = p[~left]
        ids = ids[p != s[ids]]
    w = window_size(eps)
    off = np.concatenate([np.arange(-w, 0), np.arange(1, w + 1)])
    win = s[:, None] + off[None, :]
    ok = (win >= 1) & (win <= n)
    win_run = np.broadcast_to(np.arange(runs)[:, None], win.shape)[ok]
    win_pos = (depth[:, None] + 1 + np.arange(off.size)[None, :])[ok]
    run = np.concatenate([np.arange(runs)] + piv_run + [win_run])
    pos = np.concatenate([np.zeros(runs, dtype=np.int64)] + piv_pos + [win_pos])
    idx = np.concatenate([s] + piv_idx + [win[ok]])
    order = np.lexsort((pos, run))
    run, idx = run[order], idx[order]
    counts = np.bincount(run, minlength=runs)
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    within = np.arange(run.size) - starts[run]
    keep = within < cap
    capped = counts > cap
    used = np.minimum(counts, cap)
    offsets = np.zeros(runs + 1, dtype=np.int64)
    offsets[1:] = np.cumsum(used)
    return idx[keep], offsets, capped


def _first_violation(idx, vals, status, offsets, capped):
    """Per run, a violating (earlier, later) index pair or None."""
    runs = offsets.size - 1
    run_of = np.repeat(np.arange(runs), np.diff(offsets))
    keep = (status == OK) & ~capped[run_of]
    if not keep.any():
        return [None] * runs
    r, i, v = run_of[keep], idx[keep], vals[keep]
    _, rank = np.unique(v, return_inverse=True)
    order = np.lexsort((rank, i, r))
    r, i, rank = r[order], i[order], rank[order]
    key = r * (int(rank.max()) + 1) + rank
    prefix = np.maximum.accumulate(key)
    bad = np.zeros(key.size, dtype=bool)
    bad[1:] = prefix[:-1] > key[1:]
    found: list = [None] * runs
    for pos in np.flatnonzero(bad):
        k = int(r[pos])
        if found[k] is not None:
            continue
        start = np.searchsorted(r, k)
        seg = slice(start, pos)
        earlier = start + int(np.argmax(key[seg]))
        found[k] = (int(i[earlier]), int(i[pos]))
    return found


def _execute(oracle: QueryOracle, eps: float, runs: int, rng, cap: int):
    idx, offsets, capped = _plan_runs(oracle.n, eps, runs, rng, cap)
    vals, status = oracle.query_many(idx)
    found = _first_violation(idx, vals, status, offsets, capped)
    return found, np.diff(offsets), capped


def er_test_single(oracle: QueryOracle, eps: float, rng=None, cap: int | None = None) -> TesterVerdict:
    """One run of the basic tester (rejects with probability >= eps^2/60 on far inputs)."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    rng = make_rng(rng)
    cap = run_cap(oracle.n, eps) if cap is None else cap
    found, used, capped = _execute(oracle, eps, 1, rng, cap)
    w = found[0]
    return TesterVerdict("Reject" if w else "Accept", int(used[0]), w, 1, int(capped[0]), used.tolist())


def er_test(oracle: QueryOracle, eps: float, rng=None, *, stop_early: bool = True,
            batch: int = 512) -> TesterVerdict:
    """Amplified tester: ``ceil(120/eps^2)`` capped runs, reject iff any run does.

    With ``stop_early`` the remaining batches are skipped once a run has
    rejected; the decision is the same as running all repetitions.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    rng = make_rng(rng)
    total = repetitions(eps)
    cap = run_cap(oracle.n, eps)
    used_all, witness, done, capped_total = [], None, 0, 0
    while done < total:
        k = min(batch, total - done)
        found, used, capped = _execute(oracle, eps, k, rng, cap)
        used_all.extend(used.tolist())
        capped_total += int(capped.sum())
        done += k
        hit = next((w for w in found if w is not None), None)
        if hit is not None and witness is None:
            witness = hit
            if stop_early:
                break
    return TesterVerdict("Reject" if witness else "Accept", int(sum(used_all)), witness,
                         done, capped_total, used_all)
