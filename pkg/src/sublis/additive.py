"""Additive-error LIS estimation for arrays with few distinct values.

The array is cut into ``t`` subarrays. Each subarray is sampled uniformly
with replacement, the values that are frequent in a subarray's sample are
kept as *typical*, and the best nondecreasing choice of one typical value per
subarray is found by dynamic programming. The chosen values extend to an
increasing subsequence whose size is estimated from the sample frequencies.

All sample positions are drawn before any value is read.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from itertools import product

import numpy as np

from .exact import lis_exact
from .oracle import OK, EstimateReport, QueryOracle, make_rng

_BINCOUNT_LIMIT = 20_000_000
_CHUNK = 1 << 20


@dataclass
class SubarraySample:
    subarray_index: int
    indices: np.ndarray  # 1-based positions, a multiset
    values: np.ndarray  # value keys (raw values or dense ranks)
    ok: np.ndarray | None = None  # False where the answer was erased / out of range

    @property
    def size(self) -> int:
        return int(self.indices.size)


@dataclass
class TypicalValueSet:
    subarray_index: int
    values: np.ndarray  # ascending
    densities: np.ndarray

    def __len__(self):
        return int(self.values.size)

    def as_dict(self) -> dict:
        return dict(zip(self.values.tolist(), self.densities.tolist()))


@dataclass
class PseudoSolution:
    support: list
    values: list
    score: float


@dataclass
class InsufficientSample:
    """A bucket received fewer presampled points than the estimator needs."""

    bucket: int
    have: int
    need: int

    estimate = 0.0


@dataclass
class AdditiveParams:
    eps: float
    r: int
    delta: float
    t: int
    s: int
    threshold: float

    @classmethod
    def make(cls, n: int, r: int, eps: float, large_sample: bool = False) -> "AdditiveParams":
        if not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if r < 1:
            raise ValueError("r must be at least 1")
        delta = eps / 8
        t = math.ceil(4 * r / eps)
        if large_sample:
            s = math.ceil(12 / delta ** 2 * math.log(12 * t * r))
        else:
            s = math.ceil(1 / delta ** 2 * math.log(6 * t * r))
        return cls(eps, r, delta, t, s, eps / 4 - delta / 2)


def subarray_bounds(lo: int, hi: int, t: int) -> np.ndarray:
    """Start offsets of ``t`` near-equal pieces of ``[lo, hi]`` plus the end.

    Piece ``i`` (0-based) covers ``lo + b[i] .. lo + b[i+1] - 1``.
    """
    length = hi - lo + 1
    return (np.arange(t + 1, dtype=np.int64) * length) // t


def find_typical(sample, threshold: float, subarray_index: int = 0) -> TypicalValueSet:
    """Values whose frequency in ``sample`` is at least ``threshold``."""
    if isinstance(sample, SubarraySample):
        vals = sample.values if sample.ok is None else sample.values[sample.ok]
        size, subarray_index = sample.size, sample.subarray_index
    else:
        vals = np.asarray(sample)
        size = vals.size
    if size == 0:
        raise ValueError("cannot find typical values of an empty sample")
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie in (0, 1)")
    uniq, counts = np.unique(vals, return_counts=True)
    dens = counts / size
    keep = dens >= threshold
    return TypicalValueSet(subarray_index, uniq[keep], dens[keep])


def best_pseudo_solution(typicals, weights=None, reconstruct: bool = True) -> PseudoSolution:
    """Maximum-weight nondecreasing choice of at most one typical value per subarray.

    ``weights[i]`` scales subarray i's densities (default 1, giving the plain
    density sum). Runs a DP over the merged sorted value list where ``f[k]``
    is the best total using values up to the k-th one.
    """
    typicals = list(typicals)
    if weights is None:
        weights = np.ones(len(typicals))
    nonempty = [ts for ts in typicals if len(ts)]
    if not nonempty:
        return PseudoSolution([], [], 0.0)
    universe = np.unique(np.concatenate([ts.values for ts in nonempty]))
    f = np.zeros(universe.size)
    snaps = []
    for ts, w in zip(typicals, weights):
        if not len(ts):
            if reconstruct:
                snaps.append(None)
            continue
        pos = np.searchsorted(universe, ts.values)
        cand = f[pos] + w * ts.densities
        g = f.copy()
        g[pos] = np.maximum(g[pos], cand)
        g = np.maximum.accumulate(g)
        if reconstruct:
            snaps.append((f, pos))
        f = g
    total = float(f[-1])
    if not reconstruct:
        return PseudoSolution([], [], total)
    # walk back: at each subarray either skip it or take a value matching the DP
    support, chosen = [], []
    k = universe.size - 1
    cur = f
    for i in range(len(typicals) - 1, -1, -1):
        snap = snaps[i]
        if snap is None:
            continue
        prev, pos = snap
        if cur[k] <= prev[k]:
            cur = prev
            continue
        ts = typicals[i]
        w = weights[i]
        for p, d in zip(pos.tolist(), ts.densities.tolist()):
            if p <= k and math.isclose(prev[p] + w * d, cur[k], rel_tol=1e-12, abs_tol=1e-12):
                support.append(i)
                chosen.append(universe[p].item())
                k = p
                break
        else:  # pragma: no cover - guarded by DP construction
            raise AssertionError("pseudo-solution reconstruction failed")
        cur = prev
    support.reverse()
    chosen.reverse()
    score = float(sum(weights[i] * typicals[i].as_dict()[v] for i, v in zip(support, chosen)))
    return PseudoSolution(support, chosen, score)


def enumerate_pseudo_solutions(typicals):
    """Every pseudo-solution as (support, values, score); exhaustive, for tests."""
    options = [[None] + list(zip(ts.values.tolist(), ts.densities.tolist())) for ts in typicals]
    for pick in product(*options):
        support = [i for i, p in enumerate(pick) if p is not None]
        vals = [pick[i][0] for i in support]
        if all(a <= b for a, b in zip(vals, vals[1:])):
            yield support, vals, sum(pick[i][1] for i in support)


def _bucket_typicals(keys, ok, t: int, s: int, threshold: float):
    """Typical sets per bucket; point ``k`` belongs to bucket ``k // s``."""
    if not ok.any():
        return [TypicalValueSet(i, np.zeros(0), np.zeros(0)) for i in range(t)]
    if np.issubdtype(keys.dtype, np.integer):
        all_ok = bool(ok.all())
        valid = keys if all_ok else keys[ok]
        kmin, kmax = int(valid.min()), int(valid.max())
        span = kmax - kmin + 2  # last bin collects rejected answers
        if span * t <= _BINCOUNT_LIMIT:
            flat = keys.astype(np.int64, copy=True)
            if not all_ok:
                flat[~ok] = kmax + 1
            rows = flat.reshape(t, s)
            rows += (np.arange(t, dtype=np.int64) * span - kmin)[:, None]
            counts = np.bincount(flat, minlength=t * span).reshape(t, span)[:, :-1]
            hits = counts >= threshold * s
            out = []
            for i in range(t):
                hit = np.flatnonzero(hits[i])
                out.append(TypicalValueSet(i, hit + kmin, counts[i, hit] / s))
            return out
    bucket = np.repeat(np.arange(t), s)[ok]
    keys = keys[ok]
    order = np.lexsort((keys, bucket))
    b, k = bucket[order], keys[order]
    edge = np.ones(b.size, dtype=bool)
    edge[1:] = (b[1:] != b[:-1]) | (k[1:] != k[:-1])
    starts = np.flatnonzero(edge)
    cnt = np.diff(np.append(starts, b.size))
    keep = cnt >= threshold * s
    ub, uk, uc = b[starts][keep], k[starts][keep], cnt[keep]
    out = []
    for i in range(t):
        sel = ub == i
        out.append(TypicalValueSet(i, uk[sel], uc[sel] / s))
    return out


def _draw_offsets(rng, lengths, s: int) -> np.ndarray:
    """Uniform offsets, ``s`` per row, row i below ``lengths[i]``."""
    offs = np.empty((lengths.size, s), dtype=np.int32)
    for length in np.unique(lengths):
        rows = np.flatnonzero(lengths == length)
        offs[rows] = rng.integers(0, length, size=(rows.size, s), dtype=np.int32)
    return offs


def _exhaustive(oracle: QueryOracle) -> tuple[float, int]:
    idx = np.arange(oracle.lo, oracle.hi + 1)
    vals, status = oracle.query_many(idx)
    return float(lis_exact(vals[status == OK])), idx.size


def estimate_lis_additive(oracle: QueryOracle, r: int, eps: float, rng=None, *,
                          large_sample: bool = False, use_ranks: bool = True) -> EstimateReport:
    """Estimate the LIS length of the oracle's view to within ``eps * length``.

    ``r`` bounds the number of distinct values in the view. When the
    subarray count would exceed the view length the whole view is read once
    and the LIS computed exactly.
    """
    t0 = time.perf_counter()
    rng = make_rng(rng)
    n = oracle.length
    prm = AdditiveParams.make(n, r, eps, large_sample)
    before = oracle.count
    params = dict(eps=eps, r=r, t=prm.t, s=prm.s, delta=prm.delta, large_sample=large_sample)
    if 4 * r / eps > n:
        est, _ = _exhaustive(oracle)
        params.update(exhaustive=True)
        return EstimateReport(est, oracle.count - before, params,
                              diagnostics={"mode": "exhaustive"},
                              wall_time=time.perf_counter() - t0)
    t, s = prm.t, prm.s
    bounds = subarray_bounds(oracle.lo, oracle.hi, t)
    lengths = np.diff(bounds)
    offs = _draw_offsets(rng, lengths, s)
    # every offset is fixed above; values are read below in cache-sized chunks
    typ = []
    step = max(1, _CHUNK // s)
    for c0 in range(0, t, step):
        rows = slice(c0, min(t, c0 + step))
        idx = (oracle.lo + bounds[rows][:, None] + offs[rows]).ravel()
        keys, status = oracle.query_many(idx, ranks=use_ranks)
        k = rows.stop - rows.start
        part = _bucket_typicals(keys, status == OK, k, s, prm.threshold)
        for ts in part:
            ts.subarray_index += c0
        typ.extend(part)
    sol = best_pseudo_solution(typ, weights=lengths, reconstruct=False)
    diagnostics = {
        "mode": "sampled",
        "typical_sizes": [len(ts) for ts in typ],
        "score": sol.score,
    }
    return EstimateReport(min(sol.score, float(n)), oracle.count - before, params,
                          diagnostics=diagnostics, wall_time=time.perf_counter() - t0)


def presample_need(r: int, eps: float) -> tuple[int, int]:
    """(subarray count, minimum points per subarray) for presampled estimation."""
    prm = AdditiveParams.make(1, r, eps)
    return prm.t, prm.s


def estimate_lis_presampled(indices, keys, ok, lo: int, hi: int, r: int, eps: float):
    """Estimate the LIS of view ``[lo, hi]`` from points already queried there.

    ``indices`` are 1-based positions drawn uniformly and independently from
    the view, ``keys`` their values (or ranks), and ``ok`` marks answers
    that are neither erased nor outside the view's value interval. Points are
    bucketed by subarray; each bucket must reach the per-subarray sample
    size, otherwise an :class:`InsufficientSample` is returned. Buckets are
    truncated (in draw order) to the smallest bucket's size.
    """
    indices = np.asarray(indices, dtype=np.int64)
    keys = np.asarray(keys)
    ok = np.asarray(ok, dtype=bool)
    length = hi - lo + 1
    t, need = presample_need(r, eps)
    if t > length:
        raise ValueError("view too short for presampled estimation; read it exhaustively")
    bounds = subarray_bounds(lo, hi, t)
    bucket = np.searchsorted(bounds, indices - lo, side="right") - 1
    counts = np.bincount(bucket, minlength=t)
    low = int(np.argmin(counts))
    if counts[low] < need:
        return InsufficientSample(low, int(counts[low]), need)
    s = int(counts.min())
    order = np.argsort(bucket, kind="stable")
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    rank_in = np.arange(order.size) - starts[bucket[order]]
    take = order[rank_in < s]
    take.sort()
    delta = eps / 8
    typ = _bucket_typicals(keys[take], ok[take], t, s, eps / 4 - delta / 2)
    sol = best_pseudo_solution(typ, weights=np.diff(bounds), reconstruct=False)
    return min(sol.score, float(length))


def lis_mass_in_nice_dense(values, lis_positions, t: int, max_values: int, lam: float) -> dict:
    """Split a fixed LIS by the subarray it falls in.

    A subarray is *nice* when the LIS takes at most ``max_values`` distinct
    values inside it and *dense* when it holds at least ``lam`` times its
    length of LIS positions. Returns the LIS size and the mass in subarrays
    that are both.
    """
    values = np.asarray(values)
    n = values.size
    pos = np.asarray(lis_positions, dtype=np.int64)
    bounds = subarray_bounds(1, n, t)
    which = np.searchsorted(bounds, pos, side="right") - 1
    kept = 0
    for i in range(t):
        here = pos[which == i]
        nice = np.unique(values[here]).size <= max_values
        dense = here.size >= lam * (bounds[i + 1] - bounds[i])
        if nice and dense:
            kept += here.size
    return {"lis": int(pos.size), "kept": int(kept), "lost": int(pos.size - kept)}
