"""Multiplicative LIS estimation with about sqrt(r) queries.

Pipeline: a global layering, a box grid, finer per-subarray layering into
dense cells, removal of large cell antichains, a chain cover of what is left,
and a per-chain estimate from its horizontal and vertical blocks.

Every sample location is drawn from the seed before the first query; all
reads then happen in one batch. Stages decide only which already-read
points feed which sub-estimate. Whenever a prescribed sample would be at
least as long as the view it samples, the view is read once instead and
the corresponding quantity is computed exactly.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..additive import InsufficientSample, estimate_lis_presampled
from ..exact import lis_exact
from ..oracle import OK, EstimateReport, QueryOracle, make_rng, spawn
from .chains import Block, build_cell_poset, chain_cover, reduce_antichains, split_chain
from .grid import Grid, Layering, cells_for_subarray, gridding, layering, subarray_starts


@dataclass
class SqrtParams:
    n: int
    r: int
    lam: float
    eps: float
    t: float = 8.0
    c: float = 2.0
    beta: float = 0.0
    y: int = 0
    x: int = 0
    tau: int = 0
    m: int = 0
    r_prime: int = 0
    nu: float = 0.0
    ell_layer: int = 0
    ell_grid: int = 0
    y_fine: int = 0
    t_fine: int = 0
    ell_fine: int = 0
    seg_len: int = 0
    num_segments: int = 0
    num_vertical: int = 0
    s_block: int = 0

    @classmethod
    def make(cls, n: int, r: int, lam: float, eps: float, *, t: float = 8.0, c: float = 2.0,
             beta: float | None = None) -> "SqrtParams":
        if not 0 < lam <= 1:
            raise ValueError("lambda must lie in (0, 1]")
        if not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if r < 1 or n < 1:
            raise ValueError("n and r must be positive")
        p = cls(n, r, lam, eps, t, c)
        root = math.sqrt(r)
        p.beta = eps ** 3 * lam if beta is None else beta
        p.y = max(2, math.ceil(root / eps))
        p.x = min(n, max(1, math.ceil(eps * root)))
        p.tau = math.ceil(5 / lam)
        p.m = math.ceil(eps / lam ** 2)
        ln_tau = math.log(p.tau)
        p.r_prime = math.ceil(100 * root * ln_tau / lam ** 2)
        p.nu = eps * lam ** 2
        p.ell_layer = math.ceil(t * p.y * math.log(p.y))
        p.ell_grid = math.ceil(t / p.beta * math.log(p.x / p.beta))
        p.y_fine = max(2, math.ceil(1 / p.beta))
        p.t_fine = math.ceil(c * math.log(p.x / p.beta))
        p.ell_fine = math.ceil(p.t_fine * p.y_fine * math.log(p.y_fine))
        p.seg_len = min(2 * p.m, p.x)
        p.num_segments = math.ceil(t * ln_tau ** 2)
        p.num_vertical = math.ceil(c * ln_tau)
        rp = p.r_prime
        p.s_block = math.ceil(p.m * ln_tau / p.beta * rp / (eps ** 3 * lam ** 6)
                              * math.log(rp ** 2 / (eps * lam)))
        return p

    def as_dict(self) -> dict:
        return dict(self.__dict__)


# --- sampling plan ----------------------------------------------------------

@dataclass
class _Draw:
    """Sample for one view: exhaustive read of [lo, hi] or ``points`` indices."""

    lo: int
    hi: int
    points: np.ndarray | None = None  # None means exhaustive

    @property
    def exhaustive(self) -> bool:
        return self.points is None

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1 if self.points is None else int(self.points.size)


def _draw(rng, lo: int, hi: int, size: int) -> _Draw:
    if size >= hi - lo + 1:
        return _Draw(lo, hi)
    return _Draw(lo, hi, rng.integers(lo, hi + 1, size=size))


@dataclass
class _Plan:
    layer: _Draw
    grid: list
    fine: list
    seg_starts: np.ndarray
    segments: list
    vert_ids: np.ndarray
    vertical: list

    def draws(self):
        yield self.layer
        yield from self.grid
        yield from self.fine
        yield from self.segments
        yield from self.vertical


def _make_plan(p: SqrtParams, starts: np.ndarray, rng) -> _Plan:
    n, x = p.n, p.x
    streams = spawn(rng, 5)
    sub = [(int(starts[i]) + 1, int(starts[i + 1])) for i in range(x)]
    layer = _draw(streams[0], 1, n, p.ell_layer)
    grid = [_draw(streams[1], lo, hi, p.ell_grid) for lo, hi in sub]
    fine = [_draw(streams[2], lo, hi, p.ell_fine) for lo, hi in sub]
    n_starts = x - p.seg_len + 1
    seg_starts = streams[3].integers(0, n_starts, size=p.num_segments)
    segments = [_draw(streams[3], sub[s][0], sub[s + p.seg_len - 1][1], p.s_block)
                for s in seg_starts.tolist()]
    vert_ids = streams[4].integers(0, x, size=p.num_vertical)
    vertical = [_draw(streams[4], sub[i][0], sub[i][1], p.s_block) for i in vert_ids.tolist()]
    return _Plan(layer, grid, fine, seg_starts, segments, vert_ids, vertical)


class _Readings:
    """Answers for a plan, fetched in one batch of queries.

    Exhaustive views are merged and each of their positions is read once;
    sampled points are read individually.
    """

    def __init__(self, oracle: QueryOracle, plan: _Plan):
        n = oracle.n
        covered = np.zeros(n + 2, dtype=np.int64)
        for d in plan.draws():
            if d.exhaustive:
                covered[d.lo] += 1
                covered[d.hi + 1] -= 1
        full_idx = np.flatnonzero(np.cumsum(covered)[: n + 1] > 0)
        self.full_vals = np.full(n + 1, np.nan)
        self.full_ok = np.zeros(n + 1, dtype=bool)
        if full_idx.size:
            v, st = oracle.query_many(full_idx)
            self.full_vals[full_idx] = v
            self.full_ok[full_idx] = st == OK
        sampled = [d for d in plan.draws() if not d.exhaustive]
        self._sampled = {}
        if sampled:
            v, st = oracle.query_many(np.concatenate([d.points for d in sampled]))
            pos = 0
            for d in sampled:
                k = d.points.size
                self._sampled[id(d)] = (v[pos:pos + k], st[pos:pos + k] == OK)
                pos += k

    def get(self, d: _Draw):
        """(indices, values, usable) for a draw; erased answers are unusable."""
        if d.exhaustive:
            idx = np.arange(d.lo, d.hi + 1)
            return idx, self.full_vals[idx], self.full_ok[idx]
        v, ok = self._sampled[id(d)]
        return d.points, v, ok


# --- block estimates -------------------------------------------------------

def _block_view(grid: Grid, block: Block) -> tuple[int, int, float, float]:
    subs, lays = block.subarrays, block.layers
    lo = grid.subarray_range(subs[0])[0]
    hi = grid.subarray_range(subs[-1])[1]
    a, b = grid.layers.span(lays[0], lays[-1])
    return lo, hi, a, b


def _block_lis(d: _Draw, data: _Readings, lo: int, hi: int, a: float, b: float,
               p: SqrtParams, log: list) -> float:
    """LIS of view ``[lo, hi]`` with values in ``(a, b]`` from draw ``d``."""
    idx, vals, ok = data.get(d)
    inside = (idx >= lo) & (idx <= hi)
    idx, vals, ok = idx[inside], vals[inside], ok[inside]
    ok = ok & (vals > a) & (vals <= b)
    if d.exhaustive:
        return float(lis_exact(vals[ok]))
    try:
        est = estimate_lis_presampled(idx, vals, ok, lo, hi, p.r_prime, p.nu)
    except ValueError:  # view shorter than the estimator's subarray count
        log.append(("short-view", lo, hi))
        return 0.0
    if isinstance(est, InsufficientSample):
        log.append(("insufficient", lo, hi, est.have, est.need))
        return 0.0
    return float(est)


def estimate_horizontal(C_H: list[Block], grid: Grid, plan: _Plan, data: _Readings,
                        p: SqrtParams, log: list | None = None) -> float:
    """Single-valued blocks from grid densities plus sampled short multi-valued blocks.

    Each short multi-valued block estimated inside a sampled segment is
    weighted by the inverse of its chance of being contained in a segment.
    """
    log = [] if log is None else log
    single_part = 0.0
    short = []
    for blk in C_H:
        j = blk.layers[0]
        if grid.layers.single[j]:
            single_part += sum(grid.density[i, j] * grid.subarray_length(i) for i, _ in blk.boxes)
        elif blk.width <= p.m:
            short.append(blk)
    multi_part = 0.0
    n_starts = grid.x - p.seg_len + 1
    for s, d in zip(plan.seg_starts.tolist(), plan.segments):
        for blk in short:
            subs = blk.subarrays
            if subs[0] < s or subs[-1] > s + p.seg_len - 1:
                continue
            lo_s = max(0, subs[-1] - p.seg_len + 1)
            hi_s = min(subs[0], n_starts - 1)
            cnt = hi_s - lo_s + 1
            lo, hi, a, b = _block_view(grid, blk)
            est = _block_lis(d, data, lo, hi, a, b, p, log)
            multi_part += est * n_starts / (p.num_segments * cnt)
    return single_part + multi_part


def estimate_vertical(C_V: list[Block], grid: Grid, plan: _Plan, data: _Readings,
                      p: SqrtParams, log: list | None = None) -> float:
    """Scaled sum over sampled subarrays; chains with few blocks count as 0."""
    log = [] if log is None else log
    if len(C_V) < p.nu * grid.x or not C_V:
        return 0.0
    by_sub = {blk.subarrays[0]: blk for blk in C_V}
    total = 0.0
    for i, d in zip(plan.vert_ids.tolist(), plan.vertical):
        blk = by_sub.get(i)
        if blk is None:
            continue
        lo, hi, a, b = _block_view(grid, blk)
        total += _block_lis(d, data, lo, hi, a, b, p, log)
    return total * grid.x / len(plan.vertical)


# --- driver -------------------------------------------------------------------

@dataclass
class Pipeline:
    """Intermediate structures of one run, kept for diagnostics and tests."""

    params: SqrtParams
    layers: Layering | None = None
    grid: Grid | None = None
    cells: list = field(default_factory=list)
    removed: list = field(default_factory=list)
    chains: list = field(default_factory=list)
    chain_estimates: list = field(default_factory=list)
    log: list = field(default_factory=list)


def _usable(data: _Readings, d: _Draw):
    _, vals, ok = data.get(d)
    return vals[ok], d.size


def run_pipeline(oracle: QueryOracle, p: SqrtParams, rng) -> Pipeline:
    out = Pipeline(p)
    n = oracle.n
    starts = subarray_starts(n, p.x)
    plan = _make_plan(p, starts, make_rng(rng))
    data = _Readings(oracle, plan)
    vals, size = _usable(data, plan.layer)
    if vals.size == 0:
        return out
    if plan.layer.exhaustive:
        out.layers = layering(vals, p.y, size / (p.y * math.log(p.y)))
    else:
        out.layers = layering(vals, p.y, p.t)
    out.grid = gridding(out.layers, starts, [_usable(data, d) for d in plan.grid], p.beta)
    for i, d in enumerate(plan.fine):
        fv, fsize = _usable(data, d)
        t_f = fsize / (p.y_fine * math.log(p.y_fine)) if d.exhaustive else p.t_fine
        out.cells.extend(cells_for_subarray(i, fv, fsize, out.grid, p.y_fine, t_f))
    poset, out.removed = reduce_antichains(build_cell_poset(out.cells), p.tau)
    out.chains = chain_cover(poset)
    for ch in out.chains:
        C_H, C_V = split_chain(ch)
        lh = estimate_horizontal(C_H, out.grid, plan, data, p, out.log)
        lv = estimate_vertical(C_V, out.grid, plan, data, p, out.log)
        out.chain_estimates.append((lh, lv))
    return out


def estimate_lis_multiplicative(oracle: QueryOracle, r: int, lam: float, eps: float, rng=None,
                                **overrides) -> EstimateReport:
    """Estimate the LIS of the oracle's array within a factor depending on ``lam``.

    ``lam * n`` is the assumed lower bound on the LIS length; ``r`` bounds
    the number of distinct values. Keyword overrides: ``t``, ``c``, ``beta``.
    """
    t0 = time.perf_counter()
    rng = make_rng(rng)
    before = oracle.count
    p = SqrtParams.make(oracle.n, r, lam, eps, **overrides)
    pipe = run_pipeline(oracle, p, rng)
    est = max((max(h, v) for h, v in pipe.chain_estimates), default=0.0)
    est = min(est, float(oracle.n))
    grid = pipe.grid
    diagnostics = {
        "layers": pipe.layers.count if pipe.layers else 0,
        "dense_boxes": int(grid.dense.sum()) if grid else 0,
        "cells": len(pipe.cells),
        "antichain_rounds": len(pipe.removed),
        "chains": len(pipe.chains),
        "chain_estimates": pipe.chain_estimates,
        "skipped_blocks": len(pipe.log),
        "pipeline": pipe,
    }
    return EstimateReport(est, oracle.count - before, p.as_dict(), diagnostics=diagnostics,
                          wall_time=time.perf_counter() - t0)


def lambda_grid(n: int) -> list[float]:
    floor = max(8 / math.sqrt(n), 1 / 64)
    out, lam = [], 1.0
    while lam >= floor:
        out.append(lam)
        lam /= 2
    return out or [1.0]


def lambda_sweep(oracle: QueryOracle, r: int, eps: float, rng=None, **overrides) -> EstimateReport:
    """Run the estimator for lambda = 1, 1/2, 1/4, ... and keep the largest estimate."""
    t0 = time.perf_counter()
    rng = make_rng(rng)
    before = oracle.count
    lams = lambda_grid(oracle.n)
    reports = [estimate_lis_multiplicative(oracle, r, lam, eps, sub, **overrides)
               for lam, sub in zip(lams, spawn(rng, len(lams)))]
    best = max(range(len(reports)), key=lambda k: reports[k].estimate)
    return EstimateReport(reports[best].estimate, oracle.count - before,
                          {"r": r, "eps": eps, "lambdas": lams, "lambda_used": lams[best]},
                          diagnostics={"per_lambda": [(lam, rep.estimate) for lam, rep in zip(lams, reports)],
                                       "best": reports[best].diagnostics},
                          wall_time=time.perf_counter() - t0)
