"""Value layers, the box grid and dense cells.

A *layering* cuts the value range into contiguous intervals ``(lo, hi]``
from a sample: heavy values become single-valued layers and light values are
grouped into multi-valued layers. The *grid* crosses a global layering with
``x`` equal subarrays and tags boxes whose sampled density is high. Each
subarray is then layered again at a finer scale, and the pieces of that finer
layering that sit inside dense boxes are the *dense cells*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class Layering:
    upper: np.ndarray  # upper bound of each layer; layer j is (upper[j-1], upper[j]]
    single: np.ndarray  # True for single-valued layers
    weight: np.ndarray  # sampled weight per layer
    sample_size: int

    @property
    def count(self) -> int:
        return int(self.upper.size)

    @property
    def density(self) -> np.ndarray:
        return self.weight / self.sample_size

    def interval(self, j: int) -> tuple[float, float]:
        lo = -math.inf if j == 0 else float(self.upper[j - 1])
        return lo, float(self.upper[j])

    def span(self, j_lo: int, j_hi: int) -> tuple[float, float]:
        """Value interval covered by layers ``j_lo..j_hi``."""
        return self.interval(j_lo)[0], float(self.upper[j_hi])

    def layer_of(self, values) -> np.ndarray:
        """Layer index of each value, or -1 above the top layer."""
        j = np.searchsorted(self.upper, np.asarray(values, dtype=np.float64), side="left")
        j[j >= self.upper.size] = -1
        return j


def layering(sample, y: float, t: float) -> Layering:
    """Greedy layering of a value sample.

    With threshold ``T = t ln y``: a value of weight above ``T`` alone forms a
    single-valued layer when it starts a run; otherwise the run takes the
    longest stretch of values whose total weight stays below ``2T``.
    """
    vals = np.asarray(sample, dtype=np.float64)
    if vals.size == 0:
        raise ValueError("layering needs a non-empty sample")
    if y < 2:
        raise ValueError("y must be at least 2")
    uniq, w = np.unique(vals, return_counts=True)
    thr = t * math.log(y)
    upper, single, weight = [], [], []
    i, q = 0, uniq.size
    w_list = w.tolist()
    while i < q:
        if w_list[i] > thr:
            upper.append(uniq[i])
            single.append(True)
            weight.append(w_list[i])
            i += 1
            continue
        total, j = w_list[i], i + 1
        while j < q and total + w_list[j] < 2 * thr:
            total += w_list[j]
            j += 1
        upper.append(uniq[j - 1])
        single.append(False)
        weight.append(total)
        i = j
    return Layering(np.array(upper), np.array(single, dtype=bool),
                    np.array(weight, dtype=np.int64), int(vals.size))


def layering_rate(sample, y: float) -> Layering:
    """Layering of a whole (unsampled) view: thresholds scale with its size."""
    size = np.asarray(sample).size
    return layering(sample, y, size / (y * math.log(y)))


def subarray_starts(n: int, x: int) -> np.ndarray:
    """0-based offsets: subarray i covers 1-based ``starts[i]+1 .. starts[i+1]``."""
    return (np.arange(x + 1, dtype=np.int64) * n) // x


@dataclass
class Grid:
    starts: np.ndarray
    layers: Layering
    counts: np.ndarray  # (x, layers) sampled counts
    sizes: np.ndarray  # sample size per subarray
    dense: np.ndarray  # (x, layers) bool
    beta: float

    @property
    def x(self) -> int:
        return self.starts.size - 1

    @property
    def density(self) -> np.ndarray:
        return self.counts / self.sizes[:, None]

    def subarray_range(self, i: int) -> tuple[int, int]:
        return int(self.starts[i]) + 1, int(self.starts[i + 1])

    def subarray_length(self, i: int) -> int:
        return int(self.starts[i + 1] - self.starts[i])

    def dense_boxes(self) -> list[tuple[int, int]]:
        return [tuple(map(int, b)) for b in np.argwhere(self.dense)]


def gridding(layers: Layering, starts: np.ndarray, samples, beta: float) -> Grid:
    """Tag boxes holding at least ``(3/4) beta`` of their subarray's sample.

    ``samples[i]`` holds the usable values sampled from subarray i (erased
    answers already removed) and ``sizes`` its nominal sample size.
    """
    x = starts.size - 1
    counts = np.zeros((x, layers.count), dtype=np.int64)
    sizes = np.zeros(x, dtype=np.int64)
    for i, (vals, size) in enumerate(samples):
        j = layers.layer_of(vals)
        counts[i] = np.bincount(j[j >= 0], minlength=layers.count)
        sizes[i] = size
    dense = counts >= 0.75 * beta * sizes[:, None]
    return Grid(starts, layers, counts, sizes, dense, beta)


@dataclass
class DenseCell:
    subarray: int
    layer: int
    ordinal: int
    lo: float
    hi: float
    single: bool
    density: float
    stack: int = 0

    @property
    def box(self) -> tuple[int, int]:
        return self.subarray, self.layer


def cells_for_subarray(i: int, vals, size: int, grid: Grid, y: float, t: float) -> list[DenseCell]:
    """Dense cells of subarray i from its finer-layering sample ``vals``.

    A heavy value of weight W is split into ``ceil(W / (beta*size))`` stacked
    cells. Every cell is clipped to the dense boxes it meets, and a clipped
    piece is kept when its sampled weight is at least ``beta*size/2``.
    """
    vals = np.sort(np.asarray(vals, dtype=np.float64))
    if vals.size == 0:
        return []
    fine = layering(vals, y, t)
    beta = grid.beta
    unit = beta * size
    dense_layers = np.flatnonzero(grid.dense[i])
    if dense_layers.size == 0:
        return []
    box_lo = np.array([grid.layers.interval(j)[0] for j in dense_layers])
    box_hi = grid.layers.upper[dense_layers]
    raw: list[DenseCell] = []
    prev = -math.inf
    for hi, single, w in zip(fine.upper.tolist(), fine.single.tolist(), fine.weight.tolist()):
        lo = prev
        prev = hi
        if single:
            stacks = max(1, math.ceil(w / unit))
            share = w / stacks
            if share < unit / 2:
                continue
            j = int(grid.layers.layer_of([hi])[0])
            if j < 0 or not grid.dense[i, j]:
                continue
            blo, bhi = grid.layers.interval(j)
            for k in range(stacks):
                raw.append(DenseCell(i, j, 0, max(lo, blo), min(hi, bhi), True, share / size, k))
            continue
        # multi-valued: clip against every dense box it overlaps
        hit = (box_hi > lo) & (box_lo < hi)
        for j, blo, bhi in zip(dense_layers[hit].tolist(), box_lo[hit].tolist(), box_hi[hit].tolist()):
            a, b = max(lo, blo), min(hi, bhi)
            wt = int(np.searchsorted(vals, b, side="right") - np.searchsorted(vals, a, side="right"))
            if wt >= unit / 2:
                raw.append(DenseCell(i, j, 0, a, b, False, wt / size))
    raw.sort(key=lambda c: (c.layer, c.hi, c.stack))
    ordinal: dict = {}
    for c in raw:
        c.ordinal = ordinal.get(c.layer, 0)
        ordinal[c.layer] = c.ordinal + 1
    return raw


def true_box_densities(values, layers: Layering, starts: np.ndarray) -> np.ndarray:
    """Exact fraction of each subarray falling in each layer (test helper)."""
    values = np.asarray(values, dtype=np.float64)
    x = starts.size - 1
    out = np.zeros((x, layers.count))
    for i in range(x):
        seg = values[starts[i]:starts[i + 1]]
        j = layers.layer_of(seg)
        out[i] = np.bincount(j[j >= 0], minlength=layers.count) / seg.size
    return out


def true_layer_densities(values, layers: Layering) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    j = layers.layer_of(values)
    return np.bincount(j[j >= 0], minlength=layers.count) / values.size
