"""Dense-cell poset, antichain reduction, chain covers and staircase splitting.

Boxes are written ``(i, j)`` with ``i`` the subarray and ``j`` the layer.
Box ``(i, j)`` lies below ``(i', j')`` when ``i <= i'`` and ``j <= j'``.
Two cells of the same box are ordered by their ordinal.

Sorting cells by ``(i, j, ordinal)`` makes two cells comparable exactly when
their layers are nondecreasing in that order. So a largest antichain is a
longest strictly decreasing run of layers, and a smallest chain cover is a
greedy partition into nondecreasing layer piles.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

import numpy as np

from ..exact import Poset
from .grid import DenseCell


class CellPoset:
    def __init__(self, cells):
        self.cells: list[DenseCell] = sorted(cells, key=lambda c: (c.subarray, c.layer, c.ordinal))

    def __len__(self):
        return len(self.cells)

    def key(self, c: DenseCell) -> tuple:
        return c.subarray, c.layer, c.ordinal

    def less_eq(self, a: DenseCell, b: DenseCell) -> bool:
        if a.box != b.box:
            return a.subarray <= b.subarray and a.layer <= b.layer
        return a.ordinal <= b.ordinal

    def max_antichain(self) -> list[DenseCell]:
        """Largest antichain: longest strictly decreasing layer sequence."""
        tops, top_at, parent = [], [], [-1] * len(self.cells)
        for pos, c in enumerate(self.cells):
            key = -c.layer
            k = bisect_left(tops, key)
            parent[pos] = top_at[k - 1] if k else -1
            if k == len(tops):
                tops.append(key)
                top_at.append(pos)
            else:
                tops[k] = key
                top_at[k] = pos
        out, pos = [], top_at[-1] if top_at else -1
        while pos != -1:
            out.append(self.cells[pos])
            pos = parent[pos]
        return out[::-1]

    def min_chain_cover(self) -> list[list[DenseCell]]:
        """Greedy cover by layer-nondecreasing piles; optimal for this order."""
        tops: list = []  # ascending top layers
        piles: list = []  # parallel to tops
        for c in self.cells:
            k = bisect_right(tops, c.layer) - 1
            if k < 0:
                tops.insert(0, c.layer)
                piles.insert(0, [c])
            else:
                tops[k] = c.layer
                piles[k].append(c)
        return piles

    def without(self, removed) -> "CellPoset":
        gone = {id(c) for c in removed}
        return CellPoset([c for c in self.cells if id(c) not in gone])

    def to_poset(self) -> Poset:
        """The same order as a generic :class:`Poset` (for cross-checks)."""
        ids = list(range(len(self.cells)))
        pairs = [(a, b) for a in ids for b in ids
                 if a != b and self.less_eq(self.cells[a], self.cells[b])]
        return Poset(ids, pairs)


def build_cell_poset(cells) -> CellPoset:
    return CellPoset(cells)


def reduce_antichains(p: CellPoset, tau: int):
    """Strip maximum antichains larger than ``tau``; returns (poset, removal log)."""
    if tau < 1:
        raise ValueError("tau must be at least 1")
    log = []
    while True:
        anti = p.max_antichain()
        if len(anti) <= tau:
            return p, log
        log.append(anti)
        p = p.without(anti)


@dataclass
class BoxChain:
    boxes: list  # [(i, j), ...] in chain order
    cells: int = 0

    def is_monotone(self) -> bool:
        return all(a[0] <= b[0] and a[1] <= b[1] for a, b in zip(self.boxes, self.boxes[1:]))


def chain_cover(p: CellPoset) -> list[BoxChain]:
    """Minimum cell chain cover, each chain projected to its distinct boxes."""
    out = []
    for pile in p.min_chain_cover():
        boxes = []
        for c in pile:
            if not boxes or boxes[-1] != c.box:
                boxes.append(c.box)
        out.append(BoxChain(boxes, len(pile)))
    return out


@dataclass
class Block:
    boxes: list = field(default_factory=list)

    @property
    def subarrays(self) -> list[int]:
        return sorted({b[0] for b in self.boxes})

    @property
    def layers(self) -> list[int]:
        return sorted({b[1] for b in self.boxes})

    @property
    def width(self) -> int:
        """Number of subarrays spanned, gaps included."""
        s = self.subarrays
        return s[-1] - s[0] + 1


def split_chain(chain: BoxChain) -> tuple[list[Block], list[Block]]:
    """Staircase split into horizontal blocks and vertical blocks.

    Horizontal blocks are maximal same-layer runs of at least two boxes; if a
    run ends in the subarray where the next one starts, its last box moves
    to the vertical side. The remaining boxes, grouped by subarray, are the
    vertical blocks. Horizontal blocks then share no subarray and vertical
    blocks share no layer.
    """
    boxes = list(chain.boxes)
    runs, cur = [], []
    for b in boxes:
        if cur and cur[-1][1] == b[1]:
            cur.append(b)
        else:
            if cur:
                runs.append(cur)
            cur = [b]
    if cur:
        runs.append(cur)
    horiz = [list(r) for r in runs if len(r) >= 2]
    for a, b in zip(horiz, horiz[1:]):
        if a[-1][0] == b[0][0]:
            a.pop()
    in_h = {b for h in horiz for b in h}
    C_H = [Block(h) for h in horiz if h]
    C_V: list[Block] = []
    for b in boxes:
        if b in in_h:
            continue
        if C_V and C_V[-1].boxes[-1][0] == b[0]:
            C_V[-1].boxes.append(b)
        else:
            C_V.append(Block([b]))
    return C_H, C_V
