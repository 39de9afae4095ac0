"""Samplers for the hard instance families and their index-tree utilities.

Arrays start as the identity ``A[u] = u`` on ``[n]`` (n a power of two).
A *j-swap* exchanges the left and right halves of every j-block, where the
j-blocks are the ``n / 2**j`` aligned blocks of length ``2**j``.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .oracle import make_rng


def _log2_exact(n: int) -> int:
    if n < 2 or n & (n - 1):
        raise ValueError(f"n must be a power of two >= 2, got {n}")
    return n.bit_length() - 1


@dataclass(frozen=True)
class ScaleVector:
    """Block levels ``j_1 > j_2 > ... > j_h`` used by the hard distributions.

    With ``strict=True`` the large gaps required by the lower-bound argument
    are enforced; desk-scale experiments use ``strict=False`` which only asks
    for a strictly decreasing sequence inside ``[1, log n]``.
    """

    scales: tuple
    strict: bool = False

    @property
    def h(self) -> int:
        return len(self.scales)

    def validate(self, n: int) -> None:
        logn = _log2_exact(n)
        s = list(self.scales)
        if len(s) < 2:
            raise ValueError("need at least two scales")
        if any(not 1 <= j <= logn for j in s):
            raise ValueError(f"scales {s} must lie in [1, {logn}]")
        if any(a <= b for a, b in zip(s, s[1:])):
            raise ValueError(f"scales {s} must be strictly decreasing")
        if self.strict:
            gap = math.log2(self.h + 2) + 4 * self.h + 4
            if s[0] > logn - gap:
                raise ValueError(f"strict: j_1={s[0]} exceeds log n - {gap:.2f}")
            for a, b in zip(s, s[1:]):
                if b > a - gap:
                    raise ValueError(f"strict: gap between {a} and {b} below {gap:.2f}")

    def tail(self) -> "ScaleVector":
        # gaps are checked once against the full length
        return ScaleVector(self.scales[1:], False)


@dataclass(frozen=True)
class BlockRef:
    """The ``ordinal``-th (1-based) block at ``level``; spans 1-based indices."""

    level: int
    ordinal: int

    @property
    def span(self) -> tuple[int, int]:
        w = 1 << self.level
        return (self.ordinal - 1) * w + 1, self.ordinal * w

    @classmethod
    def of(cls, u: int, level: int) -> "BlockRef":
        return cls(level, (u - 1) // (1 << level) + 1)


def _swap_blocks(a: np.ndarray, j: int, rows=None) -> None:
    """In-place j-swap on a 2-D view ``a`` (rows are independent arrays).

    ``rows`` restricts the swap to a boolean selection of rows.
    """
    m, length = a.shape
    half = 1 << (j - 1)
    v = a.reshape(m, length // (2 * half), 2, half)
    if rows is None:
        v[:] = v[:, :, ::-1, :].copy()
    elif np.any(rows):
        v[rows] = v[rows][:, :, ::-1, :]


def _as_scales(scales, n) -> ScaleVector:
    sv = scales if isinstance(scales, ScaleVector) else ScaleVector(tuple(scales))
    sv.validate(n)
    return sv


def sample_D(n: int, variant: int, scales, rng=None, coins=None):
    """One draw from D0 (``variant=0``) or D1 (``variant=1``).

    Returns ``(values, coins)``; ``coins[l]`` is the coin of the l-th
    j1-block. For D0 a coin of 1 means every j2-block in the block is swapped
    and 0 means none is; for D1 a coin of 1 means the j2-swaps are applied
    in the left half only and 0 means the right half only. Pass ``coins`` to
    force the outcome.
    """
    sv = _as_scales(scales, n)
    if sv.h != 2:
        raise ValueError("sample_D takes exactly two scales; use sample_Dh for more")
    if variant not in (0, 1):
        raise ValueError("variant must be 0 or 1")
    j1, j2 = sv.scales
    nblocks = n >> j1
    if coins is None:
        coins = make_rng(rng).integers(0, 2, size=nblocks)
    coins = np.asarray(coins, dtype=np.int64)
    if coins.shape != (nblocks,):
        raise ValueError(f"expected {nblocks} coins")
    a = np.arange(1, n + 1, dtype=np.int64).reshape(nblocks, 1 << j1)
    _swap_blocks(a, j1)
    on = coins == 1
    if variant == 0:
        _swap_blocks(a, j2, on)
    else:
        halves = a.reshape(nblocks, 2, 1 << (j1 - 1))
        left = halves[:, 0, :]
        right = halves[:, 1, :]
        left_sel = left.copy()
        _swap_blocks(left_sel, j2, on)
        right_sel = right.copy()
        _swap_blocks(right_sel, j2, ~on)
        halves[:, 0, :] = left_sel
        halves[:, 1, :] = right_sel
    return a.ravel(), coins


def _sample_perm(length: int, variant: int, scales: ScaleVector, rng):
    """A D^(h) permutation of 1..length and its label tree."""
    if scales.h == 2:
        return sample_D(length, variant, scales, rng)
    j1 = scales.scales[0]
    nblocks = length >> j1
    half = 1 << (j1 - 1)
    coins = rng.integers(0, 2, size=nblocks)
    out = np.empty(length, dtype=np.int64)
    labels = []
    sub = scales.tail()
    for ell in range(nblocks):
        base = ell << j1
        # after the j1-swap the left half holds values base+half+1 .. base+2*half
        if variant == 0:
            kinds = (0, 0) if coins[ell] else (1, 1)
        else:
            kinds = (0, 1) if coins[ell] else (1, 0)
        pl, ll = _sample_perm(half, kinds[0], sub, rng)
        pr, lr = _sample_perm(half, kinds[1], sub, rng)
        out[base:base + half] = base + half + pl
        out[base + half:base + 2 * half] = base + pr
        labels.append((f"{kinds[0]}{kinds[1]}", ll, lr))
    return out, labels


def sample_Dh(n: int, variant: int, scales, rng=None):
    """One draw from the recursive family D0^(h) / D1^(h).

    For h = 2 this is :func:`sample_D` with the same stream. Otherwise each
    j1-block has its halves swapped and each half rearranged as an
    independent D^(h-1) draw on scales ``j_2..j_h``: both halves from the
    same sub-variant for variant 0 ("00"/"11" blocks) and from different
    sub-variants for variant 1 ("01"/"10" blocks). The label tree lists, per
    j1-block, ``(kind, left_labels, right_labels)``.
    """
    sv = _as_scales(scales, n)
    if variant not in (0, 1):
        raise ValueError("variant must be 0 or 1")
    return _sample_perm(n, variant, sv, make_rng(rng))


def lca_level(u: int, v: int, n: int) -> int:
    """Level of the lowest common ancestor of leaves u and v (1-based)."""
    if u == v:
        raise ValueError("lca_level needs two distinct indices")
    if not (1 <= u <= n and 1 <= v <= n):
        raise ValueError("indices must lie in [1, n]")
    return ((u - 1) ^ (v - 1)).bit_length()


def detect_bad_event(Q, j1: int, j2: int, n: int) -> bool:
    """Whether Q holds w < x < y < z in one j1-block with LCA(w,x) and LCA(y,z)
    at level j2 and LCA(x, y) at level j1.

    Equivalently, some j1-block has a pair of j2-cousins in its left half and
    another pair in its right half.
    """
    if j2 >= j1:
        raise ValueError("need j2 < j1")
    # (j1-block, half) -> set of (j2-block, which half of it) seen
    seen: dict = defaultdict(set)
    for q in set(int(q) for q in Q):
        b1 = (q - 1) >> j1
        side = ((q - 1) >> (j1 - 1)) & 1
        b2 = (q - 1) >> j2
        sub = ((q - 1) >> (j2 - 1)) & 1
        seen[(b1, side)].add((b2, sub))
    cousins = set()
    for (b1, side), marks in seen.items():
        blocks = defaultdict(set)
        for b2, sub in marks:
            blocks[b2].add(sub)
        if any(len(s) == 2 for s in blocks.values()):
            cousins.add((b1, side))
    return any((b1, 1 - side) in cousins for b1, side in cousins)


def detect_bad_event_bruteforce(Q, j1: int, j2: int, n: int) -> bool:
    q = sorted(set(int(x) for x in Q))
    for a in range(len(q)):
        for b in range(a + 1, len(q)):
            for c in range(b + 1, len(q)):
                for d in range(c + 1, len(q)):
                    w, x, y, z = q[a], q[b], q[c], q[d]
                    if (w - 1) >> j1 != (z - 1) >> j1:
                        continue
                    if (lca_level(w, x, n) == j2 and lca_level(y, z, n) == j2
                            and lca_level(x, y, n) == j1):
                        return True
    return False


def blow_up(values, factor: int) -> np.ndarray:
    """Repeat each entry ``factor`` times in place (preserves LIS fraction)."""
    return np.repeat(np.asarray(values), factor)
