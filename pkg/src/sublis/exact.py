"""Exact ground-truth computations: LIS, distances, deserted elements, posets."""

from __future__ import annotations

from bisect import bisect_right
from itertools import combinations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .oracle import ErasedArray


def lis_exact(values) -> int:
    """Length of a longest nondecreasing subsequence (patience sorting)."""
    tops: list = []
    for v in np.asarray(values).tolist():
        k = bisect_right(tops, v)
        if k == len(tops):
            tops.append(v)
        else:
            tops[k] = v
    return len(tops)


def lis_dp(values) -> int:
    """Quadratic DP reference for :func:`lis_exact`."""
    a = list(values)
    if not a:
        return 0
    best = [1] * len(a)
    for j in range(len(a)):
        for i in range(j):
            if a[i] <= a[j] and best[i] + 1 > best[j]:
                best[j] = best[i] + 1
    return max(best)


def lis_indices(values) -> list[int]:
    """0-based positions of one longest nondecreasing subsequence."""
    a = np.asarray(values).tolist()
    tops, top_pos = [], []
    parent = [-1] * len(a)
    for j, v in enumerate(a):
        k = bisect_right(tops, v)
        parent[j] = top_pos[k - 1] if k else -1
        if k == len(tops):
            tops.append(v)
            top_pos.append(j)
        else:
            tops[k] = v
            top_pos[k] = j
    out = []
    j = top_pos[-1] if top_pos else -1
    while j != -1:
        out.append(j)
        j = parent[j]
    return out[::-1]


def distance_to_monotonicity(values) -> int:
    values = np.asarray(values)
    return int(values.size - lis_exact(values))


def is_completable_monotone(arr: ErasedArray) -> bool:
    v = arr.nonerased_values()
    return bool(np.all(v[1:] >= v[:-1])) if v.size > 1 else True


def erased_distance(arr: ErasedArray) -> int:
    """Minimum distance to monotonicity over all completions.

    Erased positions can always be interpolated into the LIS of the best
    completion, so only the nonerased values need repairing.
    """
    v = arr.nonerased_values()
    return int(v.size - lis_exact(v))


def count_deserted(S, gamma: float, n: int) -> int:
    """Number of i in S lying in some interval I of [n] with |S∩I| < gamma|I|.

    ``S`` holds 1-based indices. Quadratic scan over all intervals.
    """
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0, 1)")
    member = np.zeros(n + 1, dtype=np.int64)
    member[np.asarray(list(S), dtype=np.int64)] = 1
    prefix = np.cumsum(member)  # prefix[b] = |S ∩ [1, b]|
    lengths = np.arange(n + 1, dtype=np.float64)
    reach = np.zeros(n + 2, dtype=np.int64)  # reach[a]: furthest b with [a, b] deficient
    for a in range(1, n + 1):
        b = np.arange(a, n + 1)
        deficient = (prefix[b] - prefix[a - 1]) < gamma * lengths[b - a + 1]
        hits = np.flatnonzero(deficient)
        if hits.size:
            reach[a] = b[hits[-1]]
    # union of [a, reach[a]] over all a with a deficient interval
    cover = np.zeros(n + 2, dtype=np.int64)
    starts = np.flatnonzero(reach)
    np.add.at(cover, starts, 1)
    np.add.at(cover, reach[starts] + 1, -1)
    covered = np.cumsum(cover)[: n + 1] > 0
    return int(np.sum(covered[1:] & (member[1:] == 1)))


class Poset:
    """A finite poset given by elements and a strict order relation.

    ``pairs`` lists comparable ordered pairs ``(a, b)`` meaning a < b; the
    transitive closure is taken on demand.
    """

    def __init__(self, elements, pairs=()):
        self.elements = list(elements)
        self._pos = {e: k for k, e in enumerate(self.elements)}
        self._pairs = [(a, b) for a, b in pairs]
        self._closure = None

    def __len__(self):
        return len(self.elements)

    def closure(self) -> np.ndarray:
        """Boolean matrix ``M[u, v]`` = element u strictly below element v."""
        if self._closure is None:
            m = len(self.elements)
            reach = np.zeros((m, m), dtype=bool)
            for a, b in self._pairs:
                reach[self._pos[a], self._pos[b]] = True
            for k in range(m):  # Warshall
                reach |= reach[:, [k]] & reach[[k], :]
            if np.any(np.diag(reach)):
                raise ValueError("relation has a cycle; not a partial order")
            self._closure = reach
        return self._closure

    def less(self, a, b) -> bool:
        return bool(self.closure()[self._pos[a], self._pos[b]])

    def comparable(self, a, b) -> bool:
        return a == b or self.less(a, b) or self.less(b, a)

    def is_chain(self, items) -> bool:
        return all(self.comparable(a, b) for a, b in combinations(items, 2))

    def is_antichain(self, items) -> bool:
        return all(not self.comparable(a, b) for a, b in combinations(items, 2))

    def without(self, removed) -> "Poset":
        gone = set(removed)
        keep = [e for e in self.elements if e not in gone]
        c = self.closure()
        pairs = [(self.elements[u], self.elements[v]) for u, v in zip(*np.nonzero(c))
                 if self.elements[u] not in gone and self.elements[v] not in gone]
        return Poset(keep, pairs)

    def _matching(self):
        c = self.closure()
        graph = csr_matrix(c.astype(np.int8))
        return maximum_bipartite_matching(graph, perm_type="column")

    def min_chain_cover(self) -> list[list]:
        return min_chain_cover(self)

    def max_antichain(self) -> list:
        return max_antichain(self)


def min_chain_cover(p: Poset) -> list[list]:
    """Partition into the fewest chains (min path cover of the closure DAG)."""
    m = len(p)
    if m == 0:
        return []
    match = p._matching()  # match[u] = successor of u on its chain, or -1
    has_pred = np.zeros(m, dtype=bool)
    has_pred[match[match >= 0]] = True
    chains = []
    for u in range(m):
        if has_pred[u]:
            continue
        chain = [u]
        while match[chain[-1]] >= 0:
            chain.append(int(match[chain[-1]]))
        chains.append([p.elements[k] for k in chain])
    return chains


def max_antichain(p: Poset) -> list:
    """A maximum antichain, via Koenig's theorem on the chain-cover matching.

    With Z the vertices reachable from unmatched left copies by alternating
    paths, the antichain is every element whose left copy is in Z and whose
    right copy is not.
    """
    m = len(p)
    if m == 0:
        return []
    c = p.closure()
    match = p._matching()
    right_owner = np.full(m, -1)
    right_owner[match[match >= 0]] = np.flatnonzero(match >= 0)
    in_left = np.zeros(m, dtype=bool)
    in_right = np.zeros(m, dtype=bool)
    stack = [u for u in range(m) if match[u] < 0]
    for u in stack:
        in_left[u] = True
    while stack:
        u = stack.pop()
        for v in np.flatnonzero(c[u]):
            if in_right[v] or match[u] == v:
                continue
            in_right[v] = True
            w = right_owner[v]
            if w >= 0 and not in_left[w]:
                in_left[w] = True
                stack.append(w)
    return [p.elements[u] for u in range(m) if in_left[u] and not in_right[u]]


def max_antichain_bruteforce(p: Poset) -> int:
    """Size of a largest antichain by exhaustive subset search (tiny posets)."""
    c = p.closure()
    comp = c | c.T
    m = len(p)
    best = 0
    for mask in range(1, 1 << m):
        items = [k for k in range(m) if mask >> k & 1]
        if len(items) <= best:
            continue
        if not any(comp[a, b] for a, b in combinations(items, 2)):
            best = len(items)
    return best
