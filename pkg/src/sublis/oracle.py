"""Arrays with erasures and the query-counting access model.

Indices exposed by this module are 1-based, so an array of length ``n`` is
addressed by ``1..n``. Internally values live in 0-based numpy arrays.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class Answer(enum.Enum):
    """Non-value answers an oracle can give."""

    ERASED = "ERASED"
    OUT_OF_RANGE = "OUT_OF_RANGE"

    def __repr__(self):
        return self.value


ERASED = Answer.ERASED
OUT_OF_RANGE = Answer.OUT_OF_RANGE

# status codes returned by QueryOracle.query_many
OK, ST_ERASED, ST_OUT = 0, 1, 2


def make_rng(seed) -> np.random.Generator:
    """PCG64 stream; equal seeds give equal draws on every platform."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def spawn(rng: np.random.Generator, k: int) -> list[np.random.Generator]:
    """Independent child streams, used for per-trial or per-stage randomness."""
    return [np.random.Generator(np.random.PCG64(s)) for s in rng.bit_generator.seed_seq.spawn(k)]


class ErasedArray:
    """A length-n real array with an erasure mask.

    Values under the mask are never exposed by an oracle.
    """

    def __init__(self, values, erased=None, r: int | None = None):
        self.values = np.asarray(values, dtype=np.float64).copy()
        if self.values.ndim != 1 or self.values.size == 0:
            raise ValueError("values must be a non-empty 1-d sequence")
        if erased is None:
            erased = np.zeros(self.values.size, dtype=bool)
        self.erased = np.asarray(erased, dtype=bool).copy()
        if self.erased.shape != self.values.shape:
            raise ValueError("erasure mask must match values in length")
        self.r = r
        self._ranks = None

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def erased_fraction(self) -> float:
        return int(self.erased.sum()) / self.n

    @property
    def has_erasures(self) -> bool:
        return bool(self.erased.any())

    def nonerased_values(self) -> np.ndarray:
        return self.values[~self.erased]

    def ranks(self) -> np.ndarray:
        """Dense ranks of the values (order-isomorphic to the values).

        Only used as a compute shortcut by estimators that compare sampled
        values for equality and order; any decision based on ranks of queried
        positions is identical to the same decision made on their values.
        """
        if self._ranks is None:
            _, inv = np.unique(self.values, return_inverse=True)
            self._ranks = inv.astype(np.int64)
        return self._ranks

    def distinct_count(self) -> int:
        return int(np.unique(self.values[~self.erased]).size)

    def with_erasures(self, alpha: float, rng) -> "ErasedArray":
        """Copy with a uniformly random ``floor(alpha*n)`` positions erased."""
        rng = make_rng(rng)
        k = int(math.floor(alpha * self.n))
        mask = self.erased.copy()
        mask[rng.choice(self.n, size=k, replace=False)] = True
        return ErasedArray(self.values, mask, self.r)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, ErasedArray):
            return NotImplemented
        return (np.array_equal(self.erased, other.erased)
                and np.array_equal(self.values[~self.erased].view(np.int64),
                                   other.values[~other.erased].view(np.int64)))

    def __repr__(self):
        shown = ["⊥" if e else f"{v:g}" for v, e in zip(self.values[:10], self.erased[:10])]
        more = ", ..." if self.n > 10 else ""
        return f"ErasedArray([{', '.join(shown)}{more}], n={self.n})"


@dataclass
class _Counter:
    count: int = 0
    trace: list | None = None


class QueryOracle:
    """Counting access to an :class:`ErasedArray`, optionally restricted.

    A view restricts the exposed indices to ``[lo, hi]`` and, optionally, the
    reported values to the half-open interval ``(a, b]``. Restricted oracles
    share their parent's counter.
    """

    def __init__(self, target: ErasedArray, *, record: bool = False, _counter=None,
                 lo: int = 1, hi: int | None = None, interval=(-math.inf, math.inf)):
        if not isinstance(target, ErasedArray):
            target = ErasedArray(target)
        self.target = target
        self._counter = _counter if _counter is not None else _Counter(trace=[] if record else None)
        self.lo = lo
        self.hi = target.n if hi is None else hi
        self.interval = (float(interval[0]), float(interval[1]))

    @property
    def count(self) -> int:
        return self._counter.count

    @property
    def trace(self) -> np.ndarray | None:
        """All queried indices in issue order, if recording was requested."""
        if self._counter.trace is None:
            return None
        if not self._counter.trace:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(self._counter.trace)

    @property
    def n(self) -> int:
        return self.target.n

    @property
    def length(self) -> int:
        return self.hi - self.lo + 1

    def _in_interval(self, v):
        a, b = self.interval
        return (v > a) & (v <= b)

    def query(self, i: int):
        """Value at 1-based index ``i``, or ``ERASED`` / ``OUT_OF_RANGE``."""
        i = int(i)
        if not self.lo <= i <= self.hi:
            raise IndexError(f"index {i} outside view [{self.lo}, {self.hi}]")
        self._counter.count += 1
        if self._counter.trace is not None:
            self._counter.trace.append(np.array([i], dtype=np.int64))
        if self.target.erased[i - 1]:
            return ERASED
        v = float(self.target.values[i - 1])
        if not self._in_interval(v):
            return OUT_OF_RANGE
        return v

    def query_many(self, indices, ranks: bool = False):
        """Vectorised queries; each index counts as one query.

        Returns ``(values, status)`` where status is ``OK``, ``ST_ERASED`` or
        ``ST_OUT``. With ``ranks=True`` the value array holds dense ranks
        instead of the raw values (see :meth:`ErasedArray.ranks`).
        """
        idx = np.asarray(indices, dtype=np.int64).ravel()
        if idx.size and (idx.min() < self.lo or idx.max() > self.hi):
            raise IndexError(f"indices outside view [{self.lo}, {self.hi}]")
        self._counter.count += idx.size
        if self._counter.trace is not None:
            self._counter.trace.append(idx.copy())
        pos = idx - 1
        status = np.zeros(idx.size, dtype=np.int8)
        if ranks:
            vals = self.target.ranks()[pos]
        else:
            vals = self.target.values[pos]
        if self.interval != (-math.inf, math.inf):
            raw = vals if not ranks else self.target.values[pos]
            status[~self._in_interval(raw)] = ST_OUT
        if self.target.has_erasures:
            status[self.target.erased[pos]] = ST_ERASED
        return vals, status

    def restrict(self, lo: int | None = None, hi: int | None = None,
                 interval=None) -> "QueryOracle":
        """Sub-oracle over ``[lo, hi]`` and value interval, sharing the counter."""
        lo = self.lo if lo is None else int(lo)
        hi = self.hi if hi is None else int(hi)
        if lo > hi:
            raise ValueError(f"empty index range [{lo}, {hi}]")
        if lo < self.lo or hi > self.hi:
            raise IndexError(f"[{lo}, {hi}] not within view [{self.lo}, {self.hi}]")
        a, b = self.interval
        if interval is not None:
            a, b = max(a, float(interval[0])), min(b, float(interval[1]))
        return QueryOracle(self.target, _counter=self._counter, lo=lo, hi=hi, interval=(a, b))


# --- instance files -------------------------------------------------------

def write_instance(path, arr: ErasedArray) -> None:
    """Text format: ``n <n>``, optional ``r <r>``, then one value or ``ERASED`` per line."""
    lines = [f"n {arr.n}"]
    if arr.r is not None:
        lines.append(f"r {arr.r}")
    for v, e in zip(arr.values.tolist(), arr.erased.tolist()):
        lines.append("ERASED" if e else repr(v))
    Path(path).write_text("\n".join(lines) + "\n")


def read_instance(path) -> ErasedArray:
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("n "):
        raise ValueError(f"{path}: first line must be 'n <n>'")
    n = int(lines[0].split()[1])
    body = lines[1:]
    r = None
    if body and body[0].startswith("r "):
        r = int(body[0].split()[1])
        body = body[1:]
    if len(body) != n:
        raise ValueError(f"{path}: header says n={n} but found {len(body)} entries")
    values = np.zeros(n)
    erased = np.zeros(n, dtype=bool)
    for k, tok in enumerate(body):
        if tok == "ERASED":
            erased[k] = True
        else:
            try:
                values[k] = float(tok)
            except ValueError:
                raise ValueError(f"{path}: line {k + 2 + (r is not None)}: bad value {tok!r}") from None
    return ErasedArray(values, erased, r)


@dataclass
class EstimateReport:
    """Outcome of one estimator run."""

    estimate: float
    query_count: int
    params: dict = field(default_factory=dict)
    seed: int | None = None
    diagnostics: dict = field(default_factory=dict)
    wall_time: float = 0.0
    ground_truth: float | None = None
