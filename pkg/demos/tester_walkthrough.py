"""Erasure-resilient monotonicity testing on a few arrays.

Run: python demos/tester_walkthrough.py
"""

import numpy as np

from sublis import ErasedArray, QueryOracle, erased_distance, er_test, make_rng
from sublis.bench import sawtooth

n, eps = 1 << 14, 0.2
rng = make_rng(0)

cases = {
    "sorted, 50% erased": ErasedArray(np.arange(float(n))).with_erasures(0.5, rng),
    "reversed": ErasedArray(np.arange(float(n))[::-1]),
    "sawtooth (period 4)": ErasedArray(sawtooth(n).astype(float)),
}
# a far array whose violations sit only under erasures is still accepted
hidden = np.arange(float(n))
hidden[::2] = hidden[::2][::-1]
cases["violations all erased"] = ErasedArray(hidden, erased=np.arange(n) % 2 == 0)

for name, arr in cases.items():
    o = QueryOracle(arr)
    v = er_test(o, eps, rng)
    print(f"{name:24s} erased_distance={erased_distance(arr) / n:.3f}n  "
          f"{v.decision:6s} after {v.runs} runs, {o.count} queries, witness={v.witness}")
