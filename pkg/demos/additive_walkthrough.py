"""Additive-error LIS estimation on arrays with few distinct values.

Run: python demos/additive_walkthrough.py
"""

import numpy as np

from sublis import ErasedArray, QueryOracle, estimate_lis_additive, lis_exact, make_rng
from sublis.bench import random_blockwise

n, r, eps = 180_000, 6, 0.1
rng = make_rng(1)
arrays = {
    "staircase": np.repeat(np.arange(1.0, r + 1), n // r),
    "random blocks": random_blockwise(n, r, rng, blocks=41).astype(float),
    "noisy staircase": np.where(rng.random(n) < 0.2, rng.integers(1, r + 1, size=n),
                                np.repeat(np.arange(1, r + 1), n // r)).astype(float),
}
for name, vals in arrays.items():
    o = QueryOracle(ErasedArray(vals))
    rep = estimate_lis_additive(o, r, eps, rng)
    truth = lis_exact(vals)
    print(f"{name:16s} truth={truth:7d} estimate={rep.estimate:9.1f} "
          f"error={abs(rep.estimate - truth) / n:.4f}n queries={o.count} "
          f"(t={rep.params['t']}, s={rep.params['s']})")
