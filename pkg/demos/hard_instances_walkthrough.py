"""The D0 / D1 families and their recursive versions.

Both families look alike to few queries but sit at different distances from
monotonicity.

Run: python demos/hard_instances_walkthrough.py
"""

import numpy as np

from sublis import detect_bad_event, distance_to_monotonicity, make_rng, sample_D, sample_Dh

v0, c0 = sample_D(16, 0, (3, 1), make_rng(0))
v1, c1 = sample_D(16, 1, (3, 1), make_rng(0))
print("D0 sample", v0.tolist(), "coins", c0.tolist())
print("D1 sample", v1.tolist(), "coins", c1.tolist())

n = 1 << 14
for variant in (0, 1):
    d = [distance_to_monotonicity(sample_D(n, variant, (8, 2), make_rng(s))[0]) / n for s in range(50)]
    print(f"D{variant}: mean distance {np.mean(d):.4f}n (spread {np.std(d):.4f})")

n = 1 << 16
for variant in (0, 1):
    d = [distance_to_monotonicity(sample_Dh(n, variant, (12, 7, 2), make_rng(s))[0]) / n
         for s in range(20)]
    print(f"D{variant}^(3): mean distance {np.mean(d):.4f}n")

# a query set only distinguishes the families when it holds two cousin pairs
rng = make_rng(1)
hits = sum(detect_bad_event(rng.integers(1, n + 1, size=200), 12, 2, n) for _ in range(500))
print(f"random 200-point query sets with the distinguishing pattern: {hits}/500")
