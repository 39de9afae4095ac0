"""Multiplicative LIS estimation with about sqrt(r) queries.

Shows the intermediate structures (grid, dense cells, chains) and the effect
of the number of distinct values on the query count.

Run: python demos/sqrt_walkthrough.py
"""

from sublis import QueryOracle, lambda_sweep, lis_exact, make_rng
from sublis.bench import generate
from sublis.sqrt import estimate_lis_multiplicative, split_chain

n = 1 << 16
for family, blowup in (("half-decreasing", 1), ("half-decreasing", 256), ("identity", 64)):
    arr, _ = generate(family, n, make_rng(2), blowup=blowup)
    r = arr.distinct_count()
    truth = lis_exact(arr.values)
    o = QueryOracle(arr)
    rep = estimate_lis_multiplicative(o, r, 0.5, 0.25, make_rng(3))
    d = rep.diagnostics
    print(f"{family} r={r}: truth={truth} estimate={rep.estimate:.0f} queries={o.count}")
    print(f"  layers={d['layers']} dense boxes={d['dense_boxes']} cells={d['cells']} "
          f"chains={d['chains']} antichains removed={d['antichain_rounds']}")
    pipe = d["pipeline"]
    if pipe.chains:
        best = max(range(len(pipe.chains)), key=lambda k: max(pipe.chain_estimates[k]))
        C_H, C_V = split_chain(pipe.chains[best])
        lh, lv = pipe.chain_estimates[best]
        print(f"  best chain: {len(C_H)} horizontal blocks -> {lh:.0f}, "
              f"{len(C_V)} vertical blocks -> {lv:.0f}")

# without a known lower bound on the LIS fraction, sweep lambda
arr, _ = generate("random-r", n, make_rng(4), r=64)
rep = lambda_sweep(QueryOracle(arr), 64, 0.25, make_rng(5))
print(f"random-r sweep: truth={lis_exact(arr.values)} estimate={rep.estimate:.0f} "
      f"lambda used={rep.params['lambda_used']}")
