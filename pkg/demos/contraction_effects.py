"""
How channel contraction tightens information budgets
====================================================

A bit pushed through a binary symmetric channel loses a fixed fraction of
its information, and the loss compounds over repeated uses. This script
checks the closed form against the numeric search, then shows the compound
rule capping the exact mutual information of a repetition scheme.
"""

import numpy as np

from bayeslb.info import DiscreteDistribution, bsc
from bayeslb.sdpi import eta_bsc, eta_numeric, eta_multi_use
from bayeslb.simulate import exact_chain_mi

fair = DiscreteDistribution(np.array([0.5, 0.5]))

print("crossover   closed form   numeric search")
for eps in (0.1, 0.25, 0.4):
    closed = eta_bsc(eps).value
    numeric = eta_numeric(fair, bsc(eps)).value
    print(f"  {eps:.2f}       {closed:.6f}      {numeric:.6f}")

# Repeated uses: the fraction of information surviving T uses is at most
# 1 - (1 - eta)^T, and the exact enumeration shows the cap is never tight
# for T >= 2 (the repeated looks overlap in what they reveal).

print()
print("T   exact I(W;V^T)   1-(1-eta)^T   slack")
eps = 0.25
eta = eta_bsc(eps).value
for uses in range(1, 5):
    mi = exact_chain_mi(fair, [bsc(eps)], uses)
    cap = eta_multi_use(eta, uses).value
    print(f"{uses}   {mi:.6f}         {cap:.6f}      {cap - mi:.6f}")

# The same cap is what the scenario reports multiply the bit budget by:
# b bits through T noisy uses are worth at most b (1 - (1-eta)^T) bits.
