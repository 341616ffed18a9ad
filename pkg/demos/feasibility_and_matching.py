"""
When does a scheme work?
========================

A scheme y (packets per client) is decodable for everyone exactly when every
group of k < n clients sends at least C(k, 2) packets -- the k clients jointly
hold C(k, 2) packets nobody else has.  The same answer comes out of three
very different computations.
"""

# %%
from itertools import combinations

import numpy as np

import csiexchange as cx

n = 6
for y in [(2, 2, 2, 2, 2, 2), (4, 4, 3, 2, 1, 0), (4, 4, 2, 0, 0, 0), (1,) * 6]:
    fast = cx.is_feasible(n, y)
    slow = cx.is_feasible_exhaustive(n, y)
    per_client = cx.structural_certificate(n, y)
    print(y, bool(fast), bool(slow), per_client, "" if fast else fast.describe())

# %%
# The structural view: client i's receiving pattern marks which received
# transmissions may involve each wanted packet.  Full rank is possible iff
# every wanted packet can be matched to its own transmission.
pattern = cx.build_pattern(n, (4, 4, 3, 2, 1, 0))
allowed = pattern.receiving_pattern(1)
print(allowed.astype(int))

m = cx.lemma1_construct(allowed)
print(m)
print("rank over GF(2):", cx.GF(1).rank(m), "needed:", (n - 1) * (n - 2) // 2)

# %%
# A failing pattern comes with its witness: a set of wanted packets that
# share too few transmissions between them.
bad = cx.build_pattern(n, (4, 4, 2, 0, 0, 0)).receiving_pattern(1)
try:
    cx.lemma1_construct(bad)
except cx.InfeasiblePatternError as err:
    print(err)

# %%
# The packet-counting fact underneath: r packets always involve at least
# as many clients as the smallest k with C(k, 2) >= r.
packets = cx.packet_universe(5)
smallest = {}
for r in range(1, len(packets) + 1):
    smallest[r] = min(len(cx.idx_set(s)) for s in combinations(packets, r))
print({r: (smallest[r], cx.min_clients_covering(r)) for r in smallest})
