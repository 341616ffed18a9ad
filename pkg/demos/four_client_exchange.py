"""
Four clients, unequal costs
===========================

Four clients each measure the links to the other three.  Every link value is
a packet held by its two endpoints; everyone wants all six.  Client i pays
i cost units per packet it broadcasts.  Sending as few packets as possible is
not the cheapest plan.
"""

# %%
import numpy as np

import csiexchange as cx

problem = cx.ExchangeProblem(4, [1, 2, 3, 4])
best = cx.solve_min_cost(problem)
fewest = cx.solve_min_transmissions(4)

print("cheapest   y =", best.scheme, "cost", best.cost, "packets", best.total_transmissions)
print("fewest     y =", fewest.scheme, "cost", cx.total_cost(problem, fewest.scheme),
      "packets", fewest.total_transmissions)

# %%
# The cheap clients carry the load and client 4 stays silent.  Is that
# scheme decodable?  Any 2 clients must jointly send >= 1 packet, any 3 >= 3.
print(cx.is_feasible(4, best.scheme).describe())
print(cx.is_feasible(4, (2, 2, 0, 0)).describe())

# %%
# A random code over GF(256): each sender mixes only the packets it holds.
field = cx.GF(8)
code, attempts = cx.construct_verified_code(4, best.scheme, field, seed=1)
print(f"decodable everywhere after {attempts} draw(s)")
print("encoding matrix (rows = packets, columns = transmissions)")
print(np.asarray(code.values))

# %%
# Broadcast some random link values and let every client solve for the rest.
rng = np.random.default_rng(0)
natives = field.random(6, rng)
sent = cx.encode(code, natives)
for i in range(1, 5):
    held = {p: natives[cx.packet_index(4, p)] for p in cx.held_packets(4, i)}
    got = cx.decode(code, i, cx.received_by(code, i, sent), held)
    print(i, {tuple(p): v for p, v in got.items()},
          all(v == natives[cx.packet_index(4, p)] for p, v in got.items()))
