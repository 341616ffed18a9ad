"""
Minimum-cost schemes
====================

The cheapest scheme solves a small integer program.  With clients sorted by
cost the optimum never increases, and the solver searches only those
vectors.  A brute-force scan over every bounded vector confirms it on small
instances.
"""

# %%
import time

import numpy as np

import csiexchange as cx

# unit costs: the fewest packets for n clients
for n in range(3, 11):
    s = cx.solve_min_transmissions(n)
    print(n, s.total_transmissions, s.scheme)

# %%
rng = np.random.default_rng(42)
problem = cx.ExchangeProblem(6, rng.integers(1, 10, size=6).tolist())
fast = cx.solve_min_cost(problem)
oracle = cx.brute_force_solve(problem, y_cap=6)
print("costs", [int(c) for c in problem.costs])
print("solver", fast.scheme, fast.cost)
print("oracle", oracle.scheme, oracle.cost)
print("in cost order", fast.sorted_scheme)

# %%
# A very cheap client cannot take over: any n - 1 clients must still send
# C(n-1, 2) packets among themselves.
skewed = cx.ExchangeProblem(5, [1, 50, 50, 50, 50])
print(cx.solve_min_cost(skewed).scheme)

# costs may be fractions; they are kept exact
print(cx.solve_min_cost(cx.ExchangeProblem(4, ["0.5", "1/3", 2, 2])).cost)

# %%
# The search stays fast well beyond brute-force range.
for n in (10, 15, 20):
    p = cx.ExchangeProblem(n, rng.integers(1, 100, size=n).tolist())
    t0 = time.perf_counter()
    s = cx.solve_min_cost(p)
    print(n, s.cost, s.total_transmissions, f"{time.perf_counter() - t0:.2f}s")
