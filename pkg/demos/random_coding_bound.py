"""
Random coding in practice
=========================

If every client picks its coefficients uniformly from GF(q), a client can
decode with probability at least 1 - (n-1)(n-2)/(2q).  The bound is loose
for small fields; measured rates sit well above it.
"""

# %%
import numpy as np

import csiexchange as cx

for q, row in cx.table1_report().items():
    print(q, {n: str(v) for n, v in row.items()})

# %%
n = 6
y = cx.solve_min_transmissions(n).scheme
for m in (1, 2, 4, 8):
    report = cx.run_trials(n, y, cx.GF(m), trials=5000, seed=0)
    rates = np.array(report.per_client_success)
    print(f"q={report.q:4d}  bound={float(report.bound):+.4f}  "
          f"per-client {rates.min():.4f}..{rates.max():.4f}  all clients {report.all_clients_success:.4f}")

# %%
# The all-clients rate has no bound of its own; a union over the n clients
# gives a (weaker) reference line.
report = cx.run_trials(8, cx.solve_min_transmissions(8).scheme, cx.GF(8), trials=5000, seed=1)
print(report.all_clients_success, float(report.union_bound))
print(report.meets_bound(), report.threshold())
