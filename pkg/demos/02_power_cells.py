"""
Power cells and the trace at infinity
=====================================

"""

# three collinear sites, with a heavy weight on the middle one
import numpy as np
from halving_lab import WeightedSites
from halving_lab.kdistance import is_extreme, on_hull_boundary, power_cell_status, trace_at_infinity

Q = np.array([[0.0, -1.0], [0.0, 0.0], [0.0, 1.0]])
for w in (0.5, 1.0, 1.5):
    s = WeightedSites(2, Q, [0.0, w, 0.0])
    print("middle weight %.1f -> middle cell %s" % (w, power_cell_status(1, s).value))

# the middle site sits on the hull boundary but is not a vertex, and with
# weight 1.5 its cell is empty: being on the boundary does not force an
# unbounded cell
print("on boundary:", on_hull_boundary(Q[1], Q), " extreme:", is_extreme(Q[1], Q))

# vertices of the hull always own unbounded cells
rng = np.random.default_rng(3)
s = WeightedSites(3, rng.normal(size=(12, 3)), rng.uniform(0, 1, 12))
trace = trace_at_infinity(s)
print("trace vertices:", len(trace), "of", len(s), "sites")
for i, q in enumerate(s.sites):
    print(i, "extreme" if is_extreme(q, s.sites) else "      -", power_cell_status(i, s).value)
