"""
The k-distance and its witnessed approximation
==============================================

"""

# the k-distance to a point cloud is the root mean squared distance to the
# k nearest sample points; it is a power distance to the centroids of all
# k-subsets
import numpy as np
from halving_lab import KDistSpec, PointCloud, centroid_sites, eval_distance_like, eval_kdistance

rng = np.random.default_rng(0)
P = PointCloud(2, rng.normal(size=(30, 2)))
spec = KDistSpec(P, 5)

X = rng.uniform(-3, 3, size=(1000, 2))
exact = eval_kdistance(spec, X)
print("k-distance on 1000 probes: min %.3f, max %.3f" % (exact.min(), exact.max()))

# keeping only the centroids of each point's k nearest neighbours gives a
# function with one site per sample point, which never undershoots
psi = centroid_sites(spec, "witnessed")
approx = eval_distance_like(psi, X)
print("witnessed sites:", len(psi))
print("largest gap on the probes: %.4f" % np.max(approx - exact))
print("never below the k-distance:", bool(np.all(approx >= exact - 1e-12)))

# far from the data the function looks like t minus the support of the site hull
from halving_lab.kdistance import ray_support_estimate, ray_remainder_bound
from halving_lab.geom_core import support_points

u = np.array([0.6, 0.8])
for t in (1e1, 1e3, 1e6):
    est = ray_support_estimate(psi, u, t)
    print("t=%-8g estimate %.8f  (error bound %.2e)" % (t, est, ray_remainder_bound(psi, t)))
print("support of the site hull     %.8f" % support_points(psi.sites, u))
