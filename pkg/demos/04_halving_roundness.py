"""
How round is a random halving polytope?
=======================================

"""

# the halving polytope of N sphere points has support (1/N) sum |u.p_i|;
# divided by m_d it approaches the unit ball as N grows
import numpy as np
from halving_lab import ExperimentConfig, mean_abs_dot, run_halving_experiment, sample_sphere
from halving_lab.geom_core import build_delta_net, hausdorff_to_ball_certified
from halving_lab.polytopes import HalvingSpec, support_halving

net = build_delta_net(3, 0.05, seed=0)
m = mean_abs_dot(3)
for N in (10, 100, 1000, 10000):
    P = sample_sphere(3, N, seed=N)
    h = support_halving(HalvingSpec(P), net.directions) / m
    print("N=%-6d support/m_d in [%.3f, %.3f]" % (N, h.min(), h.max()))

# the harness repeats this over many clouds and asks whether the
# certificate "distance to the ball <= 5 eta" can be issued
for N in (100, 500, 2000):
    rep = run_halving_experiment(ExperimentConfig(d=3, N=N, eta=0.2, trials=100, seed=1))
    s = rep.summary
    print("N=%-5d no-certificate frequency %.2f (se %.3f), theory at c=0.1: %.3f"
          % (N, s["failure_frequency"], s["failure_se"], rep.theory["theorem_main"][0]["probability"]))

# certified Hausdorff interval for one polytope, using its vertices
from itertools import combinations
P = sample_sphere(2, 6, seed=2).points
S = np.vstack([P, -P])
verts = np.array([S[list(c)].mean(axis=0) for c in combinations(range(12), 6)])
iv = hausdorff_to_ball_certified(verts / mean_abs_dot(2), build_delta_net(2, 0.01, seed=0))
print("d_H(K/m_2, B) in [%.4f, %.4f]" % (iv.lo, iv.hi))
