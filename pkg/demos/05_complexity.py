"""
Complexity of approximating the halving distance
================================================

"""

# the halving distance of a symmetrized sample needs many sites to be
# approximated well; the witnessed construction uses one site per point
from halving_lab import ExperimentConfig, run_complexity_experiment
from halving_lab.experiments import approx_lower_bound, bronshteyn_lower, corollary_min_N

rep = run_complexity_experiment(ExperimentConfig(d=3, N=40, eta=0.3, trials=3, seed=0))
for t in rep.trials:
    e = t.extra
    print("sites %d, trace vertices %d, sup error >= %.4f, d_H(trace/m_d, B) in [%.3f, %.3f]"
          % (e["site_count"], e["trace_vertex_count"], e["sup_error_lower"],
             e["psi_trace_hausdorff_lo"], e["psi_trace_hausdorff_hi"]))

# the lower bounds only bite in high dimension
for d in (3, 10, 50, 200):
    N = corollary_min_N(d, 1.0, 1.0)
    print("d=%-4d N=%-8d lower bound %.3g, vertex bound at eta=1/32: %.3g"
          % (d, N, approx_lower_bound(d, N, 1.0), bronshteyn_lower(d, 1 / 32)))
