"""Monte Carlo harnesses for halving-polyhedron roundness and its consequences.

Three experiments share one config type:

* ``run_halving_experiment`` samples N sphere points, evaluates the support
  function of the rescaled halving polyhedron on a delta-net and records
  whether the ball-closeness certificate applies.
* ``run_general_k_experiment`` does the same for k-set polyhedra with
  arbitrary k, estimating the unknown radius empirically and comparing the
  tails with the Lipschitz-Chernoff union bound.
* ``run_complexity_experiment`` approximates the halving distance by the
  witnessed construction, measures the sup-norm gap on probe points and
  reports the complexity lower bounds next to the witnessed site count.

Trial ``i`` draws from the stream ``(seed, STREAM_TRIAL, i)``, so reports
do not depend on the number of worker threads.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
import math
import os
import time

import numpy as np

from . import _budget
from .errors import InvalidArgumentError, PreconditionViolation
from .geom_core import (
    ball_deviation,
    build_delta_net,
    certify_from_support,
    hausdorff_to_ball_certified,
    sample_sphere,
)
from .kdistance import KDistSpec, WeightedSites, centroid_sites, eval_distance_like, eval_kdistance, trace_at_infinity
from .moments import mean_abs_dot, variance_abs_dot
from .polytopes import HalvingSpec, KSetSpec, support_halving, support_kset, symmetrize
from .rng import STREAM_FRESH_TRIAL, STREAM_NET, STREAM_PROBES, STREAM_TRIAL, derive_rng


# -- bound calculators ------------------------------------------------------


def bernstein_bound(N, eps, var):
    """Two-sided Bernstein tail for the mean of N variables in [0, 1], clamped to 1."""
    if N < 1 or not eps > 0 or var < 0:
        raise InvalidArgumentError("need N >= 1, eps > 0, var >= 0")
    return min(1.0, 2.0 * math.exp(-N * eps * eps / (2.0 * var + 2.0 * eps / 3.0)))


def lipschitz_chernoff_bound(N, alpha, eps):
    """``2 exp(-eps^2 / (4 alpha^2 N))`` for an alpha-Lipschitz (l1) function of N
    bounded i.i.d. variables, clamped to 1."""
    if N < 1 or not alpha > 0 or eps < 0:
        raise InvalidArgumentError("need N >= 1, alpha > 0, eps >= 0")
    return min(1.0, 2.0 * math.exp(-eps * eps / (4.0 * alpha * alpha * N)))


def theorem_delta(d, eta):
    return min(eta, 1.0 / math.sqrt(d))


def theorem_main_exponent(d, N, eta, c):
    """Raw exponent ``c (d log(1/delta) - N eta^2)``, delta = min(eta, 1/sqrt(d))."""
    return c * (d * math.log(1.0 / theorem_delta(d, eta)) - N * eta * eta)


def theorem_main_bound(d, N, eta, c):
    """Guaranteed probability ``max(0, 1 - 2 exp(exponent))`` that the rescaled
    halving polyhedron is eta-close to the unit ball."""
    if min(d, N, eta, c) <= 0:
        raise InvalidArgumentError("d, N, eta and c must be positive")
    x = theorem_main_exponent(d, N, eta, c)
    if x > 700:
        return 0.0
    return max(0.0, 1.0 - 2.0 * math.exp(x))


def corollary_min_N(d, eta, C_kappa):
    """Smallest integer N with ``N >= (d / eta^2)(log d + C_kappa)``."""
    if d < 2 or not (0 < eta <= 1):
        raise InvalidArgumentError("need d >= 2 and eta in (0, 1]")
    return int(math.ceil(d / eta ** 2 * (math.log(d) + C_kappa)))


def approx_lower_bound(d, N, C_kappa):
    """``2 sqrt(d) (N / (64 d (log d + C_kappa)))^((d-1)/4)``."""
    base = N / (64.0 * d * (math.log(d) + C_kappa))
    if not base > 0 or d <= 0:
        raise InvalidArgumentError(f"power base must be positive, got {base}")
    return 2.0 * math.sqrt(d) * base ** ((d - 1) / 4.0)


def bronshteyn_lower(d, eta):
    """``2 sqrt(d) (8 eta)^(-(d-1)/2)``: vertex-count lower bound for a polytope
    within Hausdorff distance ``2 eta`` of the unit d-ball."""
    if not eta > 0 or d < 1:
        raise InvalidArgumentError("need eta > 0 and d >= 1")
    return 2.0 * math.sqrt(d) * (8.0 * eta) ** (-(d - 1) / 2.0)


def binomial_se(p, n):
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


# -- config and records -----------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    d: int
    N: int
    eta: float
    trials: int = 100
    seed: int = 0
    k: int | None = None
    eta_grid: tuple = ()
    net_delta: str | float = "auto"
    c_values: tuple = (0.1, 1.0)
    C_kappa: float = 1.0
    symmetrize: bool = False
    policy: str = "witnessed"
    n_random_probes: int = 500
    probe_radius: float = 3.0
    far_t: float = 1e3
    max_net_log_size: float = _budget.MAX_NET_LOG_SIZE

    def __post_init__(self):
        if self.d < 2:
            raise InvalidArgumentError("d must be >= 2")
        if self.N < 1:
            raise InvalidArgumentError("N must be >= 1")
        if not (0 < self.eta < 1):
            raise InvalidArgumentError("eta must lie in (0,1)")
        if self.trials < 1:
            raise InvalidArgumentError("trials must be >= 1")
        if self.seed < 0:
            raise InvalidArgumentError("seed must be >= 0")
        object.__setattr__(self, "eta_grid", tuple(float(e) for e in self.eta_grid))
        object.__setattr__(self, "c_values", tuple(float(c) for c in self.c_values))
        for e in self.eta_grid:
            if not (0 < e < 1):
                raise InvalidArgumentError("eta_grid entries must lie in (0,1)")
        if any(c <= 0 for c in self.c_values):
            raise InvalidArgumentError("c_values must be positive")
        if self.k is not None and not (1 <= self.k <= 2 * self.N):
            raise InvalidArgumentError(f"k must lie in [1, 2N] = [1, {2 * self.N}]")
        if self.net_delta != "auto":
            try:
                delta = float(self.net_delta)
            except (TypeError, ValueError):
                raise InvalidArgumentError("net_delta must be 'auto' or a number in (0,2]")
            if not (0 < delta <= 2):
                raise InvalidArgumentError("net_delta must be 'auto' or a number in (0,2]")
            object.__setattr__(self, "net_delta", delta)
        if self.policy not in ("witnessed", "full"):
            raise InvalidArgumentError("policy must be 'witnessed' or 'full'")
        if self.n_random_probes < 0 or not self.probe_radius > 0 or not self.far_t > 0:
            raise InvalidArgumentError("probe settings must be positive")

    @property
    def etas(self):
        return self.eta_grid or (self.eta,)

    def to_dict(self):
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = list(v) if isinstance(v, tuple) else v
        return out


@dataclass(frozen=True)
class TrialRecord:
    index: int
    stream: tuple
    deviation: float
    direction_support: float
    certified: bool | None = None
    certified_bound: float | None = None
    hausdorff_lo: float | None = None
    hausdorff_hi: float | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.deviation >= 0:
            raise InvalidArgumentError("deviation must be non-negative")

    def to_dict(self):
        out = asdict(self)
        out["stream"] = list(self.stream)
        extra = out.pop("extra")
        out.update(extra)
        return out


@dataclass
class ExperimentReport:
    kind: str
    config: ExperimentConfig
    trials: list
    summary: dict
    theory: dict
    moments: dict
    net: dict
    wall_clock_seconds: float = 0.0

    def to_dict(self):
        return {
            "kind": self.kind,
            "config": self.config.to_dict(),
            "moments": self.moments,
            "net": self.net,
            "summary": self.summary,
            "theory": self.theory,
            "trials": [t.to_dict() for t in self.trials],
            "wall_clock_seconds": self.wall_clock_seconds,
        }


# -- helpers ----------------------------------------------------------------


def _map_trials(fn, n, threads):
    if threads == 0:
        threads = os.cpu_count() or 1
    if threads <= 1 or n <= 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(n)))


def resolve_delta(config, scale):
    """Net radius: ``min(min eta, scale)`` under the auto policy."""
    if config.net_delta == "auto":
        return min(min(config.etas), scale)
    return float(config.net_delta)


def _net_for(config, delta):
    return build_delta_net(config.d, delta, derive_rng(config.seed, STREAM_NET), max_log_size=config.max_net_log_size)


def _net_summary(net):
    return {"size": len(net), "delta": net.delta, "verified": net.verified.value}


def _moment_summary(d):
    m = mean_abs_dot(d)
    return {"d": d, "m_d": m, "var_d": variance_abs_dot(d), "method": "quadrature"}


def _basis_direction(d):
    e = np.zeros(d)
    e[0] = 1.0
    return e


def support_ball_interval(support_values, scale, delta):
    """Certified interval for d_H(K / scale, B(0,1)) from net support values of
    a convex body K that contains the origin.

    The radius of K / scale is at most ``max(h) / (scale (1 - delta))`` by the
    Lipschitz self-bound, which enters the usual correction.
    """
    h = np.asarray(support_values) / scale
    lo = ball_deviation(h, 1.0)
    r = float(np.max(h)) / (1.0 - delta) if delta < 1 else math.inf
    return lo, lo + r * delta


# -- halving experiment -----------------------------------------------------


def run_halving_experiment(config, threads=1):
    """Certificate frequency for the rescaled halving polyhedron of N sphere points."""
    t0 = time.perf_counter()
    d, N, eta = config.d, config.N, config.eta
    m = mean_abs_dot(d)
    var = variance_abs_dot(d)
    delta = resolve_delta(config, m)
    if delta > min(eta, m) * (1 + 1e-12):
        raise PreconditionViolation(f"net_delta={delta} exceeds min(eta, m_d)={min(eta, m)}")
    net = _net_for(config, delta)
    U = net.directions
    u0 = _basis_direction(d)

    def trial(i):
        P = sample_sphere(d, N, derive_rng(config.seed, STREAM_TRIAL, i))
        spec = HalvingSpec(P)
        h = support_halving(spec, U)
        bound = certify_from_support(h, m, eta, net.delta)
        lo, hi = support_ball_interval(h, m, net.delta)
        return TrialRecord(
            index=i,
            stream=(config.seed, STREAM_TRIAL, i),
            deviation=ball_deviation(h / m, 1.0),
            direction_support=support_halving(spec, u0),
            certified=bound is not None,
            certified_bound=bound,
            hausdorff_lo=lo,
            hausdorff_hi=hi,
        )

    records = _map_trials(trial, config.trials, threads)
    T = len(records)
    fail = sum(not r.certified for r in records) / T
    h0 = np.array([r.direction_support for r in records])
    summary = {
        "failure_frequency": fail,
        "failure_se": binomial_se(fail, T),
        "mean_deviation": float(np.mean([r.deviation for r in records])),
        "max_deviation": float(np.max([r.deviation for r in records])),
        "direction_support_mean": float(np.mean(h0)),
        "direction_support_se": float(math.sqrt(var / (N * T))),
        "certified_bound": 5.0 * eta,
    }
    per_direction = bernstein_bound(N, eta * m, var)
    theory = {
        "theorem_delta": theorem_delta(d, eta),
        "theorem_main": [
            {"c": c, "exponent": theorem_main_exponent(d, N, eta, c), "probability": theorem_main_bound(d, N, eta, c)}
            for c in config.c_values
        ],
        "bernstein_per_direction": per_direction,
        "bernstein_union": min(1.0, len(net) * per_direction),
        "corollary_min_N": corollary_min_N(d, eta, config.C_kappa) if eta <= 1 else None,
    }
    return ExperimentReport(
        "halving", config, records, summary, theory, _moment_summary(d), _net_summary(net),
        time.perf_counter() - t0,
    )


# -- general-k experiment ---------------------------------------------------


def _general_cloud(config, rng):
    P = sample_sphere(config.d, config.N, rng)
    return symmetrize(P) if config.symmetrize else P


def run_general_k_experiment(config, threads=1):
    """Tail frequencies of max_u |h(M_{N,k}, u) - r| against the Chernoff union bound.

    The radius r is estimated from ``trials`` clouds in the fixed direction
    e_1; tails are measured on ``trials`` fresh clouds from a separate stream.
    """
    t0 = time.perf_counter()
    d = config.d
    n_points = config.N * (2 if config.symmetrize else 1)
    k = config.k if config.k is not None else config.N
    if k > n_points:
        raise InvalidArgumentError(f"k must lie in [1, {n_points}]")
    u0 = _basis_direction(d)

    def estimate(i):
        cloud = _general_cloud(config, derive_rng(config.seed, STREAM_TRIAL, i))
        return support_kset(KSetSpec(cloud, k), u0)

    h0 = np.array(_map_trials(estimate, config.trials, threads))
    r_hat = float(np.mean(h0))
    if not r_hat > 0:
        raise PreconditionViolation(f"estimated radius {r_hat} is not positive")
    delta = resolve_delta(config, mean_abs_dot(d))
    net = _net_for(config, delta)
    U = net.directions
    etas = config.etas

    def fresh(i):
        cloud = _general_cloud(config, derive_rng(config.seed, STREAM_FRESH_TRIAL, i))
        spec = KSetSpec(cloud, k)
        h = support_kset(spec, U)
        gap = float(np.max(np.abs(h - r_hat)))
        return TrialRecord(
            index=i,
            stream=(config.seed, STREAM_FRESH_TRIAL, i),
            deviation=gap / r_hat,
            direction_support=support_kset(spec, u0),
            extra={"estimate_support": float(h0[i])},
        )

    records = _map_trials(fresh, config.trials, threads)
    T = len(records)
    gaps = np.array([r.deviation for r in records]) * r_hat
    tails = []
    for e in etas:
        freq = float(np.mean(gaps >= e * r_hat))
        per_dir = lipschitz_chernoff_bound(n_points, 1.0 / k, e * r_hat)
        tails.append({
            "eta": e,
            "empirical_tail": freq,
            "empirical_se": binomial_se(freq, T),
            "bound": min(1.0, len(net) * per_dir),
            "bound_exponent": -0.25 * k * k / n_points * e * e * r_hat * r_hat,
        })
    summary = {
        "k": k,
        "n_points": n_points,
        "radius_estimate": r_hat,
        "radius_se": float(np.std(h0, ddof=1) / math.sqrt(T)) if T > 1 else math.nan,
        "tails": tails,
    }
    theory = {"union_size": len(net), "lipschitz_constant": 1.0 / k}
    return ExperimentReport(
        "general-k", config, records, summary, theory, _moment_summary(d), _net_summary(net),
        time.perf_counter() - t0,
    )


# -- complexity experiment --------------------------------------------------


def _evaluator(f):
    if isinstance(f, WeightedSites):
        return lambda X: eval_distance_like(f, X)
    if isinstance(f, KDistSpec):
        return lambda X: eval_kdistance(f, X)
    if callable(f):
        return f
    raise InvalidArgumentError(f"cannot evaluate {type(f).__name__}")


def measure_sup_error(phi, psi, probes):
    """max over probes of |phi - psi|: a lower bound on the sup-norm distance.

    ``phi`` and ``psi`` are :class:`WeightedSites`, :class:`KDistSpec` or
    vectorized callables.
    """
    X = np.atleast_2d(np.asarray(probes, dtype=float))
    if X.shape[0] == 0 or X.size == 0:
        raise InvalidArgumentError("need at least one probe point")
    return float(np.max(np.abs(_evaluator(phi)(X) - _evaluator(psi)(X))))


def probe_grid(S, net, rng, n_random, radius, far_t):
    """Sample points, uniform points of B(0, radius), and far ray points far_t * u."""
    d = S.shape[1]
    g = rng.standard_normal((n_random, d))
    g /= np.linalg.norm(g, axis=1)[:, None]
    ball = g * (radius * rng.random(n_random) ** (1.0 / d))[:, None]
    return np.concatenate([S, ball, far_t * net.directions])


def run_complexity_experiment(config, threads=1):
    """Witnessed approximation of the halving distance of a symmetrized sample."""
    t0 = time.perf_counter()
    d, N = config.d, config.N
    m = mean_abs_dot(d)
    delta = resolve_delta(config, m)
    net = _net_for(config, delta)

    def trial(i):
        rng = derive_rng(config.seed, STREAM_TRIAL, i)
        P = sample_sphere(d, N, rng)
        S = symmetrize(P)
        exact = KDistSpec(S, N)
        psi = centroid_sites(exact, config.policy)
        probes = probe_grid(
            S.points, net, derive_rng(config.seed, STREAM_PROBES, i),
            config.n_random_probes, config.probe_radius, config.far_t,
        )
        eps_hat = measure_sup_error(exact, psi, probes)
        trace = trace_at_infinity(psi)
        h_exact = support_halving(HalvingSpec(P), net.directions)
        k_lo, k_hi = support_ball_interval(h_exact, m, net.delta)
        psi_iv = hausdorff_to_ball_certified(trace / m, net)
        return TrialRecord(
            index=i,
            stream=(config.seed, STREAM_TRIAL, i),
            deviation=ball_deviation(h_exact / m, 1.0),
            direction_support=support_halving(HalvingSpec(P), _basis_direction(d)),
            hausdorff_lo=k_lo,
            hausdorff_hi=k_hi,
            extra={
                "site_count": len(psi),
                "trace_vertex_count": int(len(trace)),
                "sup_error_lower": eps_hat,
                "sup_error_over_m_d": eps_hat / m,
                "psi_trace_hausdorff_lo": psi_iv.lo,
                "psi_trace_hausdorff_hi": psi_iv.hi,
                "bronshteyn_lower_at_psi": bronshteyn_lower(d, psi_iv.hi / 2.0),
                "n_probes": int(len(probes)),
            },
        )

    records = _map_trials(trial, config.trials, threads)
    summary = {
        "site_count": [r.extra["site_count"] for r in records],
        "max_sup_error_lower": float(max(r.extra["sup_error_lower"] for r in records)),
    }
    theory = {
        "approx_lower_bound": approx_lower_bound(d, N, config.C_kappa),
        "bronshteyn_lower_at_eta": bronshteyn_lower(d, config.eta),
        "corollary_min_N": corollary_min_N(d, config.eta, config.C_kappa),
    }
    return ExperimentReport(
        "complexity", config, records, summary, theory, _moment_summary(d), _net_summary(net),
        time.perf_counter() - t0,
    )
