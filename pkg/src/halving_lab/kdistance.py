"""k-distance functions, distance-like functions and their traces at infinity.

A distance-like function is ``phi(x) = sqrt(min_q |x - q|^2 + w_q)`` over
weighted sites ``(q, w_q)`` with ``w_q >= 0``. The k-distance to a point set
``P`` is one of these: its sites are the centroids of k-subsets of ``P``,
weighted by the mean squared spread of the subset around its centroid.
That rewriting is exact (parallel-axis identity) but has C(|P|, k) sites.
"""
from dataclasses import dataclass
import enum
from itertools import combinations
from math import comb

import numpy as np

from . import _budget, _lp
from .errors import InvalidArgumentError
from .geom_core import PointCloud, as_points


@dataclass(frozen=True)
class WeightedSites:
    """Sites ``q`` with non-negative weights ``w_q`` (squared-length units)."""

    dim: int
    sites: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.sites, dtype=float)
        w = np.asarray(self.weights, dtype=float).ravel()
        if q.ndim != 2 or q.shape[1] != self.dim:
            raise InvalidArgumentError(f"sites must have shape (n, {self.dim}), got {q.shape}")
        if q.shape[0] == 0 or q.shape[0] != w.size:
            raise InvalidArgumentError("need at least one site and exactly one weight per site")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise InvalidArgumentError("weights must be finite and non-negative")
        q.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "sites", q)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return self.sites.shape[0]


@dataclass(frozen=True)
class KDistSpec:
    """The k-distance to the point set ``cloud``."""

    cloud: PointCloud
    k: int

    def __post_init__(self):
        if not isinstance(self.cloud, PointCloud):
            pts = as_points(self.cloud)
            object.__setattr__(self, "cloud", PointCloud(pts.shape[1], pts))
        n = len(self.cloud)
        if not (1 <= self.k <= n):
            raise InvalidArgumentError(f"k must lie in [1, {n}], got {self.k}")

    @property
    def dim(self):
        return self.cloud.dim


def _queries(x, dim):
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if X.shape[1] != dim:
        raise InvalidArgumentError(f"dimension mismatch: query d={X.shape[1]}, expected {dim}")
    return X, single


def _sq_dists(X, Y):
    return np.sum((X[:, None, :] - Y[None, :, :]) ** 2, axis=2)


def _chunked(X, fn, n_cols):
    # keep the (rows x n_cols) intermediate near 4M doubles
    step = max(1, 4_000_000 // max(n_cols, 1))
    return np.concatenate([fn(X[i:i + step]) for i in range(0, X.shape[0], step)]) if X.shape[0] else np.empty(0)


def eval_kdistance(spec, x):
    """k-distance ``d_{P,k}(x)``: root mean of the k smallest squared distances.

    ``x`` is one point (returns a float) or an (m, d) array (returns m values).
    """
    X, single = _queries(x, spec.dim)
    P = spec.cloud.points
    k = spec.k

    def block(Xb):
        d2 = _sq_dists(Xb, P)
        if k < d2.shape[1]:
            d2 = np.partition(d2, k - 1, axis=1)[:, :k]
        return np.sqrt(np.mean(d2, axis=1))

    out = _chunked(X, block, len(P))
    return float(out[0]) if single else out


def _subset_sites(P, idx):
    groups = P[idx]  # (m, k, d)
    centroids = groups.mean(axis=1)
    weights = np.mean(np.sum((groups - centroids[:, None, :]) ** 2, axis=2), axis=1)
    return centroids, weights


def centroid_sites(spec, policy="full"):
    """Weighted centroid sites of k-point subsets of the cloud.

    ``policy="full"`` enumerates all C(|P|, k) subsets, which represents the
    k-distance exactly. ``policy="witnessed"`` keeps one subset per sample
    point, namely the point together with its k - 1 nearest neighbours, giving
    a linear number of sites and an upper approximation of the k-distance.
    """
    P = spec.cloud.points
    n, d, k = len(P), spec.dim, spec.k
    if policy == "full":
        count = comb(n, k)
        _budget.check_enumeration(count, d + 1 + k, f"full enumeration of C({n},{k}) subsets")
        idx = np.fromiter(
            (i for c in combinations(range(n), k) for i in c), dtype=np.intp, count=count * k
        ).reshape(count, k)
    elif policy == "witnessed":
        d2 = _sq_dists(P, P)
        idx = np.argsort(d2, axis=1, kind="stable")[:, :k]
    else:
        raise InvalidArgumentError(f"unknown enumeration policy {policy!r}")
    centroids, weights = _subset_sites(P, idx)
    return WeightedSites(d, centroids, np.maximum(weights, 0.0))


def eval_distance_like(sites, x):
    """``phi(x) = sqrt(min_q |x - q|^2 + w_q)``; vectorized like :func:`eval_kdistance`."""
    X, single = _queries(x, sites.dim)
    Q, w = sites.sites, sites.weights

    def block(Xb):
        return np.sqrt(np.min(_sq_dists(Xb, Q) + w[None, :], axis=1))

    out = _chunked(X, block, len(Q))
    return float(out[0]) if single else out


def ray_support_estimate(sites, u, t):
    """``t - phi(t u)``, which tends to h(K(phi), u) as t grows.

    The result lies in ``[h - max_q(w_q + |q|^2) / t, h]`` once ``t`` exceeds
    twice the largest site norm. Computed as
    ``A / (t + sqrt(t^2 - A))`` with ``A = max_q(2 t u.q - |q|^2 - w_q)`` to
    avoid cancelling two numbers of size t.
    """
    if not t > 0:
        raise InvalidArgumentError("t must be positive")
    u = np.asarray(u, dtype=float)
    Q, w = sites.sites, sites.weights
    A = np.max(2.0 * t * (Q @ u) - np.sum(Q * Q, axis=1) - w)
    return float(A / (t + np.sqrt(t * t - A)))


def ray_remainder_bound(sites, t):
    """Upper bound ``max_q(w_q + |q|^2) / t`` on the ray estimate's error."""
    return float(np.max(sites.weights + np.sum(sites.sites ** 2, axis=1)) / t)


def _locate(q, Q):
    hits = np.flatnonzero(np.all(Q == q, axis=1))
    if hits.size == 0:
        raise InvalidArgumentError(f"point {q.tolist()} is not in the set")
    return int(hits[0])


def is_extreme(q, Q):
    """Whether ``q`` is an extreme point of conv(Q).

    Solves ``max s`` subject to ``u.(p - q) + s <= 0`` for every p of Q distinct
    from q, with u in the unit box; q is extreme iff the optimal margin
    exceeds 1e-9.
    """
    Q = as_points(Q)
    q = np.asarray(q, dtype=float).ravel()
    _locate(q, Q)
    others = Q[~np.all(Q == q, axis=1)]
    return _lp.max_margin(others - q, np.zeros(len(others))) > _lp.MARGIN_TOL


def on_hull_boundary(q, Q):
    """Whether some nonzero u has ``u.(p - q) <= 0`` for all p in Q."""
    Q = as_points(Q)
    q = np.asarray(q, dtype=float).ravel()
    _locate(q, Q)
    return not _lp.cone_is_trivial(Q - q)


def trace_at_infinity(sites):
    """Extreme points of conv(sites); weights play no role.

    Boundary points that are not extreme are dropped, and coincident sites
    are reported once.
    """
    Q = sites.sites if isinstance(sites, WeightedSites) else as_points(sites)
    Q = np.unique(Q, axis=0)
    keep = [i for i in range(len(Q)) if is_extreme(Q[i], Q)]
    return Q[keep]


class CellStatus(str, enum.Enum):
    EMPTY = "empty"
    BOUNDED = "bounded"
    UNBOUNDED = "unbounded"


def power_cell_status(index, sites):
    """Classify the power cell of site ``index`` as empty, bounded or unbounded.

    The cell is ``{x : 2 x.(p - q) <= |p|^2 - |q|^2 + w_p - w_q for all p}``.
    Nonemptiness is a margin LP on that system; a nonempty cell is unbounded
    iff its recession cone ``{u : u.(p - q) <= 0}`` contains a nonzero vector.
    """
    n = len(sites)
    if not (0 <= index < n):
        raise InvalidArgumentError(f"site index {index} out of range [0, {n})")
    Q, w = sites.sites, sites.weights
    q = Q[index]
    mask = np.arange(n) != index
    P = Q[mask]
    diff = P - q
    b = np.sum(P * P, axis=1) - q @ q + w[mask] - w[index]
    if _lp.max_margin(2.0 * diff, b, free_x=True) < -_lp.MARGIN_TOL:
        return CellStatus.EMPTY
    if _lp.cone_is_trivial(diff):
        return CellStatus.BOUNDED
    return CellStatus.UNBOUNDED
