"""Support functions of k-set and halving polyhedra.

The k-set polyhedron of P is the convex hull of the centroids of all
k-point subsets. Its vertices are exponential in number, but its support
function is cheap: the mean of the k largest values of ``u.p``.
"""
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from . import _budget
from .errors import InvalidArgumentError
from .geom_core import PointCloud, as_points
from .kdistance import is_extreme

ENTRY_TOL = 1e-12


@dataclass(frozen=True)
class KSetSpec:
    cloud: PointCloud
    k: int

    def __post_init__(self):
        if not isinstance(self.cloud, PointCloud):
            pts = as_points(self.cloud)
            object.__setattr__(self, "cloud", PointCloud(pts.shape[1], pts))
        n = len(self.cloud)
        if not (1 <= self.k <= n):
            raise InvalidArgumentError(f"k must lie in [1, {n}], got {self.k}")


@dataclass(frozen=True)
class HalvingSpec:
    """The halving polyhedron of ``base`` together with its negation."""

    base: PointCloud

    def __post_init__(self):
        if not isinstance(self.base, PointCloud):
            pts = as_points(self.base)
            object.__setattr__(self, "base", PointCloud(pts.shape[1], pts))
        if len(self.base) < 1:
            raise InvalidArgumentError("the halving polyhedron needs at least one point")

    @property
    def N(self):
        return len(self.base)


def symmetrize(P):
    """``P`` followed by ``-P``."""
    if not isinstance(P, PointCloud):
        pts = as_points(P)
        P = PointCloud(pts.shape[1], pts)
    return PointCloud(P.dim, np.concatenate([P.points, -P.points]), spherical=P.spherical)


def _top_k_mean(values, k, axis=-1):
    """Mean of the k largest entries along ``axis``."""
    n = values.shape[axis]
    if k < n:
        values = np.partition(values, n - k, axis=axis)
        values = np.take(values, np.arange(n - k, n), axis=axis)
    return np.mean(values, axis=axis)


def top_k_average(x, k):
    """Largest average of k entries of ``x``, each entry in [-1, 1]."""
    x = np.asarray(x, dtype=float).ravel()
    if not (1 <= k <= x.size):
        raise InvalidArgumentError(f"k must lie in [1, {x.size}], got {k}")
    if np.any(np.abs(x) > 1 + ENTRY_TOL):
        raise InvalidArgumentError("entries must lie in [-1, 1]")
    return float(_top_k_mean(x, k))


def support_kset(spec, u):
    """h(K_k(P), u): mean of the k largest ``u.p``.

    ``u`` may be an (m, d) array of directions.
    """
    P = spec.cloud.points
    U = np.asarray(u, dtype=float)
    if U.shape[-1] != spec.cloud.dim:
        raise InvalidArgumentError("dimension mismatch between cloud and direction")
    if U.ndim == 1:
        return float(_top_k_mean(P @ U, spec.k))
    return _top_k_mean(P @ U.T, spec.k, axis=0)


def support_halving(spec, u):
    """h(L_N(P), u) = (1/N) sum_p |u.p|; vectorized over rows of ``u``."""
    P = spec.base.points
    U = np.asarray(u, dtype=float)
    if U.shape[-1] != spec.base.dim:
        raise InvalidArgumentError("dimension mismatch between cloud and direction")
    if U.ndim == 1:
        return float(np.mean(np.abs(P @ U)))
    return np.mean(np.abs(P @ U.T), axis=0)


def kset_centroids(spec, max_subsets=_budget.MAX_KSET_EXTREME_SUBSETS):
    P = spec.cloud.points
    n, k = len(P), spec.k
    _budget.check_enumeration(comb(n, k), P.shape[1], f"centroids of C({n},{k}) subsets", max_subsets)
    return np.array([P[list(c)].mean(axis=0) for c in combinations(range(n), k)])


def kset_extreme_points(spec, max_subsets=_budget.MAX_KSET_EXTREME_SUBSETS):
    """Vertices of K_k(P) by centroid enumeration; refused above ``max_subsets``."""
    C = kset_centroids(spec, max_subsets)
    # rounding merges centroids of different subsets that coincide
    C = np.unique(np.round(C, 12), axis=0)
    return C[[i for i in range(len(C)) if is_extreme(C[i], C)]]
