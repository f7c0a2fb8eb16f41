"""Sphere sampling, direction nets and support-function based distances.

Convex bodies are always represented by a finite generating point set; the
support function of ``conv(R)`` in direction ``u`` is ``max(R @ u)``.
Hausdorff distances are reported as certified intervals: the support gap is
maximized over a delta-net of directions, and the Lipschitz bound of the
support function turns the net maximum into an upper bound on the true
supremum over the whole sphere.
"""
from dataclasses import dataclass
import enum
import math

import numpy as np

from . import _budget
from .errors import InvalidArgumentError, PreconditionViolation, ResourceLimitError
from .rng import STREAM_NET, STREAM_SPHERE, derive_rng

NORM_TOL = 1e-12


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def as_points(R, dim=None):
    """Coerce ``R`` to a 2-D float array of shape (n, d)."""
    if isinstance(R, PointCloud):
        R = R.points
    a = np.asarray(R, dtype=float)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise InvalidArgumentError(f"expected a list of points, got shape {a.shape}")
    if dim is not None and a.shape[0] and a.shape[1] != dim:
        raise InvalidArgumentError(f"dimension mismatch: points have d={a.shape[1]}, expected {dim}")
    return a


@dataclass(frozen=True)
class Direction:
    """A unit vector of R^d, d >= 2."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float).ravel()
        if c.size < 2:
            raise InvalidArgumentError("a direction needs d >= 2 coordinates")
        if abs(np.linalg.norm(c) - 1.0) > NORM_TOL:
            raise InvalidArgumentError(f"direction is not unit length (norm={np.linalg.norm(c)!r})")
        object.__setattr__(self, "coords", _frozen(c))

    @classmethod
    def normalized(cls, v):
        v = np.asarray(v, dtype=float).ravel()
        n = np.linalg.norm(v)
        if n == 0:
            raise InvalidArgumentError("cannot normalize the zero vector")
        return cls(v / n)

    @property
    def dim(self):
        return self.coords.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)


@dataclass(frozen=True)
class PointCloud:
    """A finite point set in R^dim, optionally flagged as lying on the unit sphere."""

    dim: int
    points: np.ndarray
    spherical: bool = False

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.size == 0:
            pts = pts.reshape(0, self.dim)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise InvalidArgumentError(f"points must have shape (n, {self.dim}), got {pts.shape}")
        if self.spherical and pts.shape[0]:
            dev = np.max(np.abs(np.linalg.norm(pts, axis=1) - 1.0))
            if dev > NORM_TOL:
                raise InvalidArgumentError(f"spherical cloud has a point off the sphere (|norm-1|={dev:.3g})")
        object.__setattr__(self, "points", _frozen(pts))

    def __len__(self):
        return self.points.shape[0]


class NetVerification(str, enum.Enum):
    PROVEN = "proven"
    PROBABILISTIC = "probabilistically-checked"
    UNCHECKED = "unchecked"


@dataclass(frozen=True)
class DirectionNet:
    """A delta-covering of the unit sphere S^{d-1}."""

    dim: int
    delta: float
    directions: np.ndarray
    verified: NetVerification = NetVerification.UNCHECKED

    def __post_init__(self):
        if not self.delta > 0:
            raise InvalidArgumentError("delta must be positive")
        dirs = np.asarray(self.directions, dtype=float)
        if dirs.ndim != 2 or dirs.shape[1] != self.dim or dirs.shape[0] == 0:
            raise InvalidArgumentError(f"directions must have shape (n>=1, {self.dim})")
        object.__setattr__(self, "directions", _frozen(dirs))
        object.__setattr__(self, "verified", NetVerification(self.verified))

    def __len__(self):
        return self.directions.shape[0]


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise InvalidArgumentError(f"empty interval [{self.lo}, {self.hi}]")

    def __contains__(self, x):
        return self.lo <= x <= self.hi


# -- sampling ---------------------------------------------------------------


def _gaussian_directions(rng, n, d):
    g = rng.standard_normal((n, d))
    norms = np.linalg.norm(g, axis=1)
    # A zero Gaussian vector has probability zero; redraw it anyway.
    while n and np.any(norms == 0):
        bad = norms == 0
        g[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(g, axis=1)
    return g / norms[:, None]


def sample_sphere(d, n, seed):
    """Draw ``n`` independent uniform points on S^{d-1}.

    Normalized isotropic Gaussian vectors; ``seed`` is an integer (stream
    ``(seed, STREAM_SPHERE)``) or an existing ``numpy.random.Generator``.
    """
    if d < 2:
        raise InvalidArgumentError(f"d must be >= 2, got {d}")
    if n < 0:
        raise InvalidArgumentError(f"n must be >= 0, got {n}")
    rng = seed if isinstance(seed, np.random.Generator) else derive_rng(seed, STREAM_SPHERE)
    return PointCloud(d, _gaussian_directions(rng, n, d), spherical=True)


# -- delta nets -------------------------------------------------------------


def packing_size_bound(d, delta):
    """Volume bound on the size of a delta-packing of S^{d-1}: (1 + 2/delta)^d."""
    return (1.0 + 2.0 / delta) ** d


def circle_covering_radius(directions):
    """Exact Euclidean covering radius of a finite subset of the unit circle."""
    dirs = np.asarray(directions, dtype=float)
    ang = np.sort(np.arctan2(dirs[:, 1], dirs[:, 0]))
    gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))
    # The farthest circle point from the net sits mid-gap, at arc gap/2.
    return float(2.0 * np.sin(np.max(gaps) / 4.0))


def covering_gaps(directions, probes, delta, chunk=4096):
    """Return the probes whose distance to every direction exceeds ``delta``."""
    dirs = np.asarray(directions, dtype=float)
    # |u - v| > delta  <=>  u.v < 1 - delta^2/2 for unit vectors
    cos_min = 1.0 - 0.5 * delta * delta
    out = []
    for start in range(0, len(probes), chunk):
        block = probes[start:start + chunk]
        best = np.max(block @ dirs.T, axis=1)
        out.append(block[best < cos_min])
    return np.concatenate(out) if out else probes[:0]


def _greedy_extend(net, candidates, cos_min):
    """Append candidates farther than delta from the net, one at a time."""
    if net:
        far = np.max(candidates @ np.asarray(net).T, axis=1) < cos_min
        candidates = candidates[far]
    added = 0
    for c in candidates:
        if not net or np.max(np.asarray(net) @ c) < cos_min:
            net.append(c)
            added += 1
    return added


def build_delta_net(d, delta, seed, probes=100_000, patience=2_000, max_log_size=_budget.MAX_NET_LOG_SIZE):
    """Greedy maximal delta-packing of S^{d-1}, which is a delta-covering.

    Candidates are uniform random directions; a candidate is kept when it is
    farther than ``delta`` from every kept direction. Sampling stops after
    ``patience`` consecutive rejections. The covering is then checked: in
    d = 2 exactly, from the largest angular gap (``verified="proven"``); in
    d >= 3 against ``probes`` random probe directions
    (``verified="probabilistically-checked"``). Uncovered probes are
    themselves farther than ``delta`` from the net, so they are appended
    and the check repeated; the result stays a packing.
    """
    if d < 2:
        raise InvalidArgumentError(f"d must be >= 2, got {d}")
    if not (0 < delta <= 2):
        raise InvalidArgumentError(f"delta must lie in (0, 2], got {delta}")
    if d * math.log1p(2.0 / delta) > max_log_size:
        raise ResourceLimitError(
            f"a {delta}-net of S^{d - 1} may need up to {packing_size_bound(d, delta):.3g} directions"
        )
    rng = seed if isinstance(seed, np.random.Generator) else derive_rng(seed, STREAM_NET)
    cos_min = 1.0 - 0.5 * delta * delta
    net = []
    idle = 0
    batch = 256
    while idle < patience:
        added = _greedy_extend(net, _gaussian_directions(rng, batch, d), cos_min)
        idle = 0 if added else idle + batch

    if d == 2:
        while circle_covering_radius(net) > delta:
            ang = np.sort(np.arctan2(np.asarray(net)[:, 1], np.asarray(net)[:, 0]))
            gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))
            i = int(np.argmax(gaps))
            mid = ang[i] + gaps[i] / 2
            net.append(np.array([np.cos(mid), np.sin(mid)]))
        status = NetVerification.PROVEN
    else:
        while True:
            holes = covering_gaps(np.asarray(net), _gaussian_directions(rng, probes, d), delta)
            if len(holes) == 0:
                break
            _greedy_extend(net, holes, cos_min)
        status = NetVerification.PROBABILISTIC
    return DirectionNet(d, float(delta), np.asarray(net), status)


def net_from_directions(directions, delta, verified=NetVerification.UNCHECKED):
    dirs = as_points(directions)
    return DirectionNet(dirs.shape[1], float(delta), dirs / np.linalg.norm(dirs, axis=1)[:, None], verified)


# -- support functions and Hausdorff bounds ---------------------------------


def support_points(R, u):
    """Support function of conv(R) in direction ``u``: max over r in R of r.u.

    ``u`` may be a single direction or an (m, d) array of directions, in which
    case an array of m support values is returned.
    """
    pts = as_points(R)
    if pts.shape[0] == 0:
        raise InvalidArgumentError("support of an empty point set is undefined")
    U = np.asarray(u, dtype=float)
    if U.shape[-1] != pts.shape[1]:
        raise InvalidArgumentError(f"dimension mismatch: points d={pts.shape[1]}, direction d={U.shape[-1]}")
    if U.ndim == 1:
        return float(np.max(pts @ U))
    return np.max(pts @ U.T, axis=0)


def _max_norm(pts):
    return float(np.max(np.linalg.norm(pts, axis=1)))


def hausdorff_certified(A, B, net):
    """Certified interval for the Hausdorff distance between conv(A) and conv(B).

    ``lo`` is the largest support gap over the net directions, which never
    exceeds the true distance. The gap is (r_A + r_B)-Lipschitz on the sphere,
    and every direction is within ``net.delta`` of the net, so
    ``hi = lo + (r_A + r_B) * delta`` bounds it from above.
    """
    a, b = as_points(A), as_points(B)
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise InvalidArgumentError("point sets must be nonempty")
    if a.shape[1] != b.shape[1] or a.shape[1] != net.dim:
        raise InvalidArgumentError(f"dimension mismatch: A d={a.shape[1]}, B d={b.shape[1]}, net d={net.dim}")
    U = net.directions
    lo = float(np.max(np.abs(support_points(a, U) - support_points(b, U))))
    return Interval(lo, lo + (_max_norm(a) + _max_norm(b)) * net.delta)


def hausdorff_to_ball_certified(A, net, radius=1.0):
    """Certified interval for d_H(conv(A), B(0, radius)).

    The ball's support function is constant, so only r_A enters the
    Lipschitz correction.
    """
    a = as_points(A, net.dim)
    if a.shape[0] == 0:
        raise InvalidArgumentError("point set must be nonempty")
    lo = float(np.max(np.abs(support_points(a, net.directions) - radius)))
    return Interval(lo, lo + _max_norm(a) * net.delta)


def ball_deviation(support_values, lam):
    """Largest |h(K,u) - lam| over the supplied net support values."""
    return float(np.max(np.abs(np.asarray(support_values, dtype=float) - lam)))


def certify_from_support(support_values, lam, eta, net_delta):
    """Ball-closeness certificate from precomputed net support values.

    For K inside the unit ball and a net with delta <= min(lam, eta): if every
    net support value is within ``eta * lam`` of ``lam`` then
    ``d_H(K / lam, B(0,1)) <= 5 * eta``. Returns ``5 * eta`` or ``None``.
    """
    if not (0 < lam <= 1):
        raise PreconditionViolation(f"lambda must lie in (0, 1], got {lam}")
    if not (0 < eta < 1):
        raise PreconditionViolation(f"eta must lie in (0, 1), got {eta}")
    if net_delta > min(lam, eta) * (1 + 1e-12):
        raise PreconditionViolation(f"net too coarse: delta={net_delta} > min(lambda, eta)={min(lam, eta)}")
    if ball_deviation(support_values, lam) <= eta * lam:
        return 5.0 * eta
    return None


def certified_ball_bound(K, lam, eta, net):
    """Certificate ``5 * eta`` on d_H(conv(K)/lam, B(0,1)), or ``None``.

    Raises :class:`PreconditionViolation` if K leaves the unit ball or the net
    is coarser than ``min(lam, eta)``.
    """
    pts = as_points(K, net.dim)
    if pts.shape[0] == 0:
        raise InvalidArgumentError("point set must be nonempty")
    if _max_norm(pts) > 1.0 + NORM_TOL:
        raise PreconditionViolation("K must lie in the closed unit ball")
    return certify_from_support(support_points(pts, net.directions), lam, eta, net.delta)
