"""Distribution of |u.X| for X uniform on the unit sphere S^{d-1}.

The marginal ``u.X`` has density proportional to ``(1 - t^2)^((d-3)/2)`` on
[-1, 1] (uniform for d = 3, arcsine for d = 2). Integrals are evaluated by
adaptive Gauss-Kronrod quadrature after substituting ``t = sin s``, which
removes the endpoint singularity at t = 1 when d = 2:

    int_0^1 t^j (1 - t^2)^a dt = int_0^{pi/2} sin(s)^j cos(s)^(2a+1) ds.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy import integrate

from .errors import InvalidArgumentError
from .geom_core import _gaussian_directions
from .rng import STREAM_SPHERE, derive_rng

QUAD_EPSREL = 1e-13


def _trig_moment(j, p):
    """int_0^{pi/2} sin(s)^j cos(s)^p ds."""

    def f(s):
        return math.sin(s) ** j * math.cos(s) ** p

    hi = math.pi / 2
    # For large p the integrand is a narrow bump near s = 0 of width ~1/sqrt(p).
    cut = min(hi, 12.0 / math.sqrt(p + 1.0))
    total, _ = integrate.quad(f, 0.0, cut, epsabs=0.0, epsrel=QUAD_EPSREL, limit=200)
    if cut < hi:
        tail, _ = integrate.quad(f, cut, hi, epsabs=0.0, epsrel=QUAD_EPSREL, limit=200)
        total += tail
    return total


def power_integral(a):
    """I(a) = int_0^1 (1 - t^2)^a dt for a > -1."""
    if not a > -1:
        raise InvalidArgumentError(f"I(a) diverges for a={a}")
    return _trig_moment(0, 2.0 * a + 1.0)


def _exponent(d):
    if d < 2:
        raise InvalidArgumentError(f"d must be >= 2, got {d}")
    return (d - 3) / 2.0


def marginal_density(d, t):
    """Density of |u.X| at ``t`` in [0, 1)."""
    a = _exponent(d)
    if not (0.0 <= t < 1.0):
        raise InvalidArgumentError(f"t must lie in [0, 1), got {t}")
    return (1.0 - t * t) ** a / power_integral(a)


def mean_abs_dot(d):
    """m_d = E|u.X|, asymptotically sqrt(2 / (pi d))."""
    a = _exponent(d)
    return _trig_moment(1, 2.0 * a + 1.0) / power_integral(a)


def second_moment_abs_dot(d):
    """E(u.X)^2 by quadrature; equals 1/d by symmetry."""
    a = _exponent(d)
    return _trig_moment(2, 2.0 * a + 1.0) / power_integral(a)


def variance_abs_dot(d):
    """Var|u.X| = 1/d - m_d^2, asymptotically (1 - 2/pi) / d."""
    return 1.0 / d - mean_abs_dot(d) ** 2


def sample_abs_dot(d, n, seed, signed=False, chunk=1_000_000):
    """``n`` draws of |u.X| (or of u.X when ``signed``), u the first basis vector."""
    if d < 2:
        raise InvalidArgumentError(f"d must be >= 2, got {d}")
    if n < 0:
        raise InvalidArgumentError(f"n must be >= 0, got {n}")
    rng = seed if isinstance(seed, np.random.Generator) else derive_rng(seed, STREAM_SPHERE)
    out = np.empty(n)
    for start in range(0, n, chunk):
        m = min(chunk, n - start)
        out[start:start + m] = _gaussian_directions(rng, m, d)[:, 0]
    return out if signed else np.abs(out)


@dataclass(frozen=True)
class MomentRow:
    d: int
    m_d: float
    var_d: float
    method: str = "quadrature"

    @property
    def scaled_mean(self):
        return self.m_d * math.sqrt(self.d)

    @property
    def scaled_var(self):
        return self.d * self.var_d


def moment_row(d):
    m = mean_abs_dot(d)
    return MomentRow(int(d), m, 1.0 / d - m * m)
