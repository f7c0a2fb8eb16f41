"""Tiny linear programs used by the extreme-point and power-cell tests."""
import numpy as np
from scipy.optimize import linprog

from .errors import HalvingLabError

MARGIN_TOL = 1e-9


def max_margin(A, b, box=1.0, free_x=False):
    """Solve  max s  s.t.  A x + s <= b,  s <= 1.

    ``x`` is restricted to ``[-box, box]^n`` unless ``free_x``. Returns the
    optimal margin ``s``; feasibility of ``A x <= b`` is ``s >= 0`` and strict
    feasibility is ``s > 0``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    m, n = A.shape
    if m == 0:
        return 1.0
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_ub = np.hstack([A, np.ones((m, 1))])
    xb = (None, None) if free_x else (-box, box)
    bounds = [xb] * n + [(None, 1.0)]
    res = linprog(c, A_ub=A_ub, b_ub=b, bounds=bounds, method="highs")
    if res.status != 0:
        raise HalvingLabError(f"LP solver failed: {res.message}")
    return float(-res.fun)


def cone_is_trivial(A, tol=MARGIN_TOL):
    """True iff the cone {u : A u <= 0} is {0}.

    Maximizes each signed coordinate over the cone intersected with the unit
    box; the cone is nontrivial iff one of these optima is positive.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = A.shape[1]
    if A.shape[0] == 0:
        return False
    zeros = np.zeros(A.shape[0])
    for i in range(n):
        for sign in (1.0, -1.0):
            c = np.zeros(n)
            c[i] = -sign
            res = linprog(c, A_ub=A, b_ub=zeros, bounds=[(-1.0, 1.0)] * n, method="highs")
            if res.status != 0:
                raise HalvingLabError(f"LP solver failed: {res.message}")
            if -res.fun > tol:
                return False
    return True
