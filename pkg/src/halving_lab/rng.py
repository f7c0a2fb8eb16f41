"""Seeded random streams.

Every random draw in the package goes through :func:`derive_rng`, which
builds a Philox4x64-10 counter-based generator keyed by a ``SeedSequence``
whose spawn key is ``keys``. Trial ``i`` of an experiment with seed ``s``
uses ``derive_rng(s, tag, i)``, so trials can run in any order or in
parallel and still draw identical numbers.
"""
import numpy as np

# Namespaces keep independent uses of one user seed from sharing streams.
STREAM_SPHERE = 0
STREAM_NET = 1
STREAM_TRIAL = 2
STREAM_FRESH_TRIAL = 3
STREAM_PROBES = 4


def derive_rng(seed, *keys):
    """Return a ``numpy.random.Generator`` for the stream ``(seed, *keys)``."""
    if isinstance(seed, np.random.Generator):
        if keys:
            raise TypeError("cannot derive sub-streams from a Generator")
        return seed
    if int(seed) < 0:
        raise ValueError("seed must be non-negative")
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(ss))
