"""Budget caps for enumerations whose size grows exponentially."""
import math
import os

from .errors import ResourceLimitError

ENV_BUDGET_MB = "HALVING_LAB_BUDGET_MB"
DEFAULT_BUDGET_MB = 1024.0

# Hard count caps, independent of memory.
MAX_SUBSETS = 2_000_000
MAX_KSET_EXTREME_SUBSETS = 100_000
MAX_NET_LOG_SIZE = math.log(2_000_000)


def budget_bytes():
    raw = os.environ.get(ENV_BUDGET_MB)
    if raw is None or raw.strip() == "":
        mb = DEFAULT_BUDGET_MB
    else:
        try:
            mb = float(raw)
        except ValueError:
            raise ResourceLimitError(f"{ENV_BUDGET_MB} must be a number, got {raw!r}")
    return mb * 2**20


def check_enumeration(n_items, n_floats_each, what, max_count=MAX_SUBSETS):
    """Raise if ``n_items`` records of ``n_floats_each`` doubles exceed the caps."""
    if n_items > max_count:
        raise ResourceLimitError(f"{what}: {n_items} items exceeds the cap of {max_count}")
    need = 8.0 * n_items * max(n_floats_each, 1)
    if need > budget_bytes():
        raise ResourceLimitError(
            f"{what}: needs ~{need / 2**20:.1f} MB, over the {ENV_BUDGET_MB} budget"
        )
