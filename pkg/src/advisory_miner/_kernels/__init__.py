"""Hot numeric kernels: compiled Cython extension with a pure-Python fallback.

The extension is used when it was built and imports cleanly; setting
``ADVISORY_MINER_PURE=1`` forces the fallback. :data:`BACKEND` names the
active implementation.
"""

import os

from . import _pykernels

pure = _pykernels
compiled = None

if os.environ.get("ADVISORY_MINER_PURE", "") not in ("", "0"):
    active = _pykernels
else:
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None
    active = compiled if compiled is not None else _pykernels

BACKEND = "cython" if active is compiled else "python"

betacf = active.betacf
sq_distances = active.sq_distances
best_numeric_split = active.best_numeric_split

__all__ = ["BACKEND", "betacf", "sq_distances", "best_numeric_split", "pure", "compiled"]
