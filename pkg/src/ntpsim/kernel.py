"""Backend selection for the replication kernel.

The compiled extension is used when it imports; setting the environment
variable ``NTPSIM_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
from __future__ import annotations

import os

from . import _kernel_py

try:
    from . import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _kernel_py.simulate}
if _compiled is not None:
    BACKENDS["cython"] = _compiled.simulate

if _compiled is not None and os.environ.get("NTPSIM_PURE_PYTHON", "") in ("", "0"):
    BACKEND = "cython"
else:
    BACKEND = "python"

simulate = BACKENDS[BACKEND]


def get_simulate(backend: str | None = None):
    if backend is None:
        return simulate
    try:
        return BACKENDS[backend]
    except KeyError:
        raise ValueError(f"kernel backend {backend!r} is not available; "
                         f"have {sorted(BACKENDS)}") from None
