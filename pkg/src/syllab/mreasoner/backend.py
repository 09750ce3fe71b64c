"""Kernel selection.

The compiled kernel is used when it imports; set ``SYLLAB_PURE_PYTHON=1``
to force the pure-Python fallback.
"""
from __future__ import annotations

import logging
import os

from . import _pure

log = logging.getLogger(__name__)

try:
    if os.environ.get("SYLLAB_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure Python requested")
    from . import _kernel as _compiled
except ImportError as exc:  # pragma: no cover - depends on the build
    log.debug("compiled kernel unavailable (%s); using pure Python", exc)
    _compiled = None

KERNELS = {"python": _pure.simulate_runs}
if _compiled is not None:
    KERNELS["compiled"] = _compiled.simulate_runs

BACKEND = "compiled" if _compiled is not None else "python"


def get_kernel(name: str | None = None):
    name = name or BACKEND
    try:
        return KERNELS[name]
    except KeyError:
        raise ValueError(f"kernel {name!r} not available; have {sorted(KERNELS)}") from None
