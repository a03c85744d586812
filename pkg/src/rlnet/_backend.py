"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when importable; otherwise, or
when ``RLNET_PURE_PYTHON`` is set to a non-empty value, the pure-Python
``_pykernels`` twin is used.
"""

import logging
import os

log = logging.getLogger(__name__)

if os.environ.get("RLNET_PURE_PYTHON"):
    from . import _pykernels as kernels

    BACKEND = "python"
else:
    try:
        from . import _ckernels as kernels

        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _pykernels as kernels

        BACKEND = "python"
        log.debug("compiled kernels unavailable, using pure-Python fallback")

__all__ = ["kernels", "BACKEND"]
