"""Hot-loop kernels: the compiled extension when available, else numpy.

Set ``PKGROLES_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _fallback

try:
    if os.environ.get("PKGROLES_PURE_PYTHON"):
        raise ImportError("pure-python backend requested")
    from . import _ext as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _fallback
    BACKEND = "python"

predecessor_pairs = _impl.predecessor_pairs
pam_build = _impl.pam_build
pam_swap = _impl.pam_swap


def available_backends():
    """Map of backend name to kernel module, compiled one first if built."""
    out = {}
    try:
        from . import _ext

        out["cython"] = _ext
    except ImportError:
        pass
    out["python"] = _fallback
    return out
