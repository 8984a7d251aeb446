"""Kernel selection: compiled extension when available, numpy fallback otherwise.

Set CREASEFOLD_PURE=1 to force the pure-Python implementation.
"""

import os

if os.environ.get("CREASEFOLD_PURE"):
    from . import pyfallback as _impl
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import pyfallback as _impl

IMPLEMENTATION = _impl.IMPLEMENTATION
rk4_frame_2d = _impl.rk4_frame_2d
rk4_frame_3d = _impl.rk4_frame_3d
rk4_linear = _impl.rk4_linear
