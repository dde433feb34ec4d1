"""Hot-loop kernels, compiled when available.

The Cython extension ``capbody._ckernels`` is preferred (except for
``cap_gap``, which is fastest in numpy); the numpy module
``capbody._pykernels`` is used when the extension is missing or when the
environment variable ``CAPBODY_PURE_PYTHON`` is set to a non-empty value.
"""

import os

from . import _pykernels as python_backend

try:
    if os.environ.get("CAPBODY_PURE_PYTHON"):
        raise ImportError("pure-python backend requested")
    from . import _ckernels as compiled_backend
except ImportError:
    compiled_backend = None

_impl = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

radial_function = _impl.radial_function
membership_margin = _impl.membership_margin
illumination_scan = _impl.illumination_scan
# a BLAS matmul plus vectorised arccos beats a scalar compiled loop here
cap_gap = python_backend.cap_gap
scan_four_two_tangent = _impl.scan_four_two_tangent
scan_eight_three_tangent = _impl.scan_eight_three_tangent
