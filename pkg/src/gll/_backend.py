"""Select the kernel backend at import time.

The compiled extension is preferred.  Setting ``GLL_PURE_PYTHON=1`` forces the
pure-Python fallback, which is also used when the extension was not built.
"""

import os

if os.environ.get("GLL_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as kernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        from . import _pykernels as kernels

BACKEND = kernels.BACKEND
