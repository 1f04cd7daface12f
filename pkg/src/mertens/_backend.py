"""Pick the kernel implementation at import time.

``MERTENS_BACKEND=python`` forces the numpy fallback; ``compiled`` makes a
missing extension an error instead of a silent fallback.
"""

import importlib
import os

from mertens import _pykernels

_choice = os.environ.get("MERTENS_BACKEND", "auto").lower()

if _choice == "python":
    kernels = _pykernels
else:
    try:
        kernels = importlib.import_module("mertens._kernels")
    except ImportError:
        if _choice == "compiled":
            raise
        kernels = _pykernels

python_kernels = _pykernels
BACKEND = kernels.BACKEND


def compiled_kernels():
    """The compiled module, or None when it is not built."""
    try:
        return importlib.import_module("mertens._kernels")
    except ImportError:
        return None
