"""Backend selection for the dense polynomial kernels.

The compiled extension is used when it was built and ``ARTIFACT_PURE`` is not
set; otherwise the pure-Python module provides the same functions.
"""
from __future__ import annotations

import os

from . import _pykernels as pure

compiled = None
if not os.environ.get("ARTIFACT_PURE"):
    try:
        from . import _ckernels as compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled = None

_impl = compiled if compiled is not None else pure
BACKEND = "cython" if compiled is not None else "python"

conv_p = _impl.conv_p
conv_tab = _impl.conv_tab
divmod_p = _impl.divmod_p
divmod_tab = _impl.divmod_tab
