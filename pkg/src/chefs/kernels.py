"""Hot row-level primitives with a compiled fast path.

Imports the Cython extension when available, otherwise the pure-Python
fallback. Set ``CHEFS_PURE_PYTHON=1`` to force the fallback (used by the
equivalence tests and the benchmark).
"""

import os

from . import _kernels_py

if os.environ.get("CHEFS_PURE_PYTHON") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

IMPLEMENTATION: str = _impl.IMPLEMENTATION
MISSING_TOKENS = _impl.MISSING_TOKENS
KEY_SEPARATOR = _impl.KEY_SEPARATOR
ABSENT_MARKER = _impl.ABSENT_MARKER

canon_text = _impl.canon_text
normalize_row = _impl.normalize_row
make_key = _impl.make_key
