"""Kernel selection: compiled extension if importable, else pure Python.

Set ``PLUCKERTREE_PURE=1`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
admissible_relations = _kernels_py.admissible_relations

if os.environ.get("PLUCKERTREE_PURE") != "1":
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
    if _compiled is not None:
        admissible_relations = _compiled.admissible_relations
        BACKEND = "cython"

COLS = _kernels_py.COLS
