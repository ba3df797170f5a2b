"""Kernel backend selection.

The compiled ``_core`` extension is used when it was built; otherwise the
pure-Python twins in ``_fallback`` are.  Set ``ACTIVERANK_PURE_PYTHON=1`` to
force the fallback.  Both backends produce identical results for identical
generator states.
"""
import os

from . import _fallback

core = None
if not os.environ.get("ACTIVERANK_PURE_PYTHON"):
    try:
        from . import _core as core
    except ImportError:  # extension not built
        core = None

fallback = _fallback
active = core if core is not None else _fallback
BACKEND = "compiled" if core is not None else "python"

atc_pair = active.atc_pair
ati_walk_row = active.ati_walk_row
