"""Kernel backend selection.

The compiled backend (`_fast`, built from _fast.pyx) and the pure-Python
reference (`pure`) implement identical algorithms; outputs are required
to match exactly.  Set HOMOLOCAL_PURE=1 to force the reference backend.
"""

import os

from . import pure

if os.environ.get("HOMOLOCAL_PURE") == "1":
    impl = pure
else:
    try:
        from . import _fast as impl  # type: ignore[attr-defined]
    except ImportError:
        impl = pure

BACKEND = impl.BACKEND
echelon_insert = impl.echelon_insert
echelon_reduce = impl.echelon_reduce
echelon_rank = impl.echelon_rank
b_apply = impl.b_apply
d_apply = impl.d_apply
