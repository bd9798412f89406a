"""Selects the compiled geometry core when available, else the pure one.

Set SETLATTICE_PURE=1 to force the pure-Python implementation (used by the
benchmark and the parity tests).
"""

import os

from . import _geom_py

if os.environ.get("SETLATTICE_PURE"):
    _impl = _geom_py
else:
    try:
        from . import _geom_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _geom_py

IMPL_NAME = _impl.IMPL_NAME
vrep_from_hrep = _impl.vrep_from_hrep
hrep_from_vrep = _impl.hrep_from_vrep
vrep_inside_hrep = _impl.vrep_inside_hrep


def available_impls():
    impls = {"python": _geom_py}
    try:
        from . import _geom_cy  # type: ignore[attr-defined]

        impls["cython"] = _geom_cy
    except ImportError:
        pass
    return impls
