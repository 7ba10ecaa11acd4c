"""Backend selection for the per-face kernels.

The compiled Cython extension is used when it imported cleanly; otherwise
the NumPy implementation in :mod:`cotmetric._kernels_py` is used. Both
expose ``face_areas``, ``face_cotangents`` and ``face_hessians`` with the
same signatures and results (to rounding).
"""
import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

_active = _BACKENDS.get("compiled", _kernels_py)


def available_backends():
    return sorted(_BACKENDS)


def get_backend():
    """Name of the backend currently in use."""
    return "compiled" if _active is _compiled and _compiled is not None else "python"


def set_backend(name):
    """Switch the kernel backend (``"compiled"`` or ``"python"``)."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(
            f"unknown or unavailable backend {name!r}; available: {available_backends()}"
        )
    _active = _BACKENDS[name]


def _prep(uf):
    return np.ascontiguousarray(uf, dtype=np.float64).reshape(-1, 3)


def face_areas(uf):
    return _active.face_areas(_prep(uf))


def face_cotangents(uf):
    return _active.face_cotangents(_prep(uf))


def face_hessians(uf):
    return _active.face_hessians(_prep(uf))
