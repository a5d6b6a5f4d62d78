"""Backend selection for the row-reduction kernel.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``QUIVERALG_PURE_PYTHON`` is set to a non-empty value,
the pure-Python implementation is used.  Both expose ``Echelon`` and
``build_ideal`` and ``lincomb`` with identical behaviour.
"""
import os

from . import _reduce_py

if os.environ.get("QUIVERALG_PURE_PYTHON"):
    _ext = None
else:
    try:
        from . import _reduce_ext as _ext
    except ImportError:
        _ext = None

if _ext is not None:
    Echelon = _ext.Echelon
    build_ideal = _ext.build_ideal
    lincomb = _ext.lincomb
    BACKEND = "cython"
else:
    Echelon = _reduce_py.Echelon
    build_ideal = _reduce_py.build_ideal
    lincomb = _reduce_py.lincomb
    BACKEND = "python"


def module(name: str | None = None):
    """The kernel module for a backend name; None means the selected one."""
    if name is None:
        return _ext if _ext is not None else _reduce_py
    if name == "python":
        return _reduce_py
    if name == "cython":
        if _ext is None:
            from . import _reduce_ext as mod
            return mod
        return _ext
    raise ValueError(f"unknown backend {name!r}")
