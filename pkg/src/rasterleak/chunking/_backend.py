"""Kernel backend selection: compiled extension when available, numpy
fallback otherwise.  Both expose scan_master and range_corr with identical
semantics; tests assert their outputs agree."""

from __future__ import annotations

from . import _kernels_py

try:  # pragma: no cover - depends on the build environment
    from . import _speedup as _compiled
    DEFAULT_BACKEND = "compiled"
except ImportError:  # pragma: no cover
    _compiled = None
    DEFAULT_BACKEND = "python"

_BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled


def available_backends() -> list:
    return sorted(_BACKENDS)


def get_backend(name: str | None = None):
    if name is None:
        name = DEFAULT_BACKEND
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}") from None
