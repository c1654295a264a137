"""Backend selection for the term kernel.

The compiled extension is used when it imports; set ``NCABEL_PURE_PYTHON=1``
to force the pure-Python fallback.  :func:`use_backend` switches at runtime,
which the benchmarks and the backend-parametrized tests rely on.
"""
from __future__ import annotations

import contextlib
import os
from types import ModuleType

from . import _pykernel

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None

_BACKENDS: dict[str, ModuleType] = {"python": _pykernel}
if _ckernel is not None:
    _BACKENDS["compiled"] = _ckernel

if _ckernel is not None and os.environ.get("NCABEL_PURE_PYTHON", "") in ("", "0"):
    active: ModuleType = _ckernel
else:
    active = _pykernel


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def backend_name() -> str:
    return active.BACKEND


def set_backend(name: str) -> None:
    global active
    try:
        active = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable kernel backend {name!r}; have {available_backends()}") from None


@contextlib.contextmanager
def use_backend(name: str):
    previous = active.BACKEND
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)
