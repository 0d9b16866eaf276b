"""Kernel backend selection.

Three backends exist for the counting kernels:

``numba``
    ``@njit`` loops over int64 arrays. Default when numba imports.
``numpy``
    Vectorised int64 fallback, no compilation step.
``python``
    Exact big-integer loops. Always used when values could overflow int64,
    and selectable globally to cross-check the other two.

The starting backend comes from the ``SIDON_KERNEL`` environment variable.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from typing import Any, Callable, Iterator

try:
    from numba import njit, types
    from numba.typed import Dict as NumbaDict

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False
    types = None
    NumbaDict = None

    def njit(*args: Any, **kwargs: Any) -> Callable:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


BACKENDS = ("numba", "numpy", "python")


def _initial_backend() -> str:
    name = os.environ.get("SIDON_KERNEL", "").strip().lower()
    if not name:
        return "numba" if HAVE_NUMBA else "numpy"
    if name not in BACKENDS:
        raise ValueError(f"SIDON_KERNEL must be one of {BACKENDS}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        return "numpy"
    return name


_backend = _initial_backend()


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; expected one of {BACKENDS}")
    if name == "numba" and not HAVE_NUMBA:
        raise ImportError("numba is not installed")
    _backend = name


@contextmanager
def use_backend(name: str) -> Iterator[None]:
    previous = _backend
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def available_backends() -> tuple[str, ...]:
    return BACKENDS if HAVE_NUMBA else ("numpy", "python")
