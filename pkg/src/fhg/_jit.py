"""JIT switch for the numeric kernels.

Kernels are written once in the subset of Python that numba compiles. Setting
``FHG_DISABLE_NUMBA=1`` (or running without numba installed) leaves them as
plain Python functions over numpy arrays, which is the reference path used by
the benchmark and by the overflow fallback.
"""
import os
import types

DISABLED = os.environ.get("FHG_DISABLE_NUMBA", "0").lower() not in ("", "0", "false", "no")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

ENABLED = numba is not None and not DISABLED


def njit(func):
    """Compile ``func`` in nopython mode when JIT is enabled.

    The undecorated function stays reachable as ``.py_func`` in both modes;
    use ``pure`` to run a kernel on object arrays holding Python ints.
    """
    if not ENABLED:
        func.py_func = func
        return func
    return numba.njit(cache=True, nogil=True)(func)


_PURE: dict = {}


def pure(kernel):
    """Uncompiled copy of ``kernel`` whose calls to other kernels are uncompiled too."""
    base = getattr(kernel, "py_func", kernel)
    if base in _PURE:
        return _PURE[base]
    env = dict(base.__globals__)
    out = types.FunctionType(base.__code__, env, base.__name__, base.__defaults__, base.__closure__)
    _PURE[base] = out
    for name, val in list(env.items()):
        if callable(val) and hasattr(val, "py_func") and getattr(val, "__module__", None) == base.__module__:
            env[name] = pure(val)
    return out
