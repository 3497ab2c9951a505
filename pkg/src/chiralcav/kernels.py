"""Hot-kernel dispatch: compiled Cython core when built, numpy otherwise.

The backend is chosen once at import. :func:`use_backend` switches it at
runtime, which the tests and the benchmark use to exercise both paths.
"""

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

_active = _ckernels if _ckernels is not None else _pykernels


def available_backends():
    return tuple(_BACKENDS)


def backend():
    """Name of the backend currently serving :func:`expm` and :func:`rk4_linear`."""
    return "cython" if _active is _ckernels else "python"


def use_backend(name):
    """Select the kernel backend by name and return the previous one."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    previous = backend()
    _active = _BACKENDS[name]
    return previous


def expm(A):
    return _active.expm(A)


def rk4_linear(G, Y0, times, steps):
    return _active.rk4_linear(G, Y0, times, steps)
