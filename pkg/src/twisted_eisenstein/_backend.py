"""Select between numba-compiled kernels and the pure-numpy fallback.

The environment variable ``TWISTED_EISENSTEIN_NUMBA`` picks the default:
unset or "1" uses numba when it imports, "0" forces numpy.  ``set_backend``
overrides it at runtime (the CLI ``--backend`` flag goes through it).
"""
from __future__ import annotations

import os

ENV_FLAG = "TWISTED_EISENSTEIN_NUMBA"

try:
    import numba  # noqa: F401
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

numba_options = {
    "nogil": True,
    "cache": True,
    "fastmath": False,
    "error_model": "numpy",
    "boundscheck": False,
}


def _env_wants_numba() -> bool:
    v = os.environ.get(ENV_FLAG, "1").strip().lower()
    return v not in ("0", "false", "no", "off", "numpy")


_current = "numba" if (HAVE_NUMBA and _env_wants_numba()) else "numpy"


def get_backend() -> str:
    return _current


def set_backend(name: str) -> str:
    """Switch backend; returns the previous one."""
    global _current
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not importable")
    prev, _current = _current, name
    return prev


def njit(fn):
    """Compile ``fn`` lazily with the package numba settings."""
    if not HAVE_NUMBA:
        return fn
    import numba
    return numba.njit(**numba_options)(fn)
