"""Backend selection for the hot grid kernel.

The compiled ``_kernels`` extension is used when importable; otherwise the numpy
version in ``_fallback``.  Set ``YBESIM_PURE_PYTHON=1`` to force the fallback and
``YBE_THREADS`` to cap the compiled kernel's thread count.
"""
import os

from . import _fallback

if os.environ.get("YBESIM_PURE_PYTHON", "") == "1":
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "numpy"


def thread_cap() -> int:
    """Thread cap from ``YBE_THREADS``; 0 means let OpenMP decide."""
    raw = os.environ.get("YBE_THREADS", "").strip()
    if not raw:
        return 0
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"YBE_THREADS must be an integer, got {raw!r}") from None
    return max(n, 0)


def fidelity_grid(theta1, theta2, theta3, probes, num_threads=None):
    """Fidelity ``F[i2, i1, k]`` of both equation sides for probe ``k``.

    Args:
        theta1: 1-D array of first angles (radians).
        theta2: 1-D array of middle angles (radians).
        theta3: fixed third angle (radians).
        probes: ``(P, 2)`` complex array of normalized input states.
        num_threads: thread cap for the compiled kernel; defaults to ``YBE_THREADS``.
    """
    n = thread_cap() if num_threads is None else num_threads
    impl = _compiled if _compiled is not None else _fallback
    return impl.fidelity_grid(theta1, theta2, float(theta3), probes, n)
