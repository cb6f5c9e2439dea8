"""Hot numeric kernels, JIT-compiled when numba is available.

The only loop that dominates runtime is the fixed-step RK4 integration of the
constant-phase ODE used by the verification oracle (tens of thousands of
steps per parameter draw, hundreds of draws).  Set the environment variable
``DHYM_RULED_NO_NUMBA=1`` to force the pure-Python fallback; the two paths
are numerically identical (same arithmetic, same order of operations).
"""

from __future__ import annotations

import os

import numpy as np

_DISABLE = os.environ.get("DHYM_RULED_NO_NUMBA", "").strip() not in ("", "0")

try:
    if _DISABLE:
        raise ImportError("numba disabled by DHYM_RULED_NO_NUMBA")
    from numba import njit

    USING_NUMBA = True
except ImportError:  # pragma: no cover - exercised via env flag
    USING_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


@njit(cache=True)
def _rk4_phase_ode(cos_t, sin_t, t0, y0, t1, n_steps):
    """Classical RK4 for y' = (t sin + y cos)/(y sin - t cos), t0 -> t1.

    Returns (nodes, values, ok); ok = False when the denominator vanishes
    along the path (blow-up of the right-hand side).
    """
    nodes = np.empty(n_steps + 1)
    values = np.empty(n_steps + 1)
    h = (t1 - t0) / n_steps
    t = t0
    y = y0
    nodes[0] = t
    values[0] = y
    for i in range(n_steps):
        d1 = y * sin_t - t * cos_t
        if d1 == 0.0:
            return nodes[: i + 1], values[: i + 1], False
        k1 = (t * sin_t + y * cos_t) / d1
        th = t + 0.5 * h
        yh = y + 0.5 * h * k1
        d2 = yh * sin_t - th * cos_t
        if d2 == 0.0:
            return nodes[: i + 1], values[: i + 1], False
        k2 = (th * sin_t + yh * cos_t) / d2
        yh = y + 0.5 * h * k2
        d3 = yh * sin_t - th * cos_t
        if d3 == 0.0:
            return nodes[: i + 1], values[: i + 1], False
        k3 = (th * sin_t + yh * cos_t) / d3
        tn = t + h
        yn = y + h * k3
        d4 = yn * sin_t - tn * cos_t
        if d4 == 0.0:
            return nodes[: i + 1], values[: i + 1], False
        k4 = (tn * sin_t + yn * cos_t) / d4
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t0 + (i + 1) * h
        nodes[i + 1] = t
        values[i + 1] = y
    return nodes, values, True


def rk4_phase_ode(cos_t, sin_t, t0, y0, t1, n_steps):
    """Dispatch wrapper around the (possibly JIT-compiled) RK4 kernel."""
    return _rk4_phase_ode(
        float(cos_t), float(sin_t), float(t0), float(y0), float(t1), int(n_steps)
    )
