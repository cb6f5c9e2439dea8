"""Independent numerics used to verify every closed form.

Nothing here knows the explicit solution formulas: RK4 integrates the raw
ODE, the quadrature integrates raw integrands, the finite differences probe
the analytic derivatives, and the coordinate reconstruction inverts the
momentum profile by direct cumulative integration.  Agreement between these
routines and the closed forms is the package's correctness argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _kernels
from .errors import IntegrationError, PositivityError, SingularSystemError


@dataclass(frozen=True)
class GridFunction:
    """A sampled function: strictly increasing nodes, finite values."""

    nodes: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if nodes.shape != values.shape:
            raise ValueError("nodes and values must have equal length")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)


def rk4_solve(
    rhs: Callable[[float, float], float],
    t0: float,
    y0: float,
    t1: float,
    step: float,
) -> GridFunction:
    """Classical fixed-step RK4 from (t0, y0) to t1.

    Integrates backwards when t1 < t0.  Blow-up of the right-hand side
    raises IntegrationError with the failure location.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    n = max(1, int(round(abs(t1 - t0) / step)))
    h = (t1 - t0) / n
    t, y = float(t0), float(y0)
    nodes = np.empty(n + 1)
    values = np.empty(n + 1)
    nodes[0], values[0] = t, y
    for i in range(n):
        try:
            k1 = rhs(t, y)
            k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
            k4 = rhs(t + h, y + h * k3)
        except (ZeroDivisionError, OverflowError) as exc:
            raise IntegrationError(
                f"right-hand side blew up near t = {t}", location=t
            ) from exc
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t0 + (i + 1) * h
        if not math.isfinite(y):
            raise IntegrationError(
                f"integration diverged near t = {t}", location=t
            )
        nodes[i + 1], values[i + 1] = t, y
    if h < 0:
        nodes, values = nodes[::-1].copy(), values[::-1].copy()
    return GridFunction(nodes=nodes, values=values)


def rk4_solve_phase_ode(
    cos_theta: float, sin_theta: float, t0: float, y0: float, t1: float, step: float
) -> GridFunction:
    """RK4 specialized to the constant-phase ODE (JIT-compiled hot path)."""
    n = max(1, int(round(abs(t1 - t0) / step)))
    nodes, values, ok = _kernels.rk4_phase_ode(cos_theta, sin_theta, t0, y0, t1, n)
    if not ok:
        raise IntegrationError(
            f"right-hand side blew up near t = {nodes[-1]}", location=float(nodes[-1])
        )
    if t1 < t0:
        nodes, values = nodes[::-1].copy(), values[::-1].copy()
    return GridFunction(nodes=nodes, values=values)


def quadrature(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 40,
) -> float:
    """Adaptive Simpson integration of f over [a, b] to absolute tolerance."""
    if not a < b:
        raise ValueError("need a < b")

    def simpson(lo, flo, hi, fhi, fmid):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, flo, hi, fhi, fmid, whole, eps, depth):
        mid = 0.5 * (lo + hi)
        lmid = 0.5 * (lo + mid)
        rmid = 0.5 * (mid + hi)
        flmid = f(lmid)
        frmid = f(rmid)
        left = simpson(lo, flo, mid, fmid, flmid)
        right = simpson(mid, fmid, hi, fhi, frmid)
        if depth <= 0:
            raise IntegrationError(
                "quadrature failed to converge",
                location=mid,
                estimate=left + right,
            )
        if abs(left + right - whole) <= 15.0 * eps:
            return left + right + (left + right - whole) / 15.0
        return recurse(lo, flo, mid, fmid, flmid, left, eps / 2.0, depth - 1) + recurse(
            mid, fmid, hi, fhi, frmid, right, eps / 2.0, depth - 1
        )

    fa, fb = f(a), f(b)
    fm = f(0.5 * (a + b))
    whole = simpson(a, fa, b, fb, fm)
    return recurse(a, fa, b, fb, fm, whole, tol, max_depth)


_FD_COEFFS = {
    1: ([-1, 1], [-0.5, 0.5]),
    2: ([-1, 0, 1], [1.0, -2.0, 1.0]),
    4: ([-2, -1, 0, 1, 2], [1.0, -4.0, 6.0, -4.0, 1.0]),
}


def finite_difference(
    f: Callable[[float], float], t: float, order: int, h: float
) -> float:
    """Central finite difference of the given order (1, 2 or 4)."""
    if order not in _FD_COEFFS:
        raise ValueError(f"unsupported order {order}")
    offsets, weights = _FD_COEFFS[order]
    acc = 0.0
    for o, w in zip(offsets, weights):
        acc += w * f(t + o * h)
    return acc / h ** order


def solve_2x2(a11, a12, a21, a22, b1, b2) -> tuple[float, float]:
    """Exact-elimination solve of a 2x2 linear system."""
    det = a11 * a22 - a12 * a21
    scale = max(abs(a11) * abs(a22), abs(a12) * abs(a21), 1.0)
    if abs(det) < 1e-14 * scale:
        raise SingularSystemError(f"determinant {det!r} below tolerance")
    x1 = (b1 * a22 - b2 * a12) / det
    x2 = (a11 * b2 - a21 * b1) / det
    return x1, x2


def eval_psi_highprec(k, h, kprime, k1, k2, ts, digits: int = 60) -> np.ndarray:
    """Smooth-profile values recomputed in extended-precision decimal.

    Re-derives every constant (phase, coupling, coefficients) from scratch at
    the requested precision and evaluates psi(t).  Used where the double
    evaluation of the basis loses all significance: for strongly scaled
    classes the cubic and radical terms are ~1e15 times larger than psi
    itself.  Requires k1 < 0, k2 != 0 and strict stability.
    """
    from decimal import Decimal, localcontext

    with localcontext() as ctx:
        ctx.prec = digits
        D = Decimal
        k_, h_, kp = D(k), D(h), D(kprime)
        k1_, k2_ = D(k1), D(k2)
        x = k_ / (k_ + kp)
        ss = 2 * (1 - h_) / k_
        s_hat = 2 * x * ss + 2
        r_hat = ((1 - k1_ ** 2 + k2_ ** 2) ** 2 + 4 * k1_ ** 2).sqrt()
        sin_t = -2 * k1_ / r_hat
        cos_t = (1 - k1_ ** 2 + k2_ ** 2) / r_hat
        if sin_t <= 0:
            raise ValueError("requires the canonical branch k1 < 0")
        num = -2 * k2_ * (
            1 + (k1_ + k2_) ** 2 - x ** 2 - (k1_ - k2_) ** 2 * x ** 2
        )
        Cprime = num / (x ** 2 * r_hat) * sin_t
        B2 = 1 + (k1_ - k2_) ** 2
        alpha = r_hat * (-2 + ss * x) / (2 * B2 * k2_ ** 2)
        c2 = ss
        c3 = (alpha / 3) * cos_t / sin_t ** 2 - (s_hat - alpha * r_hat) / 6
        cR = -(alpha / 3) / sin_t ** 2
        d0 = -(
            (-2 + ss * x)
            * (-3 - 3 * k1_ ** 2 - 2 * k1_ * k2_ - 3 * k2_ ** 2 + 3 * B2 * x ** 2)
        ) / (3 * B2 * x ** 3)
        d1 = -(
            (-2 * (1 + k1_ ** 2 + k2_ ** 2) + B2 * ss * x) * (-1 + x ** 2)
        ) / (4 * k1_ * k2_ * x ** 2)
        out = []
        for t in np.atleast_1d(np.asarray(ts, dtype=float)):
            t_ = D(float(t))
            u = t_ ** 2 + Cprime
            if u < 0:
                u = D(0)
            psi = d0 + d1 * t_ + c2 * t_ ** 2 + c3 * t_ ** 3 + cR * u.sqrt() ** 3
            out.append(float(psi))
    return np.asarray(out)


def reconstruct_s_of_tau(
    p,
    tau0: float = 0.0,
    num: int = 20001,
    edge: float = 1e-8,
) -> GridFunction:
    """Invert the momentum profile to the log-norm coordinate s(tau).

    s(tau) = integral of d sigma / phi(sigma) from tau0, on a grid of the
    profile variable tau in (-1 + edge, 1 - edge).  The grid is uniform in
    tau; s diverges logarithmically at both ends, at rates set by the cone
    angles.  Raises PositivityError if the profile is not positive on the
    requested range.
    """
    from .coupled import eval_phi  # local import: avoids a module cycle

    half = 0.5 * (p.t_minus + p.t_plus)  # equals 1/x
    tau = np.linspace(-1.0 + edge, 1.0 - edge, num)
    t = half - tau
    phi = eval_phi(p, t)
    if np.any(phi <= 0.0):
        bad = tau[np.argmin(phi)]
        raise PositivityError(f"profile non-positive near tau = {bad}")
    inv = 1.0 / phi
    # cumulative trapezoid, then shift so that s(tau0) = 0
    s_vals = np.concatenate(
        ([0.0], np.cumsum(0.5 * (inv[1:] + inv[:-1]) * np.diff(tau)))
    )
    s_at_tau0 = float(np.interp(tau0, tau, s_vals))
    return GridFunction(nodes=tau, values=s_vals - s_at_tau0)
