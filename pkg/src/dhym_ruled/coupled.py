"""Momentum profile psi(t) = 2 t phi(t) solving the coupled system.

The profile lives in the exact five-element basis

    {1, t, t^2, t^3, (t^2 + C')^(3/2)}

with hand-derived derivative rules through order four, so residuals of both
coupled equations and the convexity-based positivity certificate are
evaluated analytically, never by numerical differentiation.  The conical
path (cone angle beta0 along the zero section) contains the smooth case as
beta0 = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import oracle
from .dhym import DhymSolution, eval_H, eval_H_deriv
from .errors import NoSolutionError, DomainError, ValidationError
from .params import (
    BundleClass,
    StabilityClass,
    SurfaceParams,
    canonicalize,
    classify,
    phase_constant,
    stability_margin,
)
from .dhym import integration_constants

_ENDPOINT_SLACK = 1e-12
#: Tolerance for the boundary-slope consistency postcondition.
SLOPE_TOL = 1e-9


@dataclass(frozen=True)
class ProfilePoly:
    """psi(t) = d0 + d1 t + c2 t^2 + c3 t^3 + cR (t^2 + C')^(3/2)."""

    d0: float
    d1: float
    c2: float
    c3: float
    cR: float
    Cprime: float
    t_minus: float
    t_plus: float
    beta0: float
    beta_inf: float
    alpha: float


@dataclass(frozen=True)
class PositivityReport:
    """Outcome of the interior-positivity check for psi."""

    method: str  # "ConvexityCertified" | "GridVerified" | "Failed"
    min_value: float
    argmin: float


def beta_infinity(x: float, beta0: float) -> float:
    """Cone angle forced along the infinity section by the angle at the zero
    section: (-2 + beta0 (1 + x)) / (-1 + x)."""
    return (-2.0 + beta0 * (1.0 + x)) / (-1.0 + x)


def conical_alpha(s: SurfaceParams, b: BundleClass, beta0: float) -> float:
    """The unique coupling constant for cone angle beta0."""
    b = canonicalize(b)
    x = s.x
    r_hat = phase_constant(b).r_hat
    bracket = s.s_sigma * x ** 2 - 3.0 * beta0 * (x + 1.0) + x + 3.0
    return r_hat * bracket / (2.0 * b.k2 ** 2 * x * (1.0 + (b.k1 - b.k2) ** 2))


def smooth_alpha(s: SurfaceParams, b: BundleClass) -> float:
    """Coupling constant of the smooth solution (always negative)."""
    b = canonicalize(b)
    r_hat = phase_constant(b).r_hat
    return (
        r_hat
        / (2.0 * (1.0 + (b.k1 - b.k2) ** 2) * b.k2 ** 2)
        * (-2.0 + s.s_sigma * s.x)
    )


def smooth_d0_d1_closed_form(
    s: SurfaceParams, b: BundleClass
) -> tuple[float, float]:
    """Closed-form constant and linear coefficients of the smooth profile.

    Used as an independent cross-check against the boundary linear system.
    """
    b = canonicalize(b)
    x, ss = s.x, s.s_sigma
    k1, k2 = b.k1, b.k2
    B2 = 1.0 + (k1 - k2) ** 2
    d0 = -(
        (-2.0 + ss * x)
        * (-3.0 - 3.0 * k1 ** 2 - 2.0 * k1 * k2 - 3.0 * k2 ** 2 + 3.0 * B2 * x ** 2)
    ) / (3.0 * B2 * x ** 3)
    d1 = -(
        (-2.0 * (1.0 + k1 ** 2 + k2 ** 2) + B2 * ss * x) * (-1.0 + x ** 2)
    ) / (4.0 * k1 * k2 * x ** 2)
    return d0, d1


def _radical_coeffs(s: SurfaceParams, b: BundleClass, alpha: float):
    """Cubic and radical coefficients shared by smooth and conical paths."""
    phase = phase_constant(b, s)
    sin_t, cos_t = phase.sin_theta, phase.cos_theta
    s_hat = phase.s_hat
    c3 = (alpha / 3.0) * cos_t / sin_t ** 2 - (s_hat - alpha * phase.r_hat) / 6.0
    # sin * (cot^2 + 1)^(3/2) = 1/sin^2 for sin > 0
    cR = -(alpha / 3.0) / sin_t ** 2
    return c3, cR


def conical_coefficients(
    s: SurfaceParams, b: BundleClass, beta0: float
) -> ProfilePoly:
    """Profile with cone angle beta0 along the zero section.

    d0 and d1 come from the boundary linear system psi(t_-) = psi(t_+) = 0;
    the boundary slopes are then verified as a consistency postcondition.
    """
    if not (0.0 < beta0 <= 1.0):
        raise ValidationError(f"beta0 must lie in (0, 1], got {beta0!r}")
    b = canonicalize(b)
    margin = stability_margin(s, b)
    cls = classify(margin)
    if cls is StabilityClass.UNSTABLE:
        raise NoSolutionError(margin)
    if cls is StabilityClass.SEMISTABLE and beta0 != 1.0:
        raise ValidationError("conical profiles require strict stability")

    x = s.x
    alpha = conical_alpha(s, b, beta0)
    c3, cR = _radical_coeffs(s, b, alpha)
    c2 = s.s_sigma
    _, Cprime = integration_constants(s, b)
    t_minus = 1.0 / x - 1.0
    t_plus = 1.0 / x + 1.0
    if cls is StabilityClass.SEMISTABLE:
        Cprime = -(t_minus ** 2)

    def inhom(t):
        u = max(t ** 2 + Cprime, 0.0)
        return c2 * t ** 2 + c3 * t ** 3 + cR * u ** 1.5

    d0, d1 = oracle.solve_2x2(
        1.0, t_minus, 1.0, t_plus, -inhom(t_minus), -inhom(t_plus)
    )
    p = ProfilePoly(
        d0=d0,
        d1=d1,
        c2=c2,
        c3=c3,
        cR=cR,
        Cprime=Cprime,
        t_minus=t_minus,
        t_plus=t_plus,
        beta0=beta0,
        beta_inf=beta_infinity(x, beta0),
        alpha=alpha,
    )
    _check_boundary_slopes(p, cls)
    return p


def _slope_scale(p: ProfilePoly, t: float) -> float:
    """Cancellation scale of psi'(t): the largest individual term."""
    u = max(t ** 2 + p.Cprime, 0.0)
    return max(
        1.0,
        abs(p.d1),
        abs(2.0 * p.c2 * t),
        abs(3.0 * p.c3 * t ** 2),
        abs(3.0 * p.cR * t) * math.sqrt(u),
    )


def _check_boundary_slopes(p: ProfilePoly, cls: StabilityClass) -> None:
    target_plus = -2.0 * p.beta0 * p.t_plus
    got_plus = eval_psi_deriv(p, p.t_plus, 1)
    if abs(got_plus - target_plus) > SLOPE_TOL * _slope_scale(p, p.t_plus):
        raise ValidationError(
            f"boundary slope mismatch at t_plus: {got_plus} vs {target_plus}"
        )
    if cls is StabilityClass.SEMISTABLE:
        return  # psi' only extends with a square-root singularity factor
    target_minus = 2.0 * p.beta_inf * p.t_minus
    got_minus = eval_psi_deriv(p, p.t_minus, 1)
    if abs(got_minus - target_minus) > SLOPE_TOL * _slope_scale(p, p.t_minus):
        raise ValidationError(
            f"boundary slope mismatch at t_minus: {got_minus} vs {target_minus}"
        )


def smooth_coefficients(s: SurfaceParams, b: BundleClass) -> ProfilePoly:
    """Smooth profile (both cone angles equal to one).

    In the strictly stable case d0, d1 come from their closed forms, which
    stay accurate even when the radical and cubic columns of the boundary
    system nearly cancel (extreme class scalings); the linear system is kept
    as a cross-check with a cancellation-aware tolerance.  The semistable
    case has no separate closed form and uses the system path.
    """
    p = conical_coefficients(s, b, 1.0)
    if classify(stability_margin(s, canonicalize(b))) is not StabilityClass.STABLE:
        return p
    d0c, d1c = smooth_d0_d1_closed_form(s, b)
    # the system's own rounding floor: machine epsilon times the magnitude
    # of the (nearly cancelling) cubic and radical columns
    u = p.t_plus ** 2 + p.Cprime
    floor = 1e-14 * (abs(p.c3) * p.t_plus ** 3 + abs(p.cR) * u ** 1.5)
    tol = 1e-9 * max(abs(d0c), abs(d1c), 1.0) + floor
    if abs(p.d0 - d0c) > tol or abs(p.d1 - d1c) > tol:
        raise ValidationError(
            "smooth closed-form coefficients disagree with boundary system"
        )
    return ProfilePoly(
        d0=d0c,
        d1=d1c,
        c2=p.c2,
        c3=p.c3,
        cR=p.cR,
        Cprime=p.Cprime,
        t_minus=p.t_minus,
        t_plus=p.t_plus,
        beta0=p.beta0,
        beta_inf=p.beta_inf,
        alpha=p.alpha,
    )


def _check_domain(p: ProfilePoly, t):
    t = np.asarray(t, dtype=float)
    if np.any(t < p.t_minus - _ENDPOINT_SLACK) or np.any(
        t > p.t_plus + _ENDPOINT_SLACK
    ):
        raise DomainError(f"t outside [{p.t_minus}, {p.t_plus}]")
    return t


def eval_psi(p: ProfilePoly, t):
    t = _check_domain(p, t)
    u = np.maximum(t ** 2 + p.Cprime, 0.0)
    out = p.d0 + p.d1 * t + p.c2 * t ** 2 + p.c3 * t ** 3 + p.cR * u ** 1.5
    return float(out) if out.ndim == 0 else out


def eval_psi_deriv(p: ProfilePoly, t, order: int = 1):
    """Analytic derivative of psi up to order 4 (order 0 returns psi)."""
    if order == 0:
        return eval_psi(p, t)
    if order not in (1, 2, 3, 4):
        raise ValueError(f"order must be in 0..4, got {order}")
    t = _check_domain(p, t)
    u = np.maximum(t ** 2 + p.Cprime, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        if order == 1:
            rad = 3.0 * t * np.sqrt(u)
            poly = p.d1 + 2.0 * p.c2 * t + 3.0 * p.c3 * t ** 2
        elif order == 2:
            rad = 3.0 * (2.0 * t ** 2 + p.Cprime) / np.sqrt(u)
            poly = 2.0 * p.c2 + 6.0 * p.c3 * t
        elif order == 3:
            rad = 3.0 * t * (2.0 * t ** 2 + 3.0 * p.Cprime) / u ** 1.5
            poly = 6.0 * p.c3 + 0.0 * t
        else:
            rad = 9.0 * p.Cprime ** 2 / u ** 2.5
            poly = 0.0 * t
    out = poly + p.cR * rad
    return float(out) if out.ndim == 0 else out


def eval_phi(p: ProfilePoly, t):
    """Momentum profile phi(t) = psi(t) / (2 t)."""
    t_arr = _check_domain(p, t)
    out = eval_psi(p, t) / (2.0 * t_arr)
    return float(out) if np.ndim(out) == 0 else out


def psi_pp_difference_closed_form(
    s: SurfaceParams, b: BundleClass, beta0: float = 1.0
) -> float:
    """Closed form of psi''(t_-) - psi''(t_+), valid for strict stability."""
    b = canonicalize(b)
    x, ss = s.x, s.s_sigma
    A2 = (1.0 + (b.k1 + b.k2) ** 2) ** 2
    B2 = (1.0 + (b.k1 - b.k2) ** 2) ** 2
    num = (3.0 * (1.0 + x) * beta0 - 3.0) * A2 - x ** 2 * B2 * (ss * x ** 2 + x)
    den = A2 * x - B2 * x ** 3
    return 4.0 * num / den


def positivity_certificate(
    p: ProfilePoly, num: int = 1001, refine_width: float = 1e-10
) -> PositivityReport:
    """Certify psi > 0 on the open interior.

    For alpha <= 0 the fourth derivative of psi is non-negative, so psi''
    is convex; together with psi''(t_-) > psi''(t_+) and the boundary data
    this certifies positivity.  For alpha > 0 no such argument is available
    and an adaptively refined grid scan is reported instead.
    """
    interior = np.linspace(p.t_minus, p.t_plus, num)[1:-1]
    vals = eval_psi(p, interior)
    i = int(np.argmin(vals))
    lo = interior[max(i - 1, 0)]
    hi = interior[min(i + 1, len(interior) - 1)]
    # golden-section style bisection refinement around the grid minimum
    while hi - lo > refine_width:
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if eval_psi(p, m1) <= eval_psi(p, m2):
            hi = m2
        else:
            lo = m1
    argmin = 0.5 * (lo + hi)
    min_value = float(min(np.min(vals), eval_psi(p, argmin)))

    if min_value <= 0.0:
        return PositivityReport(method="Failed", min_value=min_value, argmin=argmin)

    if p.alpha <= 0.0:
        fourth = eval_psi_deriv(p, interior, 4)
        degenerate = p.t_minus ** 2 + p.Cprime <= 0.0
        pp_minus = (
            math.inf if degenerate else eval_psi_deriv(p, p.t_minus, 2)
        )
        pp_plus = eval_psi_deriv(p, p.t_plus, 2)
        if np.all(fourth >= 0.0) and pp_minus > pp_plus:
            return PositivityReport(
                method="ConvexityCertified", min_value=min_value, argmin=argmin
            )
    return PositivityReport(method="GridVerified", min_value=min_value, argmin=argmin)


def scalar_residual(p: ProfilePoly, s: SurfaceParams, b: BundleClass, t):
    """Residual of the second-order profile ODE: psi''(t) minus its source.

    Zero (to rounding) for exact solutions.  The affine part of psi is in
    the kernel of psi'', so this residual cannot detect d0/d1 errors; the
    boundary checks cover those.
    """
    b = canonicalize(b)
    phase = phase_constant(b, s)
    sin_t, cos_t = phase.sin_theta, phase.cos_theta
    s_hat, r_hat = phase.s_hat, phase.r_hat
    alpha = p.alpha
    t = _check_domain(p, t)
    u = np.maximum(t ** 2 + p.Cprime, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        root = np.sqrt((1.0 / sin_t ** 2) * u)  # sqrt((cot^2+1)(t^2+C'))
        rhs = (
            (2.0 * alpha * cos_t / sin_t ** 2 - s_hat + alpha * r_hat) * t
            - (alpha / sin_t) * root
            - (alpha / sin_t ** 3) * t ** 2 / root
            + 2.0 * s.s_sigma
        )
    out = eval_psi_deriv(p, t, 2) - rhs
    return float(out) if np.ndim(out) == 0 else out


def phase_and_radius(
    p: ProfilePoly, s: SurfaceParams, b: BundleClass, dh: DhymSolution, t
):
    """Pointwise imaginary and real parts of the normalized top-form ratio.

    The imaginary part is the constant-phase residual and must vanish; the
    real part is the pointwise radius, whose average against the volume
    weight is the cohomological average radius.
    """
    sign = -1.0 if dh.conjugated else 1.0
    sin_t, cos_t = sign * dh.sin_theta, dh.cos_theta
    t_arr = _check_domain(p, t)
    H = eval_H(dh, t)
    Hp = eval_H_deriv(dh, t)
    one_minus = 1.0 - H * Hp / t_arr
    sum_part = Hp + H / t_arr
    im_part = sin_t * one_minus + cos_t * sum_part
    re_part = cos_t * one_minus - sin_t * sum_part
    if np.ndim(im_part) == 0:
        return float(im_part), float(re_part)
    return im_part, re_part


def average_radius_quadrature(
    s: SurfaceParams, b: BundleClass, dh: DhymSolution, p: ProfilePoly, tol=1e-10
) -> float:
    """Average of the pointwise radius against the volume weight x*t dt."""

    def integrand(t):
        _, re = phase_and_radius(p, s, b, dh, t)
        return t * re

    val = oracle.quadrature(integrand, dh.t_minus, dh.t_plus, tol=tol)
    return 0.5 * s.x * val
