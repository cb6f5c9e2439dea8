"""Twisted Kaehler-Einstein reduction of the scalar-curvature equation.

Under a cohomological condition on the cone angles and the class data, the
scalar-curvature equation collapses to a Ricci-form equation.  This module
evaluates that condition in its two equivalent forms, the matching functions
F(k1, k2) and H(k, k', h, beta) of the cone-angle analysis, the vertical
asymptote of H, and solves for the cone angle realizing the reduction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coupled import beta_infinity
from .errors import PoleError, TkeNotFoundError, ValidationError
from .params import BundleClass, CohClass, SurfaceParams, canonicalize

#: Bisection tolerance for the cone-angle solve.
BETA_TOL = 1e-12
#: Exclusion band around the asymptote and the interval ends.
_EDGE = 1e-9


@dataclass(frozen=True)
class TkeAnalysis:
    """Summary of the reduction analysis at a given cone angle."""

    gamma: float
    F_value: float
    H_at_1: float
    beta_bar: float
    condition_residual: float


def gamma_quantity(s: SurfaceParams, beta0: float) -> float:
    """(3 + x + s_sigma x^2 - 3 (1 + x) beta0) / x."""
    x = s.x
    return (3.0 + x + s.s_sigma * x ** 2 - 3.0 * (1.0 + x) * beta0) / x


def gamma_quantity_alt(s: SurfaceParams, beta0: float) -> float:
    """Equivalent form 4 - 6 beta0 + 3 (k'/k)(1 - beta0) + 2 (1-h)/(k+k')."""
    return (
        4.0
        - 6.0 * beta0
        + 3.0 * (s.kprime / s.k) * (1.0 - beta0)
        + 2.0 * (1.0 - s.h) / (s.k + s.kprime)
    )


def F_value(b: BundleClass) -> float:
    """(1 + (k1 + k2)^2) / (2 k1 k2)."""
    return (1.0 + (b.k1 + b.k2) ** 2) / (2.0 * b.k1 * b.k2)


def beta_asymptote(k: int, kprime: float, h: int) -> float:
    """Vertical asymptote of H(k, k', h, .) in the cone-angle variable."""
    return ((4.0 / 3.0) * k + kprime + 2.0 * (1.0 - h) * k / (3.0 * (k + kprime))) / (
        kprime + 2.0 * k
    )


def H_beta(k: int, kprime: float, h: int, beta: float) -> float:
    """The matching function H(k, k', h, beta); pole at the asymptote."""
    num = 2.0 * (1.0 - h) / (k + kprime) + 2.0 * (beta - 1.0) * k / kprime - 1.0
    den = 2.0 * (1.0 - h) / (k + kprime) + 3.0 * (kprime / k) * (1.0 - beta) + 4.0 - 6.0 * beta
    scale = max(1.0, abs(2.0 * (1.0 - h) / (k + kprime)), 3.0 * kprime / k + 6.0)
    if abs(den) < 1e-12 * scale:
        raise PoleError(f"beta = {beta} is the vertical asymptote")
    return 2.0 * num / den


def ricci_class(s: SurfaceParams, beta0: float, beta_inf: float) -> CohClass:
    """Class of the Ricci form with the given cone-angle pair."""
    return CohClass(
        a=beta0 + beta_inf,
        b=2.0 * (1.0 - s.h) - s.k * beta_inf,
    )


def condition_residual(s: SurfaceParams, b: BundleClass, beta0: float) -> float:
    """Left minus right side of the reduction condition (first form)."""
    x, ss = s.x, s.s_sigma
    k1, k2 = b.k1, b.k2
    lhs = (1.0 + k1 ** 2 + k2 ** 2) * (x - 1.0) * (
        ss * x ** 2 - 3.0 * beta0 * (x + 1.0) + x + 3.0
    )
    rhs = 2.0 * k1 * k2 * (
        -3.0 * beta0 + ss * x ** 3 - x ** 2 * (beta0 + ss - 1.0) + 3.0
    )
    return lhs - rhs


def condition_residual_alt(s: SurfaceParams, b: BundleClass, beta0: float) -> float:
    """Second form of the condition: F(k1,k2)*Gamma-normalized difference."""
    gamma = gamma_quantity(s, beta0)
    lhs = F_value(b) * gamma
    rhs = 2.0 * (
        2.0 * (1.0 - s.h) / (s.k + s.kprime)
        + 2.0 * (s.k / s.kprime) * (beta0 - 1.0)
        - 1.0
    )
    return lhs - rhs


def system_residuals(
    s: SurfaceParams, b: BundleClass, beta0: float
) -> tuple[float, float]:
    """Residuals of the two class equations of the reduction system."""
    k, kp, h = s.k, s.kprime, s.h
    beta_inf = beta_infinity(s.x, beta0)
    lhs = F_value(b) * gamma_quantity(s, beta0)
    r1 = lhs - (2.0 + 4.0 * (1.0 - h) / (k + kp) - 2.0 * (beta0 + beta_inf))
    r2 = lhs * (kp / 2.0 + k) - (
        2.0 * (1.0 - h) * (2.0 * k + kp) / (k + kp) - 2.0 * k * beta_inf - kp
    )
    return r1, r2


def analyze(s: SurfaceParams, b: BundleClass, beta0: float) -> TkeAnalysis:
    b = canonicalize(b)
    return TkeAnalysis(
        gamma=gamma_quantity(s, beta0),
        F_value=F_value(b),
        H_at_1=H_beta(s.k, s.kprime, s.h, 1.0),
        beta_bar=beta_asymptote(s.k, s.kprime, s.h),
        condition_residual=condition_residual(s, b, beta0),
    )


def solve_beta0(s: SurfaceParams, b: BundleClass, tol: float = BETA_TOL) -> float:
    """The unique cone angle in (beta_bar, 1) realizing the reduction.

    Bisection on the bracket guaranteed by the asymptote structure: H
    decreases from +infinity at the asymptote to H(1) < 2, so any target
    F(k1, k2) > 2 is attained exactly once.  Requires k1 < 0 and k2 < 0
    (stability is then automatic).
    """
    b = canonicalize(b)
    if b.k2 >= 0:
        raise ValidationError("cone-angle solve requires k2 < 0 after reduction")
    f = F_value(b)
    beta_bar = beta_asymptote(s.k, s.kprime, s.h)
    lo = beta_bar + _EDGE
    hi = 1.0 - _EDGE
    if not (0.0 < beta_bar < 1.0):
        raise TkeNotFoundError(f, attained=None,
                               message=f"asymptote {beta_bar} outside (0, 1)")
    h_lo = H_beta(s.k, s.kprime, s.h, lo)
    h_hi = H_beta(s.k, s.kprime, s.h, hi)
    if f <= 2.0 or not (h_hi <= f <= h_lo):
        raise TkeNotFoundError(f, attained=(h_hi, h_lo))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if H_beta(s.k, s.kprime, s.h, mid) >= f:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    beta0 = 0.5 * (lo + hi)
    if abs(condition_residual(s, b, beta0)) > 1e-9 * max(1.0, abs(f)):
        raise TkeNotFoundError(
            f, attained=(h_hi, h_lo), message="bisection converged but condition residual too large"
        )
    return beta0
