"""Explicit constant-phase solution H(t) on the momentum interval.

Under the momentum construction the constant-phase equation reduces to a
first-order ODE for an auxiliary function H(t) on the fixed interval
[1/x - 1, 1/x + 1], whose relevant solution branch is

    H(t) = t cot(theta) - sqrt((cot(theta)^2 + 1) (t^2 + C')),

with a single integration constant C' fixed by the boundary data.  This
module builds that descriptor, evaluates H and its derivative analytically,
and exposes pointwise residuals of the ODE in denominator-cleared form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoSolutionError
from .params import (
    BundleClass,
    StabilityClass,
    SurfaceParams,
    canonicalize,
    classify,
    phase_constant,
    stability_margin,
)

#: Absolute slack accepted at interval endpoints before raising DomainError.
_ENDPOINT_SLACK = 1e-12


@dataclass(frozen=True)
class DhymSolution:
    """Descriptor of the explicit solution branch.

    regularity is "smooth" in the strictly stable case and "holder12" in the
    semistable one, where t^2 + C' vanishes at t_minus and H only extends
    with Hoelder exponent 1/2 there.
    """

    cot_theta: float
    Cprime: float
    t_minus: float
    t_plus: float
    regularity: str
    conjugated: bool = False

    @property
    def sin_theta(self) -> float:
        # sin(theta) > 0 on the canonical k1 < 0 branch
        return 1.0 / math.sqrt(1.0 + self.cot_theta ** 2)

    @property
    def cos_theta(self) -> float:
        return self.cot_theta * self.sin_theta


def integration_constants(s: SurfaceParams, b: BundleClass) -> tuple[float, float]:
    """The integration constant C of the separated ODE and C' = C sin(theta)."""
    b = canonicalize(b)
    phase = phase_constant(b)
    x = s.x
    num = -2.0 * b.k2 * (
        1.0 + (b.k1 + b.k2) ** 2 - x ** 2 - (b.k1 - b.k2) ** 2 * x ** 2
    )
    C = num / (x ** 2 * phase.r_hat)
    return C, C * phase.sin_theta


def boundary_targets(s: SurfaceParams, b: BundleClass) -> tuple[float, float]:
    """Required values (H(t_minus), H(t_plus)) from exactness of the potential.

    A class carrying the conjugation flag refers to the mirrored original
    input, so its targets are the negatives of the canonical ones.
    """
    x = s.x
    t_minus = 1.0 / x - 1.0
    t_plus = 1.0 / x + 1.0
    sign = -1.0 if b.conjugated else 1.0
    return (
        sign * (b.k1 * t_minus + b.k2 * t_plus),
        sign * (b.k1 * t_plus + b.k2 * t_minus),
    )


def solve_dhym(
    s: SurfaceParams, b: BundleClass, tol: float = 1e-12
) -> DhymSolution:
    """Build the solution descriptor; raises NoSolutionError when unstable."""
    b = canonicalize(b)
    margin = stability_margin(s, b)
    cls = classify(margin, tol)
    if cls is StabilityClass.UNSTABLE:
        raise NoSolutionError(margin)
    phase = phase_constant(b)
    _, Cprime = integration_constants(s, b)
    t_minus = 1.0 / s.x - 1.0
    t_plus = 1.0 / s.x + 1.0
    regularity = "holder12" if cls is StabilityClass.SEMISTABLE else "smooth"
    if regularity == "holder12":
        # pin the degeneracy exactly: t_minus^2 + C' = 0 up to rounding
        Cprime = -(t_minus ** 2)
    return DhymSolution(
        cot_theta=phase.cot_theta,
        Cprime=Cprime,
        t_minus=t_minus,
        t_plus=t_plus,
        regularity=regularity,
        conjugated=b.conjugated,
    )


def _check_domain(sol: DhymSolution, t):
    t = np.asarray(t, dtype=float)
    if np.any(t < sol.t_minus - _ENDPOINT_SLACK) or np.any(
        t > sol.t_plus + _ENDPOINT_SLACK
    ):
        raise DomainError(
            f"t outside [{sol.t_minus}, {sol.t_plus}]"
        )
    return t


def _sign(sol: DhymSolution) -> float:
    # conjugated descriptors evaluate the mirrored solution H -> -H
    return -1.0 if sol.conjugated else 1.0


def eval_H(sol: DhymSolution, t):
    """H(t) on [t_minus, t_plus]; accepts scalars or arrays.

    For a conjugated descriptor (input class reduced through the
    (k1, k2) -> (-k1, -k2) symmetry) this is the negative of the
    canonical-branch value.
    """
    t = _check_domain(sol, t)
    cot = sol.cot_theta
    sin_t, cos_t = sol.sin_theta, sol.cos_theta
    u = np.maximum(t ** 2 + sol.Cprime, 0.0)
    if cos_t > 0.0:
        # rationalized form: avoids the t*cos - sqrt(u) cancellation that
        # dominates for near-degenerate phases (e.g. small scaled classes)
        out = (-(t * sin_t) ** 2 - sol.Cprime) / (
            sin_t * (t * cos_t + np.sqrt(u))
        )
    else:
        out = t * cot - np.sqrt((cot ** 2 + 1.0) * u)
    out = _sign(sol) * out
    return float(out) if out.ndim == 0 else out


def eval_H_deriv(sol: DhymSolution, t):
    """Analytic H'(t); diverges at t_minus in the holder12 case."""
    t = _check_domain(sol, t)
    cot = sol.cot_theta
    sin_t, cos_t = sol.sin_theta, sol.cos_theta
    u = t ** 2 + sol.Cprime
    if cos_t > 0.0:
        root = np.sqrt(u)
        out = (cos_t ** 2 * sol.Cprime - (t * sin_t) ** 2) / (
            sin_t * root * (cos_t * root + t)
        )
    else:
        out = cot - t * math.sqrt(cot ** 2 + 1.0) / np.sqrt(u)
    out = _sign(sol) * out
    return float(out) if np.ndim(out) == 0 else out


def ode_residual_H(sol: DhymSolution, t):
    """Denominator-cleared residual of the first-order constant-phase ODE.

    Returns H'(t) (H sin - t cos) - (t sin + H cos); identically zero for the
    exact solution, and well defined even where H sin = t cos.  For a
    conjugated descriptor the phase has the opposite sine, which the residual
    accounts for.
    """
    sin_t = _sign(sol) * sol.sin_theta
    cos_t = sol.cos_theta
    H = eval_H(sol, t)
    Hp = eval_H_deriv(sol, t)
    t = np.asarray(t, dtype=float)
    out = Hp * (H * sin_t - t * cos_t) - (t * sin_t + H * cos_t)
    return float(out) if out.ndim == 0 else out


def eval_nu(sol: DhymSolution, s: SurfaceParams, b: BundleClass, t):
    """Potential-difference function; vanishes at both endpoints.

    nu(t) = k1 t + (k2/t)(1 - x^2)/x^2 - H(t), with (k1, k2) and H both
    taken on the same branch as the descriptor.
    """
    b = canonicalize(b)
    t_arr = _check_domain(sol, t)
    x = s.x
    sign = _sign(sol)
    out = sign * (
        b.k1 * t_arr + (b.k2 / t_arr) * (1.0 - x ** 2) / x ** 2
    ) - eval_H(sol, t)
    return float(out) if out.ndim == 0 else out


def default_grid(sol: DhymSolution, num: int = 1001) -> np.ndarray:
    """Uniform evaluation grid on [t_minus, t_plus]."""
    return np.linspace(sol.t_minus, sol.t_plus, num)
