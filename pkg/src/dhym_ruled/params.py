"""Parameter model for the ruled surface and the line-bundle class.

The surface is the projectivization of (degree-k line bundle) + (trivial
bundle) over a genus-h curve, carrying the Kaehler class 2*pi*[2 E0 + k' C].
The curvature class is parametrized by the two reals (k1, k2).  Everything
downstream (phase constant, stability, cohomology bookkeeping) is a pure
function of these inputs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .errors import DegenerateClassError, DegeneratePhaseError, ValidationError

#: Default half-width of the semistable band around margin = 0.
DEFAULT_STABILITY_TOL = 1e-12


@dataclass(frozen=True)
class SurfaceParams:
    """Base data of the ruled surface and its Kaehler class.

    k is the degree of the line bundle over the curve, h the genus of the
    curve, kprime > 0 the fiber-class coefficient of the Kaehler class.
    The derived quantities are x = k/(k+k') and the (constant) base scalar
    curvature s_sigma = 2(1-h)/k.
    """

    k: int
    h: int
    kprime: float
    x: float
    s_sigma: float


@dataclass(frozen=True)
class BundleClass:
    """Curvature class parameters (k1, k2).

    ``conjugated`` records that the input had k1 > 0 and was reduced via the
    symmetry (k1, k2) -> (-k1, -k2); solutions for the original data are the
    negatives of the solutions computed from the reduced data.
    """

    k1: float
    k2: float
    conjugated: bool = False


class StabilityClass(enum.Enum):
    STABLE = "Stable"
    SEMISTABLE = "Semistable"
    UNSTABLE = "Unstable"


@dataclass(frozen=True)
class Phase:
    """The constant phase, stored as a (cos, sin) pair.

    The angle itself is never materialized: every closed form downstream uses
    only cos, sin and cot.  r_hat is the average radius and s_hat the average
    scalar curvature (filled when a surface is supplied).
    """

    cos_theta: float
    sin_theta: float
    r_hat: float
    s_hat: float | None = None

    @property
    def cot_theta(self) -> float:
        if self.sin_theta == 0.0:
            raise DegeneratePhaseError("sin(theta) = 0: cot undefined")
        return self.cos_theta / self.sin_theta


@dataclass(frozen=True)
class CohClass:
    """A (1,1) cohomology class, as coefficients of [. /(2 pi)].

    ``a`` multiplies the zero section [E0], ``b`` the fiber [C].
    """

    a: float
    b: float


def make_surface(k: int, h: int, kprime: float) -> SurfaceParams:
    """Build SurfaceParams, deriving x and s_sigma."""
    if not (isinstance(k, int) and k >= 1):
        raise ValidationError(f"k must be a positive integer, got {k!r}")
    if not (isinstance(h, int) and h >= 0):
        raise ValidationError(f"h must be a non-negative integer, got {h!r}")
    kprime = float(kprime)
    if not (kprime > 0):
        raise ValidationError(f"kprime must be positive, got {kprime!r}")
    x = k / (k + kprime)
    s_sigma = 2.0 * (1 - h) / k
    return SurfaceParams(k=k, h=h, kprime=kprime, x=x, s_sigma=s_sigma)


def canonicalize(b: BundleClass) -> BundleClass:
    """Reduce to the k1 < 0 convention via (k1, k2) -> (-k1, -k2).

    Classes with k1 = 0 or k2 = 0 are rejected: the explicit solutions divide
    by k1, k2 and sin(theta), and these cases are trivial anyway.
    """
    if b.k1 == 0.0:
        raise DegenerateClassError("degenerate bundle class: k1 = 0")
    if b.k2 == 0.0:
        raise DegenerateClassError("degenerate bundle class: k2 = 0")
    if b.k1 > 0:
        return BundleClass(k1=-b.k1, k2=-b.k2, conjugated=not b.conjugated)
    return b


def stability_margin(s: SurfaceParams, b: BundleClass) -> float:
    """(1 + (k1+k2)^2) - x (1 + (k1-k2)^2); positive iff strictly stable."""
    return (1.0 + (b.k1 + b.k2) ** 2) - s.x * (1.0 + (b.k1 - b.k2) ** 2)


def classify(margin: float, tol: float = DEFAULT_STABILITY_TOL) -> StabilityClass:
    if tol < 0:
        raise ValidationError("tol must be >= 0")
    if abs(margin) <= tol:
        return StabilityClass.SEMISTABLE
    return StabilityClass.STABLE if margin > 0 else StabilityClass.UNSTABLE


def phase_constant(b: BundleClass, s: SurfaceParams | None = None) -> Phase:
    """Phase of the class pairing: (cos, sin) = (1 - k1^2 + k2^2, -2 k1)/r_hat."""
    re = 1.0 - b.k1 ** 2 + b.k2 ** 2
    im = -2.0 * b.k1
    r_hat = math.hypot(re, im)
    if r_hat == 0.0:
        raise DegeneratePhaseError("phase numerator vanishes")
    s_hat = None if s is None else 2.0 * s.x * s.s_sigma + 2.0
    return Phase(cos_theta=re / r_hat, sin_theta=im / r_hat, r_hat=r_hat, s_hat=s_hat)


def cohomology_classes(s: SurfaceParams, b: BundleClass) -> tuple[CohClass, CohClass]:
    """Classes of the Kaehler form and of the curvature form."""
    omega = CohClass(a=2.0, b=s.kprime)
    f = CohClass(
        a=2.0 * (b.k1 - b.k2),
        b=2.0 * s.k * b.k2 + s.kprime * (b.k1 + b.k2),
    )
    return omega, f


def intersection_pairing(u: CohClass, v: CohClass, k: int) -> float:
    """Pairing in the ([E0], [C]) basis: E0.E0 = k, C.C = 0, C.E0 = 1."""
    return u.a * v.a * k + u.a * v.b + u.b * v.a


def jy_class(s: SurfaceParams, b: BundleClass) -> tuple[CohClass, bool]:
    """Class of cot(theta)*omega - F and whether it lies in the Kaehler cone.

    Positivity of this class is equivalent to the strict stability
    inequality.
    """
    phase = phase_constant(b)
    if phase.sin_theta == 0.0:
        raise DegeneratePhaseError("sin(theta) = 0")
    cot = phase.cot_theta
    omega, f = cohomology_classes(s, b)
    cls = CohClass(a=cot * omega.a - f.a, b=cot * omega.b - f.b)
    return cls, (cls.a > 0 and cls.b > 0)


def from_complexified(
    k: int, h: int, kprime: float, kpp: float
) -> tuple[SurfaceParams, BundleClass]:
    """B-field parametrization: k1 = k2 = k''/(2(k + k')).

    k'' > 0 is reduced by the conjugation symmetry (flag recorded); k'' = 0
    would require a constant-scalar-curvature metric, which does not exist on
    these surfaces.
    """
    if kpp == 0.0:
        raise ValidationError("kpp = 0: no canonical representative exists")
    s = make_surface(k, h, kprime)
    k12 = kpp / (2.0 * (k + kprime))
    return s, canonicalize(BundleClass(k1=k12, k2=k12))


def bfield_alpha(k: int, h: int, kprime: float, kpp: float, beta0: float) -> float:
    """Coupling constant of the canonical B-field representative.

    Agrees with the conical coupling constant under the substitution
    k1 = k2 = k''/(2(k + k')).
    """
    if kpp == 0.0:
        raise ValidationError("kpp must be nonzero")
    if not (0.0 < beta0 <= 1.0):
        raise ValidationError(f"beta0 must lie in (0, 1], got {beta0!r}")
    s = make_surface(k, h, kprime)
    bracket = (
        k ** 2 * (-6.0 * beta0 + s.s_sigma + 4.0)
        + (7.0 - 9.0 * beta0) * k * kprime
        - 3.0 * (beta0 - 1.0) * kprime ** 2
    )
    return 2.0 * math.hypot(k + kprime, kpp) * bracket / (k * kpp ** 2)


def conjugate_bundle(b: BundleClass) -> BundleClass:
    """The mirror class (-k1, -k2) with the conjugation flag toggled."""
    return replace(b, k1=-b.k1, k2=-b.k2, conjugated=not b.conjugated)
