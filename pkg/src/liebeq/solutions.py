"""The two closed-form solutions of the Lieb equation and the residual verifier.

Both known solutions share the decay index m = n - lam/2:

    singular:  C(n,lam) |x|^(-m)        (unbounded at the origin)
    bounded:   L(n,lam) (1+|x|^2)^(-m)  (the Lieb solution)

verify_solution certifies a candidate by comparing (Tf)(r) against
f(r)^(p-1) on sample radii, with residuals always taken relative to the
right-hand side because both solutions span many orders of magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass

from .quadrature import QuadratureSpec
from .radial_riesz import POWER_SINGULAR, RadialProfile, riesz_potential_radial
from .specfun import Params, lieb_constant_C, lieb_constant_L

__all__ = [
    "ResidualReport",
    "singular_solution",
    "lieb_solution",
    "verify_solution",
    "VERIFIED",
    "REFUTED",
    "INCONCLUSIVE",
]

VERIFIED = "Verified"
REFUTED = "Refuted"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of checking (Tf)(r) = f(r)^(p-1) on a set of radii.

    Refuted requires the residual to exceed 10x tolerance with every
    quadrature error estimate at least 10x smaller than the residual, so a
    poorly converged integral can never masquerade as a refutation.
    """

    params: Params
    sample_radii: tuple
    lhs_values: tuple
    rhs_values: tuple
    err_estimates: tuple
    max_rel_residual: float
    tolerance: float
    verdict: str


def singular_solution(params: Params) -> RadialProfile:
    """The power solution C(n,lam)|x|^(-(n-lam/2)): singular at 0, decaying at infinity."""
    return RadialProfile.power_singular(lieb_constant_C(params), params.solution_exponent)


def lieb_solution(params: Params, quad: QuadratureSpec | None = None) -> RadialProfile:
    """The bounded solution L(n,lam)(1+|x|^2)^(-(n-lam/2)) with derived amplitude."""
    return RadialProfile.lieb(lieb_constant_L(params, quad), params.solution_exponent)


def verify_solution(f: RadialProfile, params: Params, radii,
                    tolerance: float = 1e-6,
                    quad: QuadratureSpec | None = None) -> ResidualReport:
    """Certify or refute a candidate solution on the given sample radii.

    Radii must be nonnegative and nonempty; r = 0 is rejected for profiles
    that are singular there.  Raises ScreenRejected if the potential's
    convergence screen fails at any radius.
    """
    radii = tuple(float(r) for r in radii)
    if not radii:
        raise ValueError("need at least one sample radius")
    if any(r < 0 for r in radii):
        raise ValueError("radii must be nonnegative")
    if f.kind == POWER_SINGULAR and any(r == 0.0 for r in radii):
        raise ValueError("r = 0 is a singular point of this profile")
    quad = quad or QuadratureSpec()

    pm1 = params.pm1
    lhs, rhs, errs = [], [], []
    for r in radii:
        value, err = riesz_potential_radial(f, params, r, quad, with_error=True)
        lhs.append(value)
        rhs.append(float(f.value(r)) ** pm1)
        errs.append(err)

    rel_residuals = [abs(a - b) / abs(b) for a, b in zip(lhs, rhs)]
    max_rel = max(rel_residuals)
    rel_errs = [e / abs(b) for e, b in zip(errs, rhs)]

    if max_rel <= tolerance:
        verdict = VERIFIED
    elif max_rel > 10.0 * tolerance and all(re <= max_rel / 10.0 for re in rel_errs):
        verdict = REFUTED
    else:
        verdict = INCONCLUSIVE

    return ResidualReport(
        params=params,
        sample_radii=radii,
        lhs_values=tuple(lhs),
        rhs_values=tuple(rhs),
        err_estimates=tuple(errs),
        max_rel_residual=max_rel,
        tolerance=float(tolerance),
        verdict=verdict,
    )
