"""Constant-coefficient differential forms and the integral identities
connecting solutions of the Lieb equation.

For solutions f, g and multi-indices alpha, beta the following hold
whenever the integrals converge absolutely (certified here by exponent
screening before any quadrature is attempted):

  cross commutativity:   int D_beta(g) D_alpha(f^(p-1))
                            = int D_alpha(f) D_beta(g^(p-1))
  signed symmetry:       (-1)^|beta| int D_beta(f) D_alpha(f^(p-1))
                            = (-1)^|alpha| int D_alpha(f) D_beta(f^(p-1))
  odd orthogonality:     both integrals vanish when (-1)^(|alpha|+|beta|) = -1

and their composite-form versions for Lambda = Lambda_even + Lambda_odd.

Identity integrals run on the line (n = 1) with exact closed-form
derivatives of the two solution families; the alpha = beta = 0 instances
are also available in higher dimension through the radial reduction.
Both known solutions are even, so odd-total instances are zero by parity
alone; reports carry a parity_forced flag to keep that honest.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import quadrature
from .quadrature import QuadratureSpec, ScreenResult, SingularityBudget, convergence_screen
from .radial_riesz import GRID_SAMPLED, POWER_SINGULAR, RadialProfile
from .specfun import Params, sphere_surface_area

__all__ = [
    "MultiIndex",
    "DifferentialForm",
    "IdentityReport",
    "SolutionDescriptor",
    "solution_descriptor",
    "parse_form",
    "apply_form",
    "parity_split",
    "check_commutativity",
    "check_orthogonality",
    "check_composite",
    "cutoff_pair_integral",
    "VERIFIED",
    "REFUTED",
    "INCONCLUSIVE",
    "NOT_APPLICABLE",
]

VERIFIED = "Verified"
REFUTED = "Refuted"
INCONCLUSIVE = "Inconclusive"
NOT_APPLICABLE = "NotApplicable"

MAX_DERIVATIVE_ORDER = 6


@dataclass(frozen=True)
class MultiIndex:
    """Differentiation multi-index (alpha_1, ..., alpha_n)."""

    components: tuple

    def __post_init__(self):
        comps = tuple(int(c) for c in self.components)
        if any(c < 0 for c in comps):
            raise ValueError("multi-index components must be nonnegative")
        object.__setattr__(self, "components", comps)

    @property
    def order(self) -> int:
        return sum(self.components)

    @property
    def parity(self) -> int:
        """(-1)^|alpha|: +1 for even total order, -1 for odd."""
        return -1 if self.order % 2 else 1

    @property
    def dimension(self) -> int:
        return len(self.components)


def _as_index(alpha, dimension: int) -> MultiIndex:
    if isinstance(alpha, MultiIndex):
        idx = alpha
    elif isinstance(alpha, int):
        idx = MultiIndex((alpha,) + (0,) * (dimension - 1))
    else:
        idx = MultiIndex(tuple(alpha))
    if idx.dimension != dimension:
        raise ValueError(f"multi-index {idx.components} does not match dimension {dimension}")
    return idx


@dataclass(frozen=True)
class DifferentialForm:
    """Constant-coefficient linear differential form  sum_a coeff_a D_a.

    Terms are canonicalized: duplicate indices merged, zero coefficients
    pruned, and the term list sorted, so equal forms compare equal and all
    downstream reports are independent of term ordering.
    """

    terms: tuple
    dimension: int

    def __post_init__(self):
        merged = {}
        for coeff, idx in self.terms:
            idx = _as_index(idx, self.dimension)
            merged[idx.components] = merged.get(idx.components, 0.0) + float(coeff)
        canon = tuple(sorted(
            ((c, MultiIndex(comps)) for comps, c in merged.items() if c != 0.0),
            key=lambda t: t[1].components))
        object.__setattr__(self, "terms", canon)

    @classmethod
    def from_terms(cls, dimension: int, *terms) -> "DifferentialForm":
        """Build from (coefficient, index) pairs; index may be an int order
        (dimension 1), a component tuple, or a MultiIndex."""
        return cls(tuple(terms), dimension)

    @property
    def even_part(self) -> "DifferentialForm":
        return DifferentialForm(
            tuple(t for t in self.terms if t[1].parity == 1), self.dimension)

    @property
    def odd_part(self) -> "DifferentialForm":
        return DifferentialForm(
            tuple(t for t in self.terms if t[1].parity == -1), self.dimension)

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        if other.dimension != self.dimension:
            raise ValueError("dimension mismatch")
        return DifferentialForm(self.terms + other.terms, self.dimension)

    def __rmul__(self, scalar: float) -> "DifferentialForm":
        return DifferentialForm(
            tuple((scalar * c, idx) for c, idx in self.terms), self.dimension)


def parity_split(form: DifferentialForm):
    """Split a form into its even and odd parts; they partition the terms
    and sum back to the input."""
    return form.even_part, form.odd_part


_TERM_RE = re.compile(r"^(?:(?P<coeff>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\*?)?"
                      r"(?:d(?P<axes>\d*))?$")


def parse_form(text: str, dimension: int) -> DifferentialForm:
    """Parse the CLI form syntax, e.g. "1.0*d1 + 2.0*d11 - 0.5*d2".

    Each term is coefficient*dAXES where every digit names one axis to
    differentiate once (d11 = second derivative along axis 1); a bare
    coefficient or "d" with no digits is the identity term.  Axes are
    1-based and limited to dimensions 1..9.
    """
    if not 1 <= dimension <= 9:
        raise ValueError("form syntax supports dimensions 1..9")
    src = text.replace("-", "+-").replace(" ", "")
    pieces = [p for p in src.split("+") if p]
    if not pieces:
        raise ValueError(f"cannot parse differential form {text!r}")
    terms = []
    for piece in pieces:
        m = _TERM_RE.match(piece)
        if not m or (m.group("coeff") is None and m.group("axes") is None):
            raise ValueError(f"cannot parse form term {piece!r} in {text!r}")
        coeff = float(m.group("coeff")) if m.group("coeff") not in (None, "", "+", "-") \
            else (-1.0 if m.group("coeff") == "-" else 1.0)
        comps = [0] * dimension
        axes = m.group("axes")
        if axes:
            for digit in axes:
                axis = int(digit)
                if not 1 <= axis <= dimension:
                    raise ValueError(f"axis {axis} out of range for dimension {dimension}")
                comps[axis - 1] += 1
        terms.append((coeff, MultiIndex(tuple(comps))))
    return DifferentialForm(tuple(terms), dimension)


# ---------------------------------------------------------------------------
# derivative evaluation

@lru_cache(maxsize=None)
def _central_weights(order: int, halfwidth: int):
    """Symmetric central finite-difference weights for the given derivative
    order (accuracy >= 4 with halfwidth = order//2 + 2)."""
    offsets = np.arange(-halfwidth, halfwidth + 1, dtype=float)
    v = np.vander(offsets, increasing=True).T
    rhs = np.zeros(len(offsets))
    rhs[order] = math.factorial(order)
    return offsets, np.linalg.solve(v, rhs)


def _fd_derivative(func, x: np.ndarray, index: MultiIndex) -> float:
    """Nested central differences for D_index func at point x (order >= 4)."""
    k = index.order
    if k > MAX_DERIVATIVE_ORDER:
        raise ValueError(f"derivative order {k} exceeds the cap {MAX_DERIVATIVE_ORDER}")
    scale = max(1.0, float(np.max(np.abs(x))))
    h = np.finfo(float).eps ** (1.0 / (k + 2)) * scale

    def recurse(point, comps):
        for axis, order in enumerate(comps):
            if order > 0:
                offsets, weights = _central_weights(order, order // 2 + 2)
                rest = comps[:axis] + (0,) + comps[axis + 1:]
                acc = 0.0
                for off, wgt in zip(offsets, weights):
                    shifted = np.array(point, dtype=float)
                    shifted[axis] += off * h
                    acc += wgt * recurse(shifted, rest)
                return acc / h ** order
        return float(func(point if point.size > 1 else float(point[0])))

    return recurse(np.atleast_1d(np.asarray(x, dtype=float)), index.components)


def _derivative_1d(descriptor, x, order: int):
    """k-th line derivative of a profile descriptor, analytic when closed-form."""
    if isinstance(descriptor, RadialProfile) and descriptor.kind != GRID_SAMPLED:
        return descriptor.derivative_1d(x, order)
    func = descriptor.value if isinstance(descriptor, RadialProfile) else descriptor
    idx = MultiIndex((order,))
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if isinstance(descriptor, RadialProfile):
        out = np.array([_fd_derivative(lambda t: func(abs(t)), xi, idx) for xi in xs])
    else:
        out = np.array([_fd_derivative(func, xi, idx) for xi in xs])
    return out if np.ndim(x) else float(out[0])


def apply_form(form: DifferentialForm, f, x):
    """Evaluate (sum_a coeff_a D_a f)(x).

    f may be a RadialProfile (closed forms differentiate analytically on
    the line), a SolutionDescriptor, or a plain callable of an n-vector
    (handled by central finite differences of order >= 4 with step
    eps^(1/(|a|+2)) * scale(x)).  Singular points of power profiles are
    domain errors; derivative orders are capped at 6.
    """
    if isinstance(f, SolutionDescriptor):
        f = f.base
    n = form.dimension
    if isinstance(f, RadialProfile) and f.kind != GRID_SAMPLED and n == 1:
        x_arr = np.asarray(x, dtype=float)
        if f.kind == POWER_SINGULAR and np.any(x_arr == 0.0):
            raise ValueError("x = 0 is a singular point of this profile")
        total = 0.0
        for coeff, idx in form.terms:
            if idx.order > MAX_DERIVATIVE_ORDER:
                raise ValueError(f"derivative order {idx.order} exceeds the cap")
            total += coeff * f.derivative_1d(x_arr, idx.order)
        return total
    point = np.atleast_1d(np.asarray(x, dtype=float))
    if point.size != n:
        raise ValueError(f"point has dimension {point.size}, form has {n}")
    if isinstance(f, RadialProfile):
        if f.kind == POWER_SINGULAR and not np.any(point != 0.0):
            raise ValueError("the origin is a singular point of this profile")
        target = lambda p: float(f.value(float(np.linalg.norm(np.atleast_1d(p)))))
    else:
        target = f
    return math.fsum(
        coeff * _fd_derivative(target, point, idx) for coeff, idx in form.terms)


# ---------------------------------------------------------------------------
# solution descriptors and their exponent bookkeeping

@dataclass(frozen=True)
class SolutionDescriptor:
    """A solution profile together with its (p-1) power, ready for identity
    integrals: exact line derivatives and endpoint exponents of both."""

    base: RadialProfile
    power: RadialProfile
    params: Params
    label: str = ""

    def deriv(self, side: str, x, order: int):
        profile = self.base if side == "base" else self.power
        return profile.derivative_1d(x, order)

    def zero_exponent(self, side: str, order: int) -> float:
        profile = self.base if side == "base" else self.power
        if profile.kind == POWER_SINGULAR:
            return -(profile.exponent + order)
        return 0.0  # bounded at the origin, derivatives included

    def infinity_exponent(self, side: str, order: int) -> float:
        profile = self.base if side == "base" else self.power
        if profile.kind == POWER_SINGULAR:
            return -(profile.exponent + order)
        return -(2.0 * profile.exponent + order)

    @property
    def even(self) -> bool:
        return True  # both closed-form families are even in x


def solution_descriptor(profile: RadialProfile, params: Params,
                        label: str = "") -> SolutionDescriptor:
    """Wrap a closed-form solution profile for use in identity checks."""
    if profile.kind == GRID_SAMPLED:
        raise ValueError("identity checks need closed-form profiles")
    return SolutionDescriptor(profile, profile.pow(params.pm1), params, label)


# ---------------------------------------------------------------------------
# pair integrals: int D_beta(g_side) * D_alpha(f_side) over R^n

@dataclass(frozen=True)
class _PairResult:
    value: float
    error: float
    screen: ScreenResult
    parity_forced: bool
    conditioning: float | None = None


def _pair_budget(g: SolutionDescriptor, g_side: str, beta: int,
                 f: SolutionDescriptor, f_side: str, alpha: int,
                 n: int) -> SingularityBudget:
    measure = n - 1
    at_zero = (g.zero_exponent(g_side, beta) + f.zero_exponent(f_side, alpha) + measure)
    at_inf = (g.infinity_exponent(g_side, beta) + f.infinity_exponent(f_side, alpha) + measure)
    return SingularityBudget(((0.0, at_zero), (math.inf, at_inf)))


def _pair_integral(g: SolutionDescriptor, g_side: str, beta: int,
                   f: SolutionDescriptor, f_side: str, alpha: int,
                   params: Params, quad: QuadratureSpec,
                   with_conditioning: bool = False) -> _PairResult:
    """Certified integral of D_beta(g_side) * D_alpha(f_side) over R^n.

    n = 1 integrates both half-lines separately (no parity shortcut); the
    radial reduction covers alpha = beta = 0 in higher dimension.  Returns
    value 0 with the screen attached when the screen rejects the budget.
    """
    n = params.n
    if n > 1 and (alpha or beta):
        raise ValueError("derivative identities run on the line; higher "
                         "dimensions support only the order-zero radial case")
    screen = convergence_screen(_pair_budget(g, g_side, beta, f, f_side, alpha, n))
    parity_forced = (alpha + beta) % 2 == 1  # even profiles, odd integrand
    if not screen:
        return _PairResult(math.nan, math.nan, screen, parity_forced)

    tail = (g.infinity_exponent(g_side, beta) + f.infinity_exponent(f_side, alpha)
            + (n - 1))
    spec = quad.with_tail(tail)

    def integrand(x):
        x = np.asarray(x, dtype=float)
        out = g.deriv(g_side, x, beta) * f.deriv(f_side, x, alpha)
        if n > 1:
            out = out * sphere_surface_area(n) * x ** (n - 1)
        return out

    if n == 1:
        plus = quadrature.integrate(integrand, 0.0, math.inf, spec)
        minus = quadrature.integrate(lambda t: integrand(-np.asarray(t, dtype=float)),
                                     0.0, math.inf, spec)
        value, err = plus.value + minus.value, plus.error + minus.error
    else:
        res = quadrature.integrate(integrand, 0.0, math.inf, spec)
        value, err = res.value, res.error

    conditioning = None
    if with_conditioning:
        loose = QuadratureSpec(rel_tol=1e-6, abs_tol=1e-12,
                               max_subdivisions=quad.max_subdivisions,
                               tail_exponent_hint=tail)
        absint = lambda x: np.abs(integrand(np.asarray(x, dtype=float)))
        cplus = quadrature.integrate(absint, 0.0, math.inf, loose)
        if n == 1:
            cminus = quadrature.integrate(
                lambda t: np.abs(integrand(-np.asarray(t, dtype=float))),
                0.0, math.inf, loose)
            conditioning = cplus.value + cminus.value
        else:
            conditioning = cplus.value
    return _PairResult(value, err, screen, parity_forced, conditioning)


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class IdentityReport:
    """One certified identity instance.

    rel_gap is |lhs-rhs| / max(|lhs|, |rhs|, abs_floor); zero-target
    reports instead certify max(|lhs|, |rhs|) <= tolerance and carry the
    integral of |integrand| as a conditioning denominator.  A divergent
    screen forces the NotApplicable verdict (a contract outcome, not a
    fault).  parity_forced flags instances that vanish by evenness of the
    solutions alone.
    """

    identity_id: str
    description: str
    lhs: float
    rhs: float
    screen: ScreenResult
    rel_gap: float
    verdict: str
    tolerance: float
    abs_floor: float
    zero_target: bool = False
    parity_forced: bool = False
    conditioning: float | None = None
    err_lhs: float = 0.0
    err_rhs: float = 0.0


def _equality_report(identity_id: str, description: str,
                     lhs: _PairResult, rhs: _PairResult,
                     tolerance: float, abs_floor: float,
                     lhs_sign: float = 1.0, rhs_sign: float = 1.0) -> IdentityReport:
    for side in (lhs, rhs):
        if not side.screen:
            return IdentityReport(identity_id, description, math.nan, math.nan,
                                  side.screen, math.nan, NOT_APPLICABLE,
                                  tolerance, abs_floor,
                                  parity_forced=lhs.parity_forced)
    a, b = lhs_sign * lhs.value, rhs_sign * rhs.value
    denom = max(abs(a), abs(b), abs_floor)
    gap = abs(a - b) / denom
    rel_err = (lhs.error + rhs.error) / denom
    if gap <= tolerance:
        verdict = VERIFIED
    elif gap > 10.0 * tolerance and rel_err <= gap / 10.0:
        verdict = REFUTED
    else:
        verdict = INCONCLUSIVE
    return IdentityReport(identity_id, description, a, b, lhs.screen, gap, verdict,
                          tolerance, abs_floor,
                          parity_forced=lhs.parity_forced and rhs.parity_forced,
                          err_lhs=lhs.error, err_rhs=rhs.error)


def _zero_report(identity_id: str, description: str,
                 lhs: _PairResult, rhs: _PairResult | None,
                 tolerance: float, abs_floor: float) -> IdentityReport:
    sides = (lhs,) if rhs is None else (lhs, rhs)
    for side in sides:
        if not side.screen:
            return IdentityReport(identity_id, description, math.nan, math.nan,
                                  side.screen, math.nan, NOT_APPLICABLE,
                                  tolerance, abs_floor, zero_target=True,
                                  parity_forced=lhs.parity_forced)
    a = lhs.value
    b = rhs.value if rhs is not None else 0.0
    worst = max(abs(v) for v in (a, b))
    err = max(s.error for s in sides)
    if worst <= tolerance:
        verdict = VERIFIED
    elif worst > 10.0 * tolerance and err <= worst / 10.0:
        verdict = REFUTED
    else:
        verdict = INCONCLUSIVE
    conditioning = max(s.conditioning for s in sides if s.conditioning is not None) \
        if any(s.conditioning is not None for s in sides) else None
    return IdentityReport(identity_id, description, a, b, lhs.screen, worst, verdict,
                          tolerance, abs_floor, zero_target=True,
                          parity_forced=all(s.parity_forced for s in sides),
                          conditioning=conditioning,
                          err_lhs=lhs.error, err_rhs=rhs.error if rhs else 0.0)


_IDENTITY_QUAD = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-13)


def _order_of(alpha, params: Params) -> int:
    idx = _as_index(alpha, params.n)
    return idx.order


def check_commutativity(f: SolutionDescriptor, g: SolutionDescriptor,
                        alpha, beta, params: Params,
                        quad: QuadratureSpec | None = None,
                        tolerance: float = 1e-6,
                        abs_floor: float = 1e-12) -> IdentityReport:
    """Certify  int D_beta(g) D_alpha(f^(p-1)) = int D_alpha(f) D_beta(g^(p-1)).

    The order-zero instance with the singular and bounded solutions is the
    zeroth cross identity between the two; a divergent screen on either
    side yields NotApplicable.
    """
    quad = quad or _IDENTITY_QUAD
    a, b = _order_of(alpha, params), _order_of(beta, params)
    lhs = _pair_integral(g, "base", b, f, "power", a, params, quad)
    rhs = _pair_integral(f, "base", a, g, "power", b, params, quad)
    desc = (f"int D{b}[{g.label or 'g'}] D{a}[{f.label or 'f'}^(p-1)] = "
            f"int D{a}[{f.label or 'f'}] D{b}[{g.label or 'g'}^(p-1)]")
    return _equality_report("cross-commutativity", desc, lhs, rhs,
                            tolerance, abs_floor)


def check_orthogonality(f: SolutionDescriptor, alpha, beta, params: Params,
                        quad: QuadratureSpec | None = None,
                        tolerance: float = 1e-6,
                        zero_tolerance: float = 1e-8,
                        abs_floor: float = 1e-12) -> IdentityReport:
    """Single-solution instance: for odd |alpha|+|beta| both integrals are
    certified zero in absolute value; for even totals the signed equality
    (-1)^|beta| I(beta, alpha) = (-1)^|alpha| I(alpha, beta) is certified.
    """
    quad = quad or _IDENTITY_QUAD
    a, b = _order_of(alpha, params), _order_of(beta, params)
    odd_total = (a + b) % 2 == 1
    lhs = _pair_integral(f, "base", b, f, "power", a, params, quad,
                         with_conditioning=odd_total)
    rhs = _pair_integral(f, "base", a, f, "power", b, params, quad,
                         with_conditioning=odd_total)
    name = f.label or "f"
    if odd_total:
        desc = (f"int D{b}[{name}] D{a}[{name}^(p-1)] = "
                f"int D{a}[{name}] D{b}[{name}^(p-1)] = 0")
        return _zero_report("odd-orthogonality", desc, lhs, rhs,
                            zero_tolerance, abs_floor)
    desc = (f"(-1)^{b} int D{b}[{name}] D{a}[{name}^(p-1)] = "
            f"(-1)^{a} int D{a}[{name}] D{b}[{name}^(p-1)]")
    return _equality_report("signed-self-commutativity", desc, lhs, rhs,
                            tolerance, abs_floor,
                            lhs_sign=(-1.0) ** b, rhs_sign=(-1.0) ** a)


@dataclass(frozen=True)
class _FormIntegral:
    """Sum of certified term-pair integrals for form(f_side) * form(g_side)."""
    value: float
    error: float
    screen: ScreenResult
    parity_forced: bool

    def as_pair(self) -> _PairResult:
        return _PairResult(self.value, self.error, self.screen, self.parity_forced)


def _form_pair_integral(lam_form: DifferentialForm, f: SolutionDescriptor, f_side: str,
                        omega_form: DifferentialForm, g: SolutionDescriptor, g_side: str,
                        params: Params, quad: QuadratureSpec) -> _FormIntegral:
    value = 0.0
    error = 0.0
    forced = True
    for cf, idx_f in lam_form.terms:
        for cg, idx_g in omega_form.terms:
            a = idx_f.components[0] if params.n == 1 else idx_f.order
            b = idx_g.components[0] if params.n == 1 else idx_g.order
            part = _pair_integral(g, g_side, b, f, f_side, a, params, quad)
            if not part.screen:
                return _FormIntegral(math.nan, math.nan, part.screen, part.parity_forced)
            value += cf * cg * part.value
            error += abs(cf * cg) * part.error
            forced = forced and part.parity_forced
    if not lam_form.terms or not omega_form.terms:
        return _FormIntegral(0.0, 0.0, ScreenResult(True), True)
    return _FormIntegral(value, error, ScreenResult(True), forced)


def check_composite(f: SolutionDescriptor, g: SolutionDescriptor,
                    lam_form: DifferentialForm, omega_form: DifferentialForm,
                    params: Params, quad: QuadratureSpec | None = None,
                    tolerance: float = 1e-6, zero_tolerance: float = 1e-8,
                    abs_floor: float = 1e-12) -> list:
    """Composite-form identities, expanded into certified term-pair integrals.

    With distinct solutions this emits the form commutativity report plus
    the two even/odd zero integrals of Lambda on f; with f and g the same
    descriptor it emits the three-way parity expansion chain instead of the
    plain commutativity.  Singleton forms reproduce check_commutativity and
    check_orthogonality values exactly (same code path).
    """
    quad = quad or _IDENTITY_QUAD
    same = f == g
    lam_e, lam_o = parity_split(lam_form)
    om_e, om_o = parity_split(omega_form)
    reports = []

    def pair(form_a, desc_a, side_a, form_b, desc_b, side_b):
        return _form_pair_integral(form_a, desc_a, side_a,
                                   form_b, desc_b, side_b, params, quad).as_pair()

    if not same:
        lhs = pair(lam_form, f, "base", omega_form, g, "power")
        rhs = pair(lam_form, f, "power", omega_form, g, "base")
        reports.append(_equality_report(
            "composite-commutativity",
            "int Lam(f) Om(g^(p-1)) = int Lam(f^(p-1)) Om(g)",
            lhs, rhs, tolerance, abs_floor))
    else:
        A = pair(lam_form, f, "base", omega_form, f, "power")
        B = pair(lam_form, f, "power", omega_form, f, "base")
        C_ee = _form_pair_integral(lam_e, f, "base", om_e, f, "power", params, quad)
        C_oo = _form_pair_integral(lam_o, f, "base", om_o, f, "power", params, quad)
        D_ee = _form_pair_integral(lam_e, f, "power", om_e, f, "base", params, quad)
        D_oo = _form_pair_integral(lam_o, f, "power", om_o, f, "base", params, quad)

        def combine(x: _FormIntegral, y: _FormIntegral) -> _PairResult:
            if not x.screen:
                return x.as_pair()
            if not y.screen:
                return y.as_pair()
            return _PairResult(x.value + y.value, x.error + y.error,
                               ScreenResult(True), x.parity_forced and y.parity_forced)

        C = combine(C_ee, C_oo)
        D = combine(D_ee, D_oo)
        reports.append(_equality_report(
            "parity-chain-direct",
            "int Lam(f) Om(f^(p-1)) = int Lam(f^(p-1)) Om(f)",
            A, B, tolerance, abs_floor))
        reports.append(_equality_report(
            "parity-chain-even-odd",
            "int Lam(f) Om(f^(p-1)) = even-even + odd-odd expansion",
            A, C, tolerance, abs_floor))
        reports.append(_equality_report(
            "parity-chain-swapped",
            "even-even + odd-odd expansion equals its (f, f^(p-1)) swap",
            C, D, tolerance, abs_floor))

    zero_a = pair(lam_e, f, "base", lam_o, f, "power")
    zero_b = pair(lam_e, f, "power", lam_o, f, "base")
    reports.append(_zero_report(
        "composite-orthogonality",
        "int Lam_e(f) Lam_o(f^(p-1)) = 0",
        zero_a, None, zero_tolerance, abs_floor))
    reports.append(_zero_report(
        "composite-orthogonality",
        "int Lam_e(f^(p-1)) Lam_o(f) = 0",
        zero_b, None, zero_tolerance, abs_floor))
    return reports


def cutoff_pair_integral(f: SolutionDescriptor, alpha, g: SolutionDescriptor,
                         beta, params: Params, R: float,
                         quad: QuadratureSpec | None = None) -> float:
    """Force-integrate D_beta(g) D_alpha(f^(p-1)) over the radial annulus
    [1/R, R], bypassing the convergence screen.

    This is the screen-soundness diagnostic: instances the screen rejects
    must show non-stabilizing values as R grows.  (The annulus is radial;
    a symmetric cutoff on the line would let odd divergences cancel.)
    """
    quad = quad or QuadratureSpec(rel_tol=1e-9, abs_tol=1e-15)
    if R <= 1.0:
        raise ValueError("cutoff R must exceed 1")
    a, b = _order_of(alpha, params), _order_of(beta, params)
    n = params.n

    def integrand(x):
        x = np.asarray(x, dtype=float)
        out = g.deriv("base", x, b) * f.deriv("power", x, a)
        if n > 1:
            out = out * sphere_surface_area(n) * x ** (n - 1)
        return out

    value, _ = quadrature.integrate(integrand, 1.0 / R, R, quad)
    return value
