"""Deterministic adaptive quadrature for weakly singular 1-D integrals.

Handles integrands that are analytic between declared split points, with
algebraic or logarithmic singularities of exponent > -1 at interval
endpoints and split points, and power-law tails on [a, inf).  Infinite
tails are folded to a finite cell by the substitution t = 1/u, which turns
a power tail into an algebraic endpoint singularity at u = 0.

Integrands must be vectorized: f(x) for a float ndarray x returns an
ndarray of the same shape.  Everything here is pure and deterministic;
panel values are reduced left to right with math.fsum, so the result does
not depend on refinement order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "QuadratureSpec",
    "SingularityBudget",
    "ScreenResult",
    "QuadResult",
    "NonConvergent",
    "DivergentTail",
    "integrate",
    "convergence_screen",
]

# Exponents this close to -1 are classified as the logarithmic borderline.
_BORDERLINE_EPS = 1e-9


class NonConvergent(Exception):
    """Subdivision budget exhausted without meeting the error tolerance."""

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class DivergentTail(Exception):
    """The integrand decays too slowly at infinity (exponent >= -1)."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and singularity declarations for one integral.

    split_points are interior locations where the integrand is singular or
    non-smooth; they become cell boundaries and are never evaluated.
    tail_exponent_hint, when given for an infinite upper limit, asserts the
    asymptotic power-law decay f(t) ~ t**hint and must be < -1; without it
    an automatic geometric probe estimates the decay.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000
    split_points: tuple = ()
    tail_exponent_hint: float | None = None

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        pts = tuple(float(s) for s in self.split_points)
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("split_points must be strictly increasing")
        object.__setattr__(self, "split_points", pts)

    def with_splits(self, points: Sequence[float]) -> "QuadratureSpec":
        """Copy of this spec with the given split points (sorted, deduplicated)."""
        merged = sorted(set(self.split_points) | set(float(p) for p in points))
        return QuadratureSpec(self.rel_tol, self.abs_tol, self.max_subdivisions,
                              tuple(merged), self.tail_exponent_hint)

    def with_tail(self, exponent: float) -> "QuadratureSpec":
        return QuadratureSpec(self.rel_tol, self.abs_tol, self.max_subdivisions,
                              self.split_points, float(exponent))


class QuadResult(NamedTuple):
    value: float
    error: float


@dataclass(frozen=True)
class SingularityBudget:
    """Local power exponents of an integrand at its singular locations.

    Each entry is (location, exponent) with location a finite float or
    math.inf, describing integrand ~ |t - t0|**e near t0 (respectively
    ~ t**e as t -> inf).  The integral converges absolutely iff every
    finite exponent is > -1 and the infinity exponent is < -1; an exponent
    of exactly -1 anywhere is the divergent logarithmic borderline.
    """

    local_exponents: tuple = ()

    def __post_init__(self):
        entries = tuple((float(loc), float(e)) for loc, e in self.local_exponents)
        object.__setattr__(self, "local_exponents", entries)


@dataclass(frozen=True)
class ScreenResult:
    convergent: bool
    failing_location: float | None = None

    def __bool__(self):
        return self.convergent


def convergence_screen(budget: SingularityBudget) -> ScreenResult:
    """Decide absolute convergence from a singularity budget.

    Returns Convergent iff all finite-location exponents are > -1 and the
    infinity exponent is < -1; the first failing location (in listed
    order) is reported otherwise.  Exponents within 1e-9 of -1 are treated
    as the borderline -1 and classified divergent.
    """
    for loc, e in budget.local_exponents:
        if math.isinf(loc):
            if e >= -1.0 - _BORDERLINE_EPS:
                return ScreenResult(False, math.inf)
        else:
            if e <= -1.0 + _BORDERLINE_EPS:
                return ScreenResult(False, loc)
    return ScreenResult(True, None)


# ---------------------------------------------------------------------------
# panel machinery

_GRADING_RATIO = 0.25          # geometric grading toward singular endpoints
_RULE_LO, _RULE_HI = 7, 15     # Gauss-Legendre pair for value/error estimation


@lru_cache(maxsize=None)
def _gl_rule(order: int):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


@dataclass
class _Panel:
    a: float
    b: float
    left_singular: bool
    right_singular: bool
    value: float = 0.0
    error: float = math.inf

    def evaluate(self, f) -> None:
        mid = 0.5 * (self.a + self.b)
        half = 0.5 * (self.b - self.a)
        vals = {}
        for order in (_RULE_HI, _RULE_LO):
            nodes, weights = _gl_rule(order)
            with np.errstate(all="ignore"):
                fx = np.asarray(f(mid + half * nodes), dtype=float)
            vals[order] = half * float(np.dot(weights, fx))
        self.value = vals[_RULE_HI]
        if math.isfinite(self.value) and math.isfinite(vals[_RULE_LO]):
            self.error = abs(vals[_RULE_HI] - vals[_RULE_LO])
        else:
            self.value = 0.0
            self.error = math.inf

    def split_point(self) -> float:
        w = self.b - self.a
        if self.left_singular and not self.right_singular:
            return self.a + _GRADING_RATIO * w
        if self.right_singular and not self.left_singular:
            return self.b - _GRADING_RATIO * w
        return self.a + 0.5 * w


def _refine(panels: list, f) -> bool:
    """Split the worst panel in place; False when nothing can be refined.

    The width floor scales with the panel's position only, so panels graded
    toward an endpoint at exactly 0 can shrink indefinitely; resolution near
    a nonzero location is limited by float spacing there.
    """
    worst = max(range(len(panels)), key=lambda i: (panels[i].error, -panels[i].a))
    p = panels[worst]
    width_floor = 8.0 * np.finfo(float).eps * max(abs(p.a), abs(p.b))
    if p.b - p.a <= width_floor:
        return False
    cut = p.split_point()
    left = _Panel(p.a, cut, p.left_singular, False)
    right = _Panel(cut, p.b, False, p.right_singular)
    left.evaluate(f)
    right.evaluate(f)
    panels[worst] = left
    panels.insert(worst + 1, right)
    return True


def _geometric_tail_mass(f, x0: float, side: int, D: float):
    """Resolve [x0, x0 + side*D] by a fresh pure-dyadic ladder plus the
    Richardson-extrapolated geometric remainder.

    Ladder panel k covers distances [D/4^(k+1), D/4^k]; below sqrt(eps)|x0|
    the integrand's own argument cancellation corrupts values, so the ladder
    stops there and the remaining inner mass is the tail of the observed
    geometric value sequence.  The ratio is Richardson-corrected in the
    dyadic distance (the local smooth factor drifts the raw ratios linearly
    in distance, which quadruples per outward step), leaving a quadratic
    residue.  Returns (mass, err_estimate) or None when the decay is not
    geometric (not an algebraic endpoint singularity after all).
    """
    eps = float(np.finfo(float).eps)
    d_floor = max(math.sqrt(eps) * abs(x0), 1e-280)
    depth = max(6, min(60, int(math.log(D / d_floor, 4.0)))) \
        if D > d_floor else 6
    edges = D * 4.0 ** -np.arange(depth + 1, dtype=float)  # D, D/4, ...
    # a sharper embedded pair than the main loop's: the ladder panel values
    # must carry error estimates well below the global tolerance target
    nodes_hi, w_hi = _gl_rule(31)
    nodes_lo, w_lo = _gl_rule(15)
    vals = np.empty(depth)
    errs = np.empty(depth)
    for k in range(depth):
        lo, hi = edges[k + 1], edges[k]
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        with np.errstate(all="ignore"):
            fx_hi = np.asarray(f(x0 + side * (mid + half * nodes_hi)), dtype=float)
            fx_lo = np.asarray(f(x0 + side * (mid + half * nodes_lo)), dtype=float)
        vals[k] = half * float(np.dot(w_hi, fx_hi))
        errs[k] = abs(vals[k] - half * float(np.dot(w_lo, fx_lo)))
    if not np.all(np.isfinite(vals)):
        return None
    total = math.fsum(vals)
    gl_err = math.fsum(errs)

    # ratio of consecutive panel masses, sampled at ~1e-5 D where drift is
    # small but far above the noise floor
    k_ref = min(max(int(round(math.log(1e5, 4.0))), 2), depth - 4)
    v = vals[k_ref:k_ref + 4]
    if np.any(v == 0.0) or len({math.copysign(1.0, x) for x in v}) != 1:
        return None
    ratios = [v[j + 1] / v[j] for j in range(3)]  # inner over outer, < 1
    if not all(1e-8 < r < 0.97 for r in ratios):
        return None
    if max(ratios) - min(ratios) > 0.02 * ratios[0]:
        return None
    # Richardson toward distance zero (drift shrinks 4x per inward step)
    rho = ratios[2] - (ratios[1] - ratios[2]) / 3.0
    if not 1e-8 < rho < 0.97:
        return None
    drift = max(abs(ratios[0] - ratios[1]), abs(ratios[1] - ratios[2]))
    tail = vals[-1] * rho / (1.0 - rho)
    noise_rel = eps * abs(x0) / edges[-1] if x0 != 0.0 else eps
    # quadratic Richardson residue is amplified through the geometric sum;
    # the value-noise floor of the innermost panel enters only linearly
    tail_err = abs(tail) * (5.0 * drift * drift / (3.0 * rho * rho * (1.0 - rho))
                            + 4.0 * noise_rel + 1e-13)
    return total + tail, gl_err + tail_err


def _ladder_extrapolate(panels: list, boundaries: Sequence[float], f) -> bool:
    """Replace unresolvable singular zones at cell boundaries by fresh
    geometric-ladder resolution with extrapolation (see _geometric_tail_mass).

    Nonzero singular locations have a hard float resolution wall: integrand
    arguments collapse onto the location at distances below eps * |x0|, so
    no node-based rule can finish the job; the algebraic-singularity
    contract justifies summing the remaining mass as a geometric tail.
    Returns True if anything was replaced.
    """
    changed = False
    cell_edges = sorted(boundaries)
    for x0 in boundaries:
        for inward in (1, -1):  # panels to the right of x0, then to the left
            if inward == 1:
                idx = [i for i, p in enumerate(panels) if p.a == x0]
                above = [e for e in cell_edges if e > x0]
                cell_limit = above[0] - x0 if above else math.inf
            else:
                idx = [i for i, p in enumerate(panels) if p.b == x0]
                below = [e for e in cell_edges if e < x0]
                cell_limit = x0 - below[-1] if below else math.inf
            if not idx:
                continue
            k = idx[0]
            # the replacement zone must end exactly at an existing panel edge;
            # walk outward until the zone is deep enough to carry a ladder
            target = max(1e-3 * cell_limit, 3e-5 * abs(x0))
            zone = []
            depth_reached = 0.0
            j = k
            while 0 <= j < len(panels):
                p = panels[j]
                edge = (p.b if inward == 1 else p.a)
                dist = abs(edge - x0)
                if dist > 0.6 * cell_limit:
                    break
                zone.append(p)
                depth_reached = dist
                if dist >= target:
                    break
                j += inward
            if not zone or depth_reached < target:
                continue
            inner_err = math.fsum(p.error for p in zone)
            inner_sum = math.fsum(p.value for p in zone)
            result = _geometric_tail_mass(f, x0, inward, depth_reached)
            if result is None:
                continue
            mass, err = result
            # sanity: the replacement corrects the resolved mass, it must not
            # contradict it wildly
            if math.isfinite(inner_sum) and abs(mass - inner_sum) > \
                    0.5 * abs(inner_sum) + inner_err + err:
                continue
            if not math.isfinite(inner_err) or err < inner_err:
                for p in zone[1:]:
                    p.value = 0.0
                    p.error = 0.0
                zone[0].value = mass
                zone[0].error = err
                changed = True
    return changed


def _integrate_cells(f, boundaries: Sequence[float], spec: QuadratureSpec) -> QuadResult:
    """Adaptive integration over cells whose boundaries may all be singular."""
    panels = []
    for a, b in zip(boundaries, boundaries[1:]):
        p = _Panel(a, b, True, True)
        p.evaluate(f)
        panels.append(p)
    salvage_attempts = 0
    while True:
        total = math.fsum(p.value for p in panels)
        err = math.fsum(p.error for p in panels)
        target = max(spec.rel_tol * abs(total), spec.abs_tol)
        if err <= target and math.isfinite(total):
            return QuadResult(total, err)
        exhausted = len(panels) >= spec.max_subdivisions
        if not exhausted:
            exhausted = not _refine(panels, f)
        if exhausted:
            if salvage_attempts < 4 and _ladder_extrapolate(panels, boundaries, f):
                salvage_attempts += 1
                continue
            raise NonConvergent(
                f"estimated error {err:.3e} above target {target:.3e} with "
                f"{len(panels)} panels", value=total, error=err)


def _probe_tail_exponent(f, T: float) -> float:
    """Estimate the power-law decay exponent of f by geometric sampling."""
    ts = T * 4.0 ** np.arange(8)
    with np.errstate(all="ignore"):
        vals = np.abs(np.asarray(f(ts), dtype=float))
    good = np.isfinite(vals) & (vals > 0)
    if not good.any() or vals[good][-1] == 0.0:
        return -math.inf  # identically tiny tail: treat as fast decay
    est = []
    for i in range(len(ts) - 1):
        if good[i] and good[i + 1]:
            est.append(math.log(vals[i + 1] / vals[i]) / math.log(4.0))
    if not est:
        return -math.inf
    return max(est[-3:])  # conservative: slowest recent decay


def integrate(f: Callable, a: float, b: float,
              spec: QuadratureSpec | None = None) -> QuadResult:
    """Integrate f over (a, b), b possibly infinite, to the spec tolerances.

    Returns (value, err_estimate) with err_estimate the summed panel error
    bounds (a deliberate overestimate).  Raises NonConvergent when the
    subdivision budget runs out and DivergentTail when b is infinite and
    the declared or probed decay exponent is >= -1.
    """
    spec = spec or QuadratureSpec()
    a = float(a)
    if not math.isfinite(a):
        raise ValueError("lower limit must be finite")
    infinite = math.isinf(b)
    if not infinite:
        b = float(b)
        if b <= a:
            raise ValueError("need a < b")
    interior = [s for s in spec.split_points if s > a and (infinite or s < b)]

    if not infinite:
        cells = [a] + interior + [b]
        return _integrate_cells(f, cells, spec)

    # infinite upper limit: finite part up to T, then fold [T, inf) to (0, 1/T]
    s_max = max(interior) if interior else 0.0
    T = max(1.0, 2.0 * s_max, a)
    if spec.tail_exponent_hint is not None:
        tail_exp = float(spec.tail_exponent_hint)
    else:
        tail_exp = _probe_tail_exponent(f, T)
    if tail_exp >= -1.0 - _BORDERLINE_EPS:
        raise DivergentTail(
            f"tail decay exponent {tail_exp:.6g} is >= -1; integral diverges at infinity")

    def folded(u):
        u = np.asarray(u, dtype=float)
        return np.asarray(f(1.0 / u), dtype=float) / (u * u)

    tail = _integrate_cells(folded, [0.0, 1.0 / T], spec)
    if T == a:
        return tail
    cells = [a] + interior + [T]
    head = _integrate_cells(f, cells, spec)
    return QuadResult(head.value + tail.value, head.error + tail.error)
