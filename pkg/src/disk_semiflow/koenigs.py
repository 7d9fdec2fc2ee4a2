"""Koenigs linearizers computed by quadrature along radial segments.

Boundary attracting point: the linearizer satisfies h' = 1/G, so h is the
segment integral of 1/G normalized to h(0) = 0 and turns the flow into the
unit-speed translation h(phi_t(z)) = h(z) + t.  Interior attracting point at
the origin: differentiating h(phi_t) = e^{lam t} h and eliminating G = -z p
gives (log(h(z)/z))' = (p(0)/p(z) - 1)/z, which integrates to
h(z) = z * exp(integral), normalized to h(0) = 0, h'(0) = 1, with
h(phi_t(z)) = e^{lam t} h(z) and lam = -p(0).

Straight segments from 0 are safe: the disk is convex, positive-real-part
factors cannot vanish inside, and in the boundary case G has no interior
zero at all.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable

from ._quadrature import integrate_segment, integrate_segment_fixed
from .errors import DomainError, InconsistencyError, MisuseError, SingularPointError
from .generator import BerksonPortaData, GeneratorFn, lambda_at_origin
from .semiflow import SemigroupModel, flow

QUAD_ABS_TOL = 1e-12


def koenigs_boundary(
    G: GeneratorFn | Callable[[complex], complex],
    z: complex,
    abs_tol: float = QUAD_ABS_TOL,
) -> complex:
    """Integral of 1/G from 0 to z; the boundary-case linearizer with h(0)=0."""
    if abs(z) >= 1.0:
        raise DomainError(f"|z| = {abs(z)} is not inside the unit disk")
    if z == 0:
        return 0.0j

    def integrand(zeta: complex) -> complex:
        g = G(zeta)
        if abs(g) < 1e-14:
            raise SingularPointError(
                f"G nearly vanishes at {zeta} on the integration path"
            )
        return 1.0 / g

    return integrate_segment(integrand, 0.0j, z, abs_tol=abs_tol)


def koenigs_boundary_fixed_panels(
    G: GeneratorFn | Callable[[complex], complex], z: complex, panels: int
) -> complex:
    """Non-adaptive variant for panel-halving stability checks."""
    if abs(z) >= 1.0:
        raise DomainError(f"|z| = {abs(z)} is not inside the unit disk")
    if z == 0:
        return 0.0j
    return integrate_segment_fixed(lambda zeta: 1.0 / G(zeta), 0.0j, z, panels)


def koenigs_interior(
    bp: BerksonPortaData, z: complex, abs_tol: float = QUAD_ABS_TOL
) -> complex:
    """Interior-case linearizer for an origin attracting point.

    The integrand (p(0)/p(zeta) - 1)/zeta has a removable singularity at 0
    with value -p'(0)/p(0); parametrizing the segment as zeta = z*u turns it
    into (p(0)/p(zu) - 1)/u on (0, 1], which the open quadrature nodes never
    evaluate at u = 0.
    """
    if bp.tau != 0:
        raise MisuseError("interior linearizer needs the attracting point at 0")
    if abs(z) >= 1.0:
        raise DomainError(f"|z| = {abs(z)} is not inside the unit disk")
    if z == 0:
        return 0.0j
    p0 = bp.p_value(0.0j)

    def integrand(u: complex) -> complex:
        pv = bp.p_value(z * u)
        if abs(pv) < 1e-14:
            raise SingularPointError(f"p nearly vanishes at {z * u} on the path")
        return (p0 / pv - 1.0) / u

    return z * cmath.exp(integrate_segment(integrand, 0.0j, 1.0 + 0.0j, abs_tol=abs_tol))


@dataclass(frozen=True)
class KoenigsFunction:
    """A linearizer with its normalization case and, when interior, its rate."""

    case: str  # "interior" | "boundary"
    evaluate: Callable[[complex], complex]
    lam: complex | None = None

    def __post_init__(self):
        if self.case not in ("interior", "boundary"):
            raise ValueError(f"unknown case {self.case!r}")
        if self.case == "interior" and self.lam is None:
            raise ValueError("interior case needs the spectral value")


def boundary_koenigs_fn(
    G: GeneratorFn | Callable[[complex], complex], abs_tol: float = QUAD_ABS_TOL
) -> KoenigsFunction:
    return KoenigsFunction(
        case="boundary", evaluate=lambda z: koenigs_boundary(G, z, abs_tol)
    )


def interior_koenigs_fn(
    bp: BerksonPortaData, abs_tol: float = QUAD_ABS_TOL
) -> KoenigsFunction:
    lam = lambda_at_origin(bp)
    return KoenigsFunction(
        case="interior",
        evaluate=lambda z: koenigs_interior(bp, z, abs_tol),
        lam=lam,
    )


def abel_residual(
    h: KoenigsFunction, model: SemigroupModel, z: complex, t: float
) -> float:
    """|h(phi_t(z)) - h(z) - t| for the boundary normalization."""
    if h.case != "boundary":
        raise MisuseError("translation residual applies to the boundary case")
    return abs(h.evaluate(flow(model, z, t)) - h.evaluate(z) - t)


def schroeder_residual(
    h: KoenigsFunction, model: SemigroupModel, z: complex, t: float
) -> float:
    """|h(phi_t(z)) - e^{lam t} h(z)| for the interior normalization."""
    if h.case != "interior":
        raise MisuseError("multiplier residual applies to the interior case")
    return abs(h.evaluate(flow(model, z, t)) - cmath.exp(h.lam * t) * h.evaluate(z))


# --- half-plane conjugation -------------------------------------------------

@dataclass(frozen=True)
class HalfplaneConjugate:
    """H = h o F^{-1} where F(z) = (1+z)/(1-z) - (1+sigma)/(1-sigma) maps the
    disk onto the right half-plane sending the attracting point 1 to infinity
    and sigma to the origin."""

    sigma: complex
    offset: complex
    h: KoenigsFunction

    def pullback(self, w: complex) -> complex:
        """F^{-1}(w): half-plane point back to the disk."""
        if w.real <= 0:
            raise DomainError(f"Re w = {w.real} is not positive")
        v = w + self.offset
        return (v - 1.0) / (v + 1.0)

    def evaluate(self, w: complex) -> complex:
        return self.h.evaluate(self.pullback(w))

    def derivative(self, w: complex, step: float = 2e-4) -> complex:
        # fourth-order stencil keeps the truncation + roundoff floor near
        # 1e-12, well under the positivity validation tolerance
        s = step * max(1.0, abs(w))
        if w.real - 2.0 * s <= 0:
            s = 0.25 * w.real
        f = self.evaluate
        return (
            -f(w + 2 * s) + 8.0 * f(w + s) - 8.0 * f(w - s) + f(w - 2 * s)
        ) / (12.0 * s)


_DEFAULT_HP_GRID = tuple(
    r * cmath.exp(1j * th)
    for r in (0.2, 0.5, 1.0, 2.0, 5.0)
    for th in (-1.2, -0.6, 0.0, 0.6, 1.2)
)


def halfplane_conjugate(
    h: KoenigsFunction,
    sigma: complex,
    validate: bool = True,
    grid=None,
    tolerance: float = 1e-10,
) -> HalfplaneConjugate:
    """Conjugate a boundary-case linearizer to the right half-plane at sigma.

    The conjugate has Re H' >= 0; a validation grid enforces it (equality is
    allowed: automorphism models have Re H' identically zero).
    """
    if h.case != "boundary":
        raise MisuseError("half-plane conjugation applies to the boundary case")
    if abs(abs(sigma) - 1.0) > 1e-12:
        raise DomainError("sigma must be unit-modulus")
    if abs(sigma - 1.0) < 1e-12:
        raise MisuseError("sigma must differ from the attracting point 1")
    offset = (1.0 + sigma) / (1.0 - sigma)
    conj = HalfplaneConjugate(sigma=sigma, offset=offset, h=h)
    if validate:
        worst = 0.0
        for w in grid if grid is not None else _DEFAULT_HP_GRID:
            re = conj.derivative(complex(w)).real
            worst = min(worst, re)
        if worst < -tolerance:
            raise InconsistencyError(
                f"Re H' = {worst:.3e} < -{tolerance} on the validation grid; "
                "the data is not a boundary-case linearizer"
            )
    return conj
