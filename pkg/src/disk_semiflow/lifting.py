"""Exponential lifting of an origin-attracted semigroup to the right half-plane.

With exp(-z~) running over the punctured disk, the conjugation
exp(-phi~_t(z~)) = phi_t(exp(-z~)) determines a unique semigroup on
Re z~ > 0 attracted to infinity.  Its generator is
G~(z~) = -G(exp(-z~))/exp(-z~) = p(exp(-z~)), so Re G~ >= 0 is inherited
from the positive-real-part factor, and its linearizer is
h~0 = -h~/lam where exp(-h~) = h(exp(-.)) and lam = G'(0).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

from ._integrator import integrate_field
from .errors import DomainError, MisuseError
from .generator import BerksonPortaData, lambda_at_origin
from .koenigs import KoenigsFunction, interior_koenigs_fn
from .semiflow import FlowConfig, SemigroupModel, flow, model_from_generator


def lifted_generator(bp: BerksonPortaData, z_tilde: complex) -> complex:
    """G~(z~) = -G(e^{-z~})/e^{-z~}; equals p(e^{-z~}), so Re >= 0."""
    if bp.tau != 0:
        raise MisuseError("lifting needs the attracting point at 0")
    if z_tilde.real <= 0:
        raise DomainError(f"Re z~ = {z_tilde.real} is not positive")
    return bp.p_value(cmath.exp(-z_tilde))


@dataclass(frozen=True)
class LiftedModel:
    base_bp: BerksonPortaData
    base_model: SemigroupModel = None  # type: ignore[assignment]
    base_koenigs: KoenigsFunction = None  # type: ignore[assignment]
    config: FlowConfig = field(default_factory=FlowConfig)

    def __post_init__(self):
        if self.base_bp.tau != 0:
            raise MisuseError("lifting needs the attracting point at 0")
        if self.base_model is None:
            object.__setattr__(
                self, "base_model", model_from_generator(self.base_bp, self.config)
            )
        if self.base_koenigs is None:
            object.__setattr__(self, "base_koenigs", interior_koenigs_fn(self.base_bp))

    @property
    def lam(self) -> complex:
        return lambda_at_origin(self.base_bp)

    def generator(self, z_tilde: complex) -> complex:
        return lifted_generator(self.base_bp, z_tilde)


def lift_flow(lm: LiftedModel, z_tilde: complex, t: float) -> complex:
    """phi~_t(z~) by integrating G~ with the half-plane guard."""
    if z_tilde.real <= 0:
        raise DomainError(f"Re z~ = {z_tilde.real} is not positive")
    if t < 0:
        raise DomainError("flow time must be >= 0")
    if t == 0.0:
        return z_tilde
    cfg = lm.config
    return integrate_field(
        lm.generator,
        z_tilde,
        t,
        rel_tol=cfg.rel_tol,
        abs_tol=cfg.abs_tol,
        max_step=cfg.max_step,
        guard=lambda w: w.real > 0.0,
    )


def lift_flow_by_projection(
    lm: LiftedModel, z_tilde: complex, t: float, steps: int = 64
) -> complex:
    """Independent route to phi~_t: continue -log(phi_s(e^{-z~})) in s.

    Starting from the exact value z~ at s = 0, the branch is tracked through
    principal-log increments over small time steps; agreement with the
    ODE route witnesses the uniqueness of the lifted semigroup.
    """
    if z_tilde.real <= 0:
        raise DomainError(f"Re z~ = {z_tilde.real} is not positive")
    w0 = cmath.exp(-z_tilde)
    val = z_tilde
    prev = w0
    for k in range(1, steps + 1):
        cur = flow(lm.base_model, w0, t * k / steps)
        val -= cmath.log(cur / prev)
        prev = cur
    return val


def lifted_koenigs(lm: LiftedModel, z_tilde: complex) -> complex:
    """h~0(z~) = -h~(z~)/lam with exp(-h~) = h(exp(-.)).

    The branch of h~ is fixed by the principal log at the anchor z~ = 1 and
    continued along the straight segment to z~, subdividing until every
    increment of h(exp(-.)) stays below pi/2 in argument, which keeps the
    continuation unambiguous.
    """
    if z_tilde.real <= 0:
        raise DomainError(f"Re z~ = {z_tilde.real} is not positive")
    h = lm.base_koenigs.evaluate
    anchor = 1.0 + 0.0j
    g_prev = h(cmath.exp(-anchor))
    if g_prev == 0:
        raise DomainError("base linearizer vanishes at the anchor")
    val = -cmath.log(g_prev)

    segment = z_tilde - anchor
    pos = anchor
    remaining = 1.0  # fraction of the segment still to cover
    frac = 1.0 / 8.0
    while remaining > 1e-15:
        frac = min(frac, remaining)
        nxt = pos + segment * frac
        g_next = h(cmath.exp(-nxt))
        ratio = g_next / g_prev
        if abs(cmath.phase(ratio)) > 0.5 * cmath.pi or ratio == 0:
            frac *= 0.5
            if frac < 1e-12:
                raise DomainError("continuation step underflow while lifting")
            continue
        val -= cmath.log(ratio)
        pos = nxt
        g_prev = g_next
        remaining -= frac
        frac *= 2.0
    return -val / lm.lam


def conjugation_residual(lm: LiftedModel, z_tilde: complex, t: float) -> float:
    """|exp(-phi~_t(z~)) - phi_t(exp(-z~))|, both sides computed independently."""
    lifted = lift_flow(lm, z_tilde, t)
    disk = flow(lm.base_model, cmath.exp(-z_tilde), t)
    return abs(cmath.exp(-lifted) - disk)


def lifted_abel_residual(lm: LiftedModel, z_tilde: complex, t: float) -> float:
    """|h~0(phi~_t(z~)) - h~0(z~) - t|."""
    return abs(lifted_koenigs(lm, lift_flow(lm, z_tilde, t)) - lifted_koenigs(lm, z_tilde) - t)
