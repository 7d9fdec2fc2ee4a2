"""Flow evaluation for one-parameter semigroups on the unit disk.

A model either carries a closed-form flow (gallery entries) or is driven by
its generator through the guarded adaptive integrator.  Both satisfy the
same contracts: states stay inside the disk, the composition law holds up to
integration tolerance, and trajectories settle at the attracting point.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from ._integrator import integrate_field
from .errors import DomainError, InconsistencyError
from .generator import BerksonPortaData, GeneratorFn, generator_fn


@dataclass(frozen=True)
class FlowConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = 1.0
    boundary_margin: float = 0.0
    max_time: float = 1e3

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0 or self.max_step <= 0:
            raise ValueError("tolerances and max_step must be positive")
        if not (0.0 <= self.boundary_margin <= 1e-6):
            raise ValueError("boundary_margin must lie in [0, 1e-6]")


@dataclass(frozen=True)
class SemigroupModel:
    """A flow evaluator with its attracting point.

    Exactly one evaluation route is required: ``closed_flow`` (a closed-form
    (z, t) -> disk point) or ``generator`` (integrated on demand).  Gallery
    models carry both so the two routes can be cross-validated.
    ``boundary_flow`` optionally extends the flow to unit-modulus arguments
    by its angular-limit values.
    """

    dw: complex
    generator: GeneratorFn | None = None
    closed_flow: Callable[[complex, float], complex] | None = None
    boundary_flow: Callable[[complex, float], complex] | None = None
    config: FlowConfig = field(default_factory=FlowConfig)
    gallery_id: str | None = None
    slow_convergence: bool = False  # 1/t-type approach to the attracting point

    def __post_init__(self):
        if self.generator is None and self.closed_flow is None:
            raise ValueError("model needs a closed-form flow or a generator")
        if abs(self.dw) > 1.0 + 1e-12:
            raise ValueError("attracting point must lie in the closed disk")

    def with_config(self, config: FlowConfig) -> "SemigroupModel":
        return replace(self, config=config)


def model_from_generator(
    source: BerksonPortaData | GeneratorFn, config: FlowConfig | None = None
) -> SemigroupModel:
    gen = source if isinstance(source, GeneratorFn) else generator_fn(source)
    if gen.tau is None:
        raise ValueError("generator needs a known attracting point")
    return SemigroupModel(dw=gen.tau, generator=gen, config=config or FlowConfig())


def _check_args(model: SemigroupModel, z: complex, t: float):
    if abs(z) >= 1.0:
        raise DomainError(f"|z| = {abs(z)} is not inside the unit disk")
    if t < 0:
        raise DomainError("flow time must be >= 0")
    if t > model.config.max_time:
        raise DomainError(f"t = {t} exceeds max_time = {model.config.max_time}")


def flow(model: SemigroupModel, z: complex, t: float, force_ode: bool = False) -> complex:
    """phi_t(z); closed form when available, guarded integration otherwise."""
    _check_args(model, z, t)
    if t == 0.0:
        return z
    if model.closed_flow is not None and not force_ode:
        return model.closed_flow(z, t)
    cfg = model.config
    limit = 1.0 - cfg.boundary_margin
    return integrate_field(
        model.generator,
        z,
        t,
        rel_tol=cfg.rel_tol,
        abs_tol=cfg.abs_tol,
        max_step=cfg.max_step,
        guard=lambda w: abs(w) < limit,
    )


def trajectory(
    model: SemigroupModel, z: complex, t_grid: Sequence[float], force_ode: bool = False
) -> list[complex]:
    """Flow values on a sorted time grid, sharing integrator state."""
    ts = list(t_grid)
    if any(b < a for a, b in zip(ts, ts[1:])):
        raise DomainError("t_grid must be sorted increasingly")
    if not ts:
        return []
    _check_args(model, z, ts[-1])
    if model.closed_flow is not None and not force_ode:
        return [flow(model, z, t) for t in ts]
    cfg = model.config
    limit = 1.0 - cfg.boundary_margin
    return integrate_field(
        model.generator,
        z,
        ts[-1],
        rel_tol=cfg.rel_tol,
        abs_tol=cfg.abs_tol,
        max_step=cfg.max_step,
        guard=lambda w: abs(w) < limit,
        checkpoints=ts,
    )


def semigroup_residual(
    model: SemigroupModel, z: complex, s: float, t: float, force_ode: bool = False
) -> float:
    """|phi_{s+t}(z) - phi_t(phi_s(z))|."""
    both = flow(model, z, s + t, force_ode)
    steps = flow(model, flow(model, z, s, force_ode), t, force_ode)
    return abs(both - steps)


def generator_residual(
    model: SemigroupModel, z: complex, delta: float, force_ode: bool = False
) -> float:
    """First-order consistency |(phi_delta(z) - z)/delta - G(z)|; O(delta)."""
    if delta <= 0:
        raise DomainError("delta must be positive")
    if model.generator is None:
        raise DomainError("model has no generator to compare against")
    return abs((flow(model, z, delta, force_ode) - z) / delta - model.generator(z))


def dw_point(model: SemigroupModel, horizon: float | None = None) -> complex:
    """The attracting point, cross-checked against the long-time flow of 0.

    Models with 1/t-type convergence get the loose 0.05 budget; everything
    else must land within 1e-6.
    """
    if model.slow_convergence:
        tol, default_T = 5e-2, 100.0
    else:
        tol, default_T = 1e-6, 40.0
    T = min(horizon if horizon is not None else default_T, model.config.max_time)
    reached = flow(model, 0.0j, T)
    dist = abs(reached - model.dw)
    if dist > tol:
        raise InconsistencyError(
            f"flow(0, {T}) sits {dist:.3e} from the declared attracting point"
        )
    return model.dw
