"""Infinitesimal generators in Berkson-Porta form G(z) = (tau - z)(1 - conj(tau) z) p(z).

A generator is specified by the attracting point tau (|tau| <= 1) together
with a function p of nonnegative real part.  p can be Riesz-Herglotz data
(positivity built in) or one of a small registry of closed forms used by the
model gallery and by JSON specs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, MisuseError, SingularPointError
from .herglotz import (
    RieszHerglotzData,
    eval_p_disk,
    p_disk_derivative,
    riesz_herglotz_from_json,
    riesz_herglotz_to_json,
)

_TAU_TOL = 1e-12
POSITIVITY_TOL = 1e-12


@dataclass(frozen=True)
class ClosedFormP:
    """A registered closed-form p with its derivative (for origin data)."""

    name: str
    fn: Callable[[complex], complex]
    dfn: Callable[[complex], complex]
    params: tuple = ()

    def __call__(self, z: complex) -> complex:
        return self.fn(z)


def const_p(value: complex) -> ClosedFormP:
    return ClosedFormP(
        name="const",
        fn=lambda z, v=complex(value): v,
        dfn=lambda z: 0.0j,
        params=(complex(value),),
    )


def _cayley_strip_p(z: complex) -> complex:
    return 0.5 * math.pi * (1.0 + z) / (1.0 - z)


def _cayley_strip_dp(z: complex) -> complex:
    return math.pi / (1.0 - z) ** 2


def _one_minus_z_p() -> ClosedFormP:
    return ClosedFormP("one-minus-z", lambda z: 1.0 - z, lambda z: -1.0 + 0.0j)


_BUILTIN_FACTORIES: dict[str, Callable[[dict], ClosedFormP]] = {
    "const": lambda doc: const_p(complex(*doc.get("value", [1.0, 0.0]))),
    "one-minus-z": lambda doc: _one_minus_z_p(),
    "cayley-strip": lambda doc: ClosedFormP(
        "cayley-strip", _cayley_strip_p, _cayley_strip_dp
    ),
}


def register_builtin_p(name: str, factory: Callable[[dict], ClosedFormP]):
    """Extend the registry (the gallery adds its slit-channel p here)."""
    _BUILTIN_FACTORIES[name] = factory


def builtin_p(name: str, doc: dict | None = None) -> ClosedFormP:
    if name not in _BUILTIN_FACTORIES:
        raise KeyError(f"unknown builtin p {name!r}")
    return _BUILTIN_FACTORIES[name](doc or {})


@dataclass(frozen=True)
class BerksonPortaData:
    tau: complex
    p: RieszHerglotzData | ClosedFormP

    def __post_init__(self):
        if abs(self.tau) > 1.0 + _TAU_TOL:
            raise ValueError(f"|tau| = {abs(self.tau)} exceeds 1")

    def p_value(self, z: complex) -> complex:
        if isinstance(self.p, RieszHerglotzData):
            return eval_p_disk(self.p, z)
        return self.p(z)

    def p_derivative(self, z: complex) -> complex:
        if isinstance(self.p, RieszHerglotzData):
            return p_disk_derivative(self.p, z)
        return self.p.dfn(z)


def eval_G(bp: BerksonPortaData, z: complex) -> complex:
    if abs(z) >= 1.0:
        raise DomainError(f"|z| = {abs(z)} is not inside the unit disk")
    return (bp.tau - z) * (1.0 - bp.tau.conjugate() * z) * bp.p_value(z)


@dataclass(frozen=True)
class GeneratorFn:
    """Evaluation contract for a generator plus its derivative at the origin."""

    fn: Callable[[complex], complex]
    origin_derivative: complex
    tau: complex | None = None
    source: BerksonPortaData | None = None

    def __call__(self, z: complex) -> complex:
        return self.fn(z)


def generator_fn(bp: BerksonPortaData) -> GeneratorFn:
    """Wrap Berkson-Porta data as a GeneratorFn; rejects the trivial field."""
    p0 = bp.p_value(0.0j)
    dp0 = bp.p_derivative(0.0j)
    if _is_trivial(bp):
        raise ValueError("G vanishes identically; the trivial semigroup is excluded")
    tau = bp.tau
    d0 = -(1.0 + abs(tau) ** 2) * p0 + tau * dp0
    return GeneratorFn(
        fn=lambda z: eval_G(bp, z), origin_derivative=d0, tau=tau, source=bp
    )


def _is_trivial(bp: BerksonPortaData) -> bool:
    if isinstance(bp.p, RieszHerglotzData):
        return bp.p.c == 0.0 and all(m == 0.0 for _, m in bp.p.atoms)
    # closed form: sample a few points
    pts = (0.0j, 0.3 + 0.1j, -0.2 + 0.4j)
    return all(abs(bp.p_value(z)) < 1e-15 for z in pts)


def lambda_at_origin(bp: BerksonPortaData) -> complex:
    """Spectral value at an origin fixed point: G'(0) = -p(0)."""
    if bp.tau != 0:
        raise MisuseError("origin spectral value needs tau = 0")
    return -bp.p_value(0.0j)


def default_validation_grid(n_angles: int = 1000) -> np.ndarray:
    """10^4 points on concentric circles of radii 0.1..0.9 and 0.99."""
    radii = np.array([0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99])
    angles = np.linspace(0.0, 2.0 * math.pi, n_angles, endpoint=False)
    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()


@dataclass(frozen=True)
class PositivityReport:
    min_real: float
    argmin: complex
    tolerance: float
    valid: bool


def validate_positivity(
    bp: BerksonPortaData, grid=None, tolerance: float = POSITIVITY_TOL
) -> PositivityReport:
    if grid is None:
        grid = default_validation_grid()
    worst = math.inf
    argmin = 0.0j
    for z in grid:
        re = bp.p_value(complex(z)).real
        if re < worst:
            worst, argmin = re, complex(z)
    return PositivityReport(
        min_real=worst, argmin=argmin, tolerance=tolerance, valid=worst >= -tolerance
    )


@dataclass(frozen=True)
class DecomposeResult:
    p_samples: tuple[complex, ...]
    min_real: float
    valid: bool


def decompose(
    G: Callable[[complex], complex],
    tau: complex,
    grid,
    tolerance: float = POSITIVITY_TOL,
) -> DecomposeResult:
    """Divide out the Denjoy-Wolff factor and report positivity of the quotient.

    valid=False is the not-a-generator verdict for the pair (G, tau).
    """
    samples = []
    worst = math.inf
    for z in grid:
        z = complex(z)
        denom = (tau - z) * (1.0 - tau.conjugate() * z)
        if abs(denom) < 1e-14:
            raise SingularPointError(f"grid point {z} hits a zero of the DW factor")
        val = G(z) / denom
        samples.append(val)
        worst = min(worst, val.real)
    return DecomposeResult(
        p_samples=tuple(samples), min_real=worst, valid=worst >= -tolerance
    )


def conjugated_to_origin(bp: BerksonPortaData) -> BerksonPortaData:
    """Move an interior attracting point to the origin.

    Conjugating the semigroup by the involution M(z) = (tau - z)/(1 - conj(tau) z)
    turns the generator data (tau, p) into (0, (1 - |tau|^2) * p(M(.))).
    """
    tau = bp.tau
    if abs(tau) >= 1.0:
        raise MisuseError("only interior attracting points can be moved to 0")
    if tau == 0:
        return bp
    scale = 1.0 - abs(tau) ** 2

    def mob(w: complex) -> complex:
        return (tau - w) / (1.0 - tau.conjugate() * w)

    def mob_d(w: complex) -> complex:
        return (abs(tau) ** 2 - 1.0) / (1.0 - tau.conjugate() * w) ** 2

    p = ClosedFormP(
        name="conjugated",
        fn=lambda w: scale * bp.p_value(mob(w)),
        dfn=lambda w: scale * bp.p_derivative(mob(w)) * mob_d(w),
    )
    return BerksonPortaData(tau=0.0j, p=p)


# --- JSON encodings -------------------------------------------------------

def berkson_porta_to_json(bp: BerksonPortaData) -> dict:
    if isinstance(bp.p, RieszHerglotzData):
        p_doc: dict = riesz_herglotz_to_json(bp.p)
    else:
        p_doc = {"builtin": bp.p.name}
        if bp.p.name == "const":
            v = bp.p.params[0]
            p_doc["value"] = [v.real, v.imag]
    return {"tau": [bp.tau.real, bp.tau.imag], "p": p_doc}


def berkson_porta_from_json(doc: dict) -> BerksonPortaData:
    tau = complex(*doc["tau"])
    p_doc = doc["p"]
    if "builtin" in p_doc:
        p = builtin_p(p_doc["builtin"], p_doc)
    else:
        p = riesz_herglotz_from_json(p_doc)
    return BerksonPortaData(tau=tau, p=p)
