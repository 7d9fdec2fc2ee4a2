"""Functions with nonnegative real part on the disk and the right half-plane.

Disk-side data is stored in Riesz-Herglotz form (an imaginary offset plus
finitely many boundary atoms), which makes ``Re p >= 0`` true by construction.
Half-plane data is the finite-atom version of the Nevanlinna representation
of a derivative with positive real part, together with an explicit
antiderivative whose log branches are anchored at z = 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import DomainError

_UNIT_MODULUS_TOL = 1e-12


@dataclass(frozen=True)
class RieszHerglotzData:
    """ic + sum of mass * (u + z)/(u - z) over unit-modulus atoms u."""

    c: float = 0.0
    atoms: tuple[tuple[complex, float], ...] = ()

    def __post_init__(self):
        for u, mass in self.atoms:
            if abs(abs(u) - 1.0) > _UNIT_MODULUS_TOL:
                raise ValueError(f"atom location {u} is not unit-modulus")
            if mass < 0:
                raise ValueError(f"atom mass {mass} is negative")


@dataclass(frozen=True)
class NevanlinnaData:
    """Data (alpha, beta, mu, H(1)) for H'(z) = i*alpha + beta*z + integral."""

    alpha: float = 0.0
    beta: float = 0.0
    atoms: tuple[tuple[float, float], ...] = ()
    H1: complex = 0.0 + 0.0j

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be >= 0")
        for t, mass in self.atoms:
            if mass <= 0:
                raise ValueError(f"atom mass {mass} must be > 0")


def _require_disk(z: complex):
    if abs(z) >= 1.0:
        raise DomainError(f"|z| = {abs(z)} is not inside the unit disk")


def _require_halfplane(z: complex):
    if z.real <= 0.0:
        raise DomainError(f"Re z = {z.real} is not positive")


def eval_p_disk(data: RieszHerglotzData, z: complex) -> complex:
    """Evaluate the represented function at a disk point; Re of the result
    is nonnegative because every atom contributes (1-|z|^2)/|u-z|^2 * mass."""
    _require_disk(z)
    total = 1j * data.c
    for u, mass in data.atoms:
        total += mass * (u + z) / (u - z)
    return total


def p_disk_derivative(data: RieszHerglotzData, z: complex) -> complex:
    """Derivative of eval_p_disk in z (each atom differentiates to 2u/(u-z)^2)."""
    _require_disk(z)
    total = 0.0j
    for u, mass in data.atoms:
        total += mass * 2.0 * u / (u - z) ** 2
    return total


def eval_Hprime(data: NevanlinnaData, z: complex) -> complex:
    """i*alpha + beta*z + sum of mass * (1 + i t z)/(z + i t)."""
    _require_halfplane(z)
    total = 1j * data.alpha + data.beta * z
    for t, mass in data.atoms:
        total += mass * (1.0 + 1j * t * z) / (z + 1j * t)
    return total


def eval_H(data: NevanlinnaData, z: complex) -> complex:
    """Antiderivative of eval_Hprime with value data.H1 at z = 1.

    Each atom integrates to i*t*(z-1) + (1+t^2)*(log(z+it) - log(1+it)); both
    log arguments have positive real part, so the principal-branch difference
    is analytic on the half-plane and vanishes at z = 1.
    """
    _require_halfplane(z)
    total = data.H1 + 1j * data.alpha * (z - 1.0) + 0.5 * data.beta * (z * z - 1.0)
    for t, mass in data.atoms:
        it = 1j * t
        total += mass * (
            it * (z - 1.0) + (1.0 + t * t) * (cmath.log(z + it) - cmath.log(1.0 + it))
        )
    return total


@dataclass(frozen=True)
class IntegrandBoundReport:
    """Grid maximum of |(1 + i t z)/(z + i t)| against (1 + 2|z|^2)/Re z."""

    z: complex
    max_ratio: float
    argmax_t: float
    bound: float
    satisfied: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "satisfied", self.max_ratio <= self.bound)


def integrand_bound_check(z: complex, t_grid) -> IntegrandBoundReport:
    """Sweep the Nevanlinna integrand over t_grid and compare with its bound."""
    _require_halfplane(z)
    best = -1.0
    best_t = 0.0
    for t in t_grid:
        ratio = abs(1.0 + 1j * t * z) / abs(z + 1j * t)
        if ratio > best:
            best, best_t = ratio, float(t)
    bound = (1.0 + 2.0 * abs(z) ** 2) / z.real
    return IntegrandBoundReport(z=z, max_ratio=best, argmax_t=best_t, bound=bound)


# --- JSON encodings -------------------------------------------------------

def riesz_herglotz_to_json(data: RieszHerglotzData) -> dict:
    return {
        "c": data.c,
        "atoms": [
            {"u_angle": math.atan2(u.imag, u.real), "mass": mass}
            for u, mass in data.atoms
        ],
    }


def riesz_herglotz_from_json(doc: dict) -> RieszHerglotzData:
    atoms = tuple(
        (cmath.exp(1j * atom["u_angle"]), float(atom["mass"]))
        for atom in doc.get("atoms", [])
    )
    return RieszHerglotzData(c=float(doc.get("c", 0.0)), atoms=atoms)


def nevanlinna_to_json(data: NevanlinnaData) -> dict:
    return {
        "alpha": data.alpha,
        "beta": data.beta,
        "atoms": [{"t": t, "mass": mass} for t, mass in data.atoms],
        "H1": [data.H1.real, data.H1.imag],
    }


def nevanlinna_from_json(doc: dict) -> NevanlinnaData:
    h1 = doc.get("H1", [0.0, 0.0])
    return NevanlinnaData(
        alpha=float(doc.get("alpha", 0.0)),
        beta=float(doc.get("beta", 0.0)),
        atoms=tuple((float(a["t"]), float(a["mass"])) for a in doc.get("atoms", [])),
        H1=complex(h1[0], h1[1]),
    )
