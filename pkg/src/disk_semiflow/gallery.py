"""Closed-form reference semigroups with ground-truth metadata.

Six models: two elliptic ones fixing the origin (plain decay and a spiral),
the Moebius model with a repelling boundary point, the strip model (image of
the linearizer is a horizontal strip, so the attracting point is approached
exponentially), the parabolic half-plane model, and a single-slit channel.

The channel realises a translation-invariant slit geometry at desk scale:
the upper half-plane maps forward by w = zeta + log(zeta) onto the upper
half-plane minus the horizontal slit {x + i*pi : x <= -1}.  Composed with a
scaled Cayley map of the disk this yields a semigroup whose lower channel
carries a repelling boundary point at -1 while boundary points on the slit
edges are swallowed past the tip and drift to the attracting point 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from scipy.optimize import brentq

from .errors import DomainError, InversionError, SlitAmbiguityError
from .generator import (
    BerksonPortaData,
    ClosedFormP,
    GeneratorFn,
    builtin_p,
    const_p,
    generator_fn,
    register_builtin_p,
)
from .semiflow import FlowConfig, SemigroupModel

PI = math.pi

# Cayley scale for the channel model.  1/5 keeps the long-time drift toward
# the attracting point observable at desk horizons (distance < 1e-2 by t = 50).
CHANNEL_SCALE = 0.2


# --- slit map and its inversion --------------------------------------------

def slit_map_forward(zeta: complex) -> complex:
    """zeta + log(zeta) on the upper half-plane; the image is the upper
    half-plane minus the slit {x + i*pi : x <= -1}."""
    if zeta.imag <= 0:
        raise DomainError(f"Im zeta = {zeta.imag} is not positive")
    return zeta + cmath.log(zeta)


def _slit_newton(target: complex, z: complex, rel: float = 1e-14, iters: int = 40):
    for _ in range(iters):
        step = (z + cmath.log(z) - target) / (1.0 + 1.0 / z)
        damped = 0
        while (z - step).imag <= 0.0 and damped < 200:
            step *= 0.5
            damped += 1
        if damped >= 200:
            return None  # pinned against the real axis; wrong basin
        z = z - step
        if abs(step) <= rel * max(abs(z), 1e-300):
            residual = abs(z + cmath.log(z) - target)
            if residual <= 1e-12 * max(1.0, abs(target)):
                return z
            return None
    return None


def _slit_edge_radius(x: float, side: str) -> float:
    """Solve -r + log r = x on the side-appropriate branch (r<1 or r>1)."""
    g = lambda r: -r + math.log(r) - x
    if side == "lower":
        return brentq(g, 1e-300, 1.0, xtol=1e-15, rtol=8.9e-16)
    hi = 2.0
    while g(hi) > 0:
        hi *= 2.0
    return brentq(g, 1.0, hi, xtol=1e-15, rtol=8.9e-16)


def on_slit(w: complex, tol: float = 0.0) -> bool:
    return abs(w.imag - PI) <= tol and w.real <= -1.0


def slit_map_inverse(w: complex, side: str | None = None) -> complex:
    """Invert the slit map.  Interior points use Newton with asymptotic
    seeding (far right: zeta ~ w - log w; deep lower channel: zeta ~ e^w;
    upper-left: zeta ~ w - log w) and horizontal continuation from a
    far-right anchor when no asymptotic seed applies.  Points on the slit
    need a side flag and resolve through the one-dimensional edge equation.
    """
    if w.imag <= 0 and not (w.imag == PI):
        # the bottom boundary (real axis image) is handled by the caller
        raise DomainError(f"Im w = {w.imag} is not positive")
    if w.imag == PI and w.real <= -1.0:
        if side is None:
            raise SlitAmbiguityError(
                f"{w} lies on the two-sided slit; pass side='lower' or side='upper'"
            )
        r = _slit_edge_radius(w.real, side)
        return complex(-r, 0.0)

    tip = complex(-1.0, PI)
    if abs(w - tip) < 0.3:
        # quadratic behaviour at the slit tip: w ~ tip - u^2/2 at zeta = -1 + u;
        # the root with Im u > 0 lands on the correct side automatically
        u = cmath.sqrt(-2.0 * (w - tip))
        if u.imag < 0:
            u = -u
        z = _slit_newton(w, -1.0 + u)
        if z is not None:
            return z
    if w.real <= -1.0 and 0.0 < abs(w.imag - PI) < 0.7:
        # near-slit band: start from the matching edge radius, tilted off the
        # axis by the first-order angle d = (Im w - pi)/(r - 1); only valid
        # while that angle is genuinely small
        side_guess = "lower" if w.imag < PI else "upper"
        r = _slit_edge_radius(w.real, side_guess)
        if abs(r - 1.0) > 1e-9:
            d = (w.imag - PI) / (r - 1.0)
            if 0.0 < d <= 0.5:
                z = _slit_newton(w, r * cmath.exp(1j * (PI - d)))
                if z is not None:
                    return z
    if w.real <= -2.0 and w.imag < PI:
        z = _slit_newton(w, cmath.exp(w))
        if z is not None:
            return z
    if w.real <= 0.0 and w.imag >= PI:
        z = _slit_newton(w, w - cmath.log(w))
        if z is not None:
            return z
    if abs(w) > 10.0:
        z = _slit_newton(w, w - cmath.log(w))
        if z is not None:
            return z

    # horizontal continuation from the far right at the same height
    cur = complex(max(w.real, 12.0), w.imag)
    zeta = _slit_newton(cur, cur - cmath.log(cur))
    if zeta is None:
        raise InversionError(f"anchor inversion failed for {w}")
    iterations = 0
    while cur != w:
        step = min(1.0, abs(w - cur))
        target = w if step >= abs(w - cur) else cur + (w - cur) * step / abs(w - cur)
        nxt = _slit_newton(target, zeta, iters=12)
        halvings = 0
        while nxt is None:
            halvings += 1
            if halvings > 60:
                raise InversionError(f"continuation stagnated between {cur} and {w}")
            step *= 0.5
            target = cur + (w - cur) * step / abs(w - cur)
            nxt = _slit_newton(target, zeta, iters=12)
        zeta, cur = nxt, target
        iterations += 1
        if iterations > 400:
            raise InversionError(f"continuation too slow toward {w}")
    return zeta


# --- channel model ----------------------------------------------------------

def _cayley(z: complex) -> complex:
    return 1j * CHANNEL_SCALE * (1.0 + z) / (1.0 - z)


def _cayley_inv(zeta: complex) -> complex:
    return (zeta - 1j * CHANNEL_SCALE) / (zeta + 1j * CHANNEL_SCALE)


def channel_to_domain(z: complex) -> complex:
    """Disk point -> slit-domain coordinates (un-normalized linearizer)."""
    return slit_map_forward(_cayley(z))


def channel_from_domain(w: complex, side: str | None = None) -> complex:
    return _cayley_inv(slit_map_inverse(w, side))


_CHANNEL_H0 = slit_map_forward(_cayley(0.0j))


def channel_semigroup(z: complex, t: float) -> complex:
    """Flow of the channel model: translate by t in slit-domain coordinates."""
    if abs(z) >= 1.0:
        raise DomainError(f"|z| = {abs(z)} is not inside the unit disk")
    if t < 0:
        raise DomainError("flow time must be >= 0")
    if t == 0.0:
        return z
    return channel_from_domain(channel_to_domain(z) + t)


def channel_koenigs(z: complex) -> complex:
    """Channel linearizer normalized to vanish at the origin."""
    return channel_to_domain(z) - _CHANNEL_H0


def channel_boundary_flow(sigma: complex, t: float) -> complex:
    """Angular-limit values of the channel flow at unit-modulus points.

    The upper semicircle corresponds to the two slit edges (split at the tip
    preimage), the lower semicircle to the bottom boundary of the domain, and
    +1 / -1 are the attracting and repelling points.
    """
    if abs(abs(sigma) - 1.0) > 1e-12:
        raise DomainError("sigma must be unit-modulus")
    if t < 0:
        raise DomainError("flow time must be >= 0")
    theta = math.atan2(sigma.imag, sigma.real)
    if abs(theta) < 1e-15 or abs(abs(theta) - PI) < 1e-15:
        return 1.0 + 0.0j if abs(theta) < 1e-15 else -1.0 + 0.0j
    if theta > 0:
        # slit edge: zeta = -r0 with r0 = scale * cot(theta/2)
        r0 = CHANNEL_SCALE / math.tan(0.5 * theta)
        side = "lower" if r0 < 1.0 else "upper"
        w = complex(-r0 + math.log(r0), PI) + t
        if on_slit(w):
            return _cayley_inv(slit_map_inverse(w, side))
        return _cayley_inv(slit_map_inverse(w))
    # bottom boundary: zeta real positive, image on the real axis
    zeta0 = -CHANNEL_SCALE / math.tan(0.5 * theta)
    x = zeta0 + math.log(zeta0) + t
    if x < -30.0:  # log-dominated end of the axis; r + log r = x gives r ~ e^x
        return _cayley_inv(complex(math.exp(x), 0.0))
    g = lambda r: r + math.log(r) - x
    hi = max(2.0 * zeta0, x + 2.0, 2.0)
    zeta_t = brentq(g, 1e-300, hi, xtol=1e-15, rtol=8.9e-16)
    return _cayley_inv(complex(zeta_t, 0.0))


def _channel_p(z: complex) -> complex:
    # positive-real-part factor of the channel generator (attracting point 1)
    return (1.0 + z) / (2.0 * ((1.0 - z) + 1j * CHANNEL_SCALE * (1.0 + z)))


def _channel_dp(z: complex) -> complex:
    den = (1.0 - z) + 1j * CHANNEL_SCALE * (1.0 + z)
    dden = -1.0 + 1j * CHANNEL_SCALE
    return (den - (1.0 + z) * dden) / (2.0 * den * den)


register_builtin_p(
    "slit-channel", lambda doc: ClosedFormP("slit-channel", _channel_p, _channel_dp)
)


# --- gallery entries --------------------------------------------------------

@dataclass(frozen=True)
class FixedPointInfo:
    sigma: complex
    kind: str  # "denjoy-wolff" or "repelling"
    dilation_rate: float  # dilation at time t is exp(rate * t)

    def dilation(self, t: float) -> float:
        return math.exp(self.dilation_rate * t)


@dataclass(frozen=True)
class GalleryEntry:
    id: str
    kind: str  # "elliptic-interior" | "hyperbolic" | "parabolic"
    dw: complex
    flow: Callable[[complex, float], complex]
    koenigs: Callable[[complex], complex]
    koenigs_case: str  # "interior" | "boundary"
    lam: complex | None
    bp: BerksonPortaData
    fixed_points: tuple[FixedPointInfo, ...]
    omega: str
    slow_convergence: bool = False
    boundary_flow: Callable[[complex, float], complex] | None = None

    @property
    def generator(self) -> GeneratorFn:
        return generator_fn(self.bp)

    def model(self) -> SemigroupModel:
        return SemigroupModel(
            dw=self.dw,
            generator=self.generator,
            closed_flow=self.flow,
            boundary_flow=self.boundary_flow,
            gallery_id=self.id,
            slow_convergence=self.slow_convergence,
        )

    def generator_model(self, config: FlowConfig | None = None) -> SemigroupModel:
        """ODE-driven duplicate of this model (closed form withheld)."""
        return SemigroupModel(
            dw=self.dw,
            generator=self.generator,
            config=config or FlowConfig(),
            gallery_id=f"{self.id}#ode",
            slow_convergence=self.slow_convergence,
        )

    def describe(self) -> dict:
        return {
            "id": self.id,
            "type": self.kind,
            "dw": [self.dw.real, self.dw.imag],
            "koenigs_case": self.koenigs_case,
            "lambda": None if self.lam is None else [self.lam.real, self.lam.imag],
            "fixed_points": [
                {
                    "sigma": [fp.sigma.real, fp.sigma.imag],
                    "kind": fp.kind,
                    "dilation_rate": fp.dilation_rate,
                }
                for fp in self.fixed_points
            ],
            "omega": self.omega,
        }


def _dilation_flow(z: complex, t: float) -> complex:
    return cmath.exp(-t) * z


_SPIRAL_LAMBDA = -1.0 + 1.0j


def _spiral_flow(z: complex, t: float) -> complex:
    return cmath.exp(_SPIRAL_LAMBDA * t) * z


def _mobius_schroeder_flow(z: complex, t: float) -> complex:
    a = math.exp(-t)
    return a * z / (1.0 - z + a * z)


def _strip_flow(z: complex, t: float) -> complex:
    if t > 350.0 / PI:  # e^{pi t} would overflow; the flow is already at 1
        a = math.inf
    else:
        a = math.exp(PI * t)
    if math.isinf(a):
        return 1.0 + 0.0j if abs(1.0 + z) > 1e-300 else -1.0 + 0.0j
    num = a * (1.0 + z) - (1.0 - z)
    den = a * (1.0 + z) + (1.0 - z)
    return num / den


def _strip_koenigs(z: complex) -> complex:
    return cmath.log((1.0 + z) / (1.0 - z)) / PI


def _parabolic_koenigs(z: complex) -> complex:
    return 2.0j * z / (1.0 - z)


def _parabolic_flow(z: complex, t: float) -> complex:
    w = _parabolic_koenigs(z) + t
    return w / (w + 2.0j)


_ENTRIES: dict[str, GalleryEntry] = {}


def _add(entry: GalleryEntry):
    _ENTRIES[entry.id] = entry


_add(
    GalleryEntry(
        id="dilation",
        kind="elliptic-interior",
        dw=0.0j,
        flow=_dilation_flow,
        koenigs=lambda z: z,
        koenigs_case="interior",
        lam=-1.0 + 0.0j,
        bp=BerksonPortaData(tau=0.0j, p=const_p(1.0)),
        fixed_points=(FixedPointInfo(0.0j, "denjoy-wolff", -1.0),),
        omega="the whole plane (linearizer is the identity)",
        boundary_flow=_dilation_flow,
    )
)

_add(
    GalleryEntry(
        id="spiral",
        kind="elliptic-interior",
        dw=0.0j,
        flow=_spiral_flow,
        koenigs=lambda z: z,
        koenigs_case="interior",
        lam=_SPIRAL_LAMBDA,
        bp=BerksonPortaData(tau=0.0j, p=const_p(1.0 - 1.0j)),
        fixed_points=(FixedPointInfo(0.0j, "denjoy-wolff", -1.0),),
        omega="the whole plane; trajectories spiral into the origin",
        boundary_flow=_spiral_flow,
    )
)

_add(
    GalleryEntry(
        id="mobius-schroeder",
        kind="elliptic-interior",
        dw=0.0j,
        flow=_mobius_schroeder_flow,
        koenigs=lambda z: z / (1.0 - z),
        koenigs_case="interior",
        lam=-1.0 + 0.0j,
        bp=BerksonPortaData(tau=0.0j, p=builtin_p("one-minus-z")),
        fixed_points=(
            FixedPointInfo(0.0j, "denjoy-wolff", -1.0),
            FixedPointInfo(1.0 + 0.0j, "repelling", 1.0),
        ),
        omega="half-plane Re w > -1/2 (image of z/(1-z))",
        boundary_flow=_mobius_schroeder_flow,
    )
)

_add(
    GalleryEntry(
        id="strip",
        kind="hyperbolic",
        dw=1.0 + 0.0j,
        flow=_strip_flow,
        koenigs=_strip_koenigs,
        koenigs_case="boundary",
        lam=None,
        bp=BerksonPortaData(tau=1.0 + 0.0j, p=builtin_p("cayley-strip")),
        fixed_points=(
            FixedPointInfo(1.0 + 0.0j, "denjoy-wolff", -PI),
            FixedPointInfo(-1.0 + 0.0j, "repelling", PI),
        ),
        omega="horizontal strip |Im w| < 1/2",
        boundary_flow=_strip_flow,
    )
)

_add(
    GalleryEntry(
        id="parabolic",
        kind="parabolic",
        dw=1.0 + 0.0j,
        flow=_parabolic_flow,
        koenigs=_parabolic_koenigs,
        koenigs_case="boundary",
        lam=None,
        bp=BerksonPortaData(tau=1.0 + 0.0j, p=const_p(-0.5j)),
        fixed_points=(FixedPointInfo(1.0 + 0.0j, "denjoy-wolff", 0.0),),
        omega="half-plane Im w > -1 (after the h(0)=0 normalization)",
        slow_convergence=True,
        boundary_flow=lambda z, t: _parabolic_flow(z, t)
        if abs(z - 1.0) > 1e-15
        else 1.0 + 0.0j,
    )
)

_add(
    GalleryEntry(
        id="slit-channel",
        kind="parabolic",
        dw=1.0 + 0.0j,
        flow=channel_semigroup,
        koenigs=channel_koenigs,
        koenigs_case="boundary",
        lam=None,
        bp=BerksonPortaData(tau=1.0 + 0.0j, p=builtin_p("slit-channel")),
        fixed_points=(
            FixedPointInfo(1.0 + 0.0j, "denjoy-wolff", 0.0),
            FixedPointInfo(-1.0 + 0.0j, "repelling", 1.0),
        ),
        omega=(
            "upper half-plane minus the slit {x + i*pi : x <= -1} "
            f"(channel width pi, Cayley scale {CHANNEL_SCALE}); contains the "
            "half-plane Im w > pi"
        ),
        slow_convergence=True,
        boundary_flow=channel_boundary_flow,
    )
)


def gallery_ids() -> tuple[str, ...]:
    return tuple(_ENTRIES.keys())


def gallery_model(model_id: str) -> GalleryEntry:
    try:
        return _ENTRIES[model_id]
    except KeyError:
        raise KeyError(
            f"unknown gallery id {model_id!r}; known: {', '.join(_ENTRIES)}"
        ) from None
