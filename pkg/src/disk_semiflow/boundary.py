"""Boundary probes: angular limits, dilations, classification, unrestricted
limits, and equicontinuity moduli.

All estimators sample geometrically refined approach points r_k = 1 - 2^{-k}
(so the gap to the circle is exact in floating point) and declare a limit
when the last three samples agree pairwise within tolerance.  Divergence to
infinity is declared when the magnitude exceeds a documented threshold over
the last three samples while still growing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ClassificationInstabilityError, DomainError, InconsistencyError
from .semiflow import SemigroupModel, flow

INF_THRESHOLD = 1e6
_HALF_PI = 0.5 * math.pi


# --- approach geometry ------------------------------------------------------

@dataclass(frozen=True)
class StolzAngle:
    """Nontangential approach region at sigma with half-opening alpha."""

    sigma: complex
    alpha: float

    def __post_init__(self):
        if not (0.0 < self.alpha < _HALF_PI):
            raise ValueError("alpha must lie in (0, pi/2)")

    def contains(self, z: complex) -> bool:
        w = 1.0 - self.sigma.conjugate() * z
        return abs(cmath.phase(w)) < self.alpha and abs(w) < 0.5 * math.cos(self.alpha)


@dataclass(frozen=True)
class ApproachPath:
    """Curve z(delta) = sigma * (1 - delta * e^{i theta(delta)}) with
    |1 - conj(sigma) z| -> 0 as delta -> 0.

    radial: theta = 0; stolz: theta = side * alpha (constant angle);
    tangential: theta = side * (pi/2 - delta^{q-1}), which exits every
    fixed Stolz angle as delta -> 0.
    """

    kind: str
    sigma: complex
    alpha: float = 0.0
    side: int = 0
    q: float = 2.0
    delta0: float = 0.4

    def __post_init__(self):
        if self.kind not in ("radial", "stolz", "tangential"):
            raise ValueError(f"unknown path kind {self.kind!r}")
        if self.kind == "tangential" and self.q <= 1.0:
            raise ValueError("tangential exponent q must exceed 1")
        if self.kind == "tangential" and self.side == 0:
            raise ValueError("tangential path needs side = +1 or -1")

    def point(self, delta: float) -> complex:
        if self.kind == "radial":
            theta = 0.0
        elif self.kind == "stolz":
            theta = self.side * self.alpha
        else:
            theta = self.side * (_HALF_PI - delta ** (self.q - 1.0))
        return self.sigma * (1.0 - delta * cmath.exp(1j * theta))

    def samples(self, depth: int) -> list[complex]:
        return [self.point(self.delta0 * 2.0 ** (-k)) for k in range(depth)]


def radial_path(sigma: complex, delta0: float = 0.5) -> ApproachPath:
    return ApproachPath(kind="radial", sigma=sigma, delta0=delta0)


def stolz_path(sigma: complex, alpha: float, side: int) -> ApproachPath:
    return ApproachPath(
        kind="stolz", sigma=sigma, alpha=alpha, side=side,
        delta0=0.5 * math.cos(alpha),
    )


def tangential_path(sigma: complex, q: float = 2.0, side: int = 1) -> ApproachPath:
    return ApproachPath(kind="tangential", sigma=sigma, q=q, side=side)


def default_probe_paths(sigma: complex) -> tuple[ApproachPath, ...]:
    return (
        radial_path(sigma),
        stolz_path(sigma, math.pi / 4, +1),
        stolz_path(sigma, math.pi / 4, -1),
        tangential_path(sigma, 2.0, +1),
        tangential_path(sigma, 2.0, -1),
    )


# --- scalar limit estimation ------------------------------------------------

@dataclass(frozen=True)
class PathLimit:
    value: complex | None
    infinite: bool
    samples: tuple[complex, ...]

    @property
    def conclusive(self) -> bool:
        return self.infinite or self.value is not None


def path_limit(
    evaluate: Callable[[complex], complex],
    path: ApproachPath,
    tol: float = 1e-8,
    max_depth: int = 40,
    inf_threshold: float = INF_THRESHOLD,
) -> PathLimit:
    """Cauchy estimate of the limit of ``evaluate`` along ``path``.

    Divergence to infinity is declared early once the modulus tops
    ``inf_threshold`` over three growing samples, and at exhaustion when the
    modulus keeps growing by non-shrinking increments (log-type growth never
    reaches a fixed threshold on a geometric schedule, but its increments
    stay bounded away from zero while any convergent tail's increments halve).
    """
    window: list[complex] = []
    kept: list[complex] = []
    for k in range(max_depth):
        z = path.point(path.delta0 * 2.0 ** (-k))
        if 1.0 - abs(z) < 1e-14:
            break  # the approach point is no longer resolvable inside the disk
        v = complex(evaluate(z))
        window.append(v)
        kept.append(v)
        if len(window) > 3:
            window.pop(0)
        if len(window) == 3:
            a, b, c = window
            if abs(a) > inf_threshold and abs(c) >= abs(b) >= abs(a):
                return PathLimit(value=None, infinite=True, samples=tuple(kept))
            if max(abs(a - b), abs(b - c), abs(a - c)) <= tol:
                return PathLimit(value=c, infinite=False, samples=tuple(kept))
    if len(kept) >= 3:
        a, b, c = kept[-3], kept[-2], kept[-1]
        d1, d2 = abs(b) - abs(a), abs(c) - abs(b)
        if d2 > 10.0 * tol and d1 > 0 and d2 >= 0.7 * d1:
            return PathLimit(value=None, infinite=True, samples=tuple(kept))
        # exhausted resolution with a still-shrinking geometric tail: Aitken
        # extrapolation settles it (exact for s_k = L + C * rho^k)
        e1, e2 = b - a, c - b
        if abs(e2) < 0.9 * abs(e1):
            den = e2 - e1
            if abs(den) > 1e-3 * abs(e1):
                return PathLimit(
                    value=c - e2 * e2 / den, infinite=False, samples=tuple(kept)
                )
    return PathLimit(value=None, infinite=False, samples=tuple(kept))


# --- angular limits ---------------------------------------------------------

@dataclass(frozen=True)
class AngularLimitResult:
    value: complex | None
    path_values: tuple[complex, ...]
    disagreement: float
    converged: bool


_DEFAULT_ALPHAS = (math.pi / 8, math.pi / 4, 3 * math.pi / 8)


def angular_limit_report(
    model: SemigroupModel,
    sigma: complex,
    t: float,
    tol: float = 1e-8,
    max_depth: int = 40,
    alphas: Sequence[float] = _DEFAULT_ALPHAS,
) -> AngularLimitResult:
    """Estimate the angular limit of phi_t at sigma along the radius and the
    constant-angle rays at +-alpha for each opening in ``alphas``."""
    if abs(abs(sigma) - 1.0) > 1e-12:
        raise DomainError("sigma must be unit-modulus")
    paths = [radial_path(sigma)]
    for a in alphas:
        paths.append(stolz_path(sigma, a, +1))
        paths.append(stolz_path(sigma, a, -1))
    values = []
    for p in paths:
        est = path_limit(lambda z: flow(model, z, t), p, tol, max_depth)
        if est.value is None:
            return AngularLimitResult(
                value=None, path_values=(), disagreement=math.inf, converged=False
            )
        values.append(est.value)
    disagreement = max(
        abs(u - v) for i, u in enumerate(values) for v in values[i + 1:]
    )
    if disagreement > 10.0 * tol:
        return AngularLimitResult(
            value=None,
            path_values=tuple(values),
            disagreement=disagreement,
            converged=False,
        )
    return AngularLimitResult(
        value=values[0],
        path_values=tuple(values),
        disagreement=disagreement,
        converged=True,
    )


def angular_limit(
    model: SemigroupModel,
    sigma: complex,
    t: float,
    tol: float = 1e-8,
    max_depth: int = 40,
) -> complex | None:
    """The angular limit of phi_t at sigma, or None when the samples fail to
    settle (which, for a genuine semigroup model, flags numerical trouble)."""
    return angular_limit_report(model, sigma, t, tol, max_depth).value


def _boundary_value(
    model: SemigroupModel,
    z: complex,
    t: float,
    tol: float = 1e-9,
    max_depth: int = 40,
) -> complex:
    """phi_t at a closed-disk point; unit-modulus points get their
    angular-limit values (closed-form extension when the model has one)."""
    if abs(z) < 1.0 - 1e-14:
        return flow(model, z, t)
    sigma = z / abs(z)
    if model.boundary_flow is not None:
        return model.boundary_flow(sigma, t)
    val = angular_limit(model, sigma, t, tol, max_depth)
    if val is None:
        raise InconsistencyError(f"no stable angular limit at {sigma} (t={t})")
    return val


# --- dilation ---------------------------------------------------------------

def dilation(
    model: SemigroupModel,
    sigma: complex,
    t: float,
    depth: int = 40,
    tail_tol: float = 1e-7,
    inf_threshold: float = INF_THRESHOLD,
) -> float:
    """Sampled lower dilation of phi_t at sigma.

    Samples v_k = (1 - |phi_t(r_k sigma)|) / (1 - r_k) at r_k = 1 - 2^{-k};
    the estimator is the suffix-minimum sequence (the sampled version of a
    lim-inf) extrapolated linearly from its last two entries.  Values blowing
    through ``inf_threshold`` while growing report an infinite dilation.
    """
    if t <= 0:
        raise DomainError("dilation needs t > 0")
    if abs(abs(sigma) - 1.0) > 1e-12:
        raise DomainError("sigma must be unit-modulus")
    vals: list[float] = []
    for k in range(1, depth + 1):
        gap = 2.0 ** (-k)
        w = flow(model, (1.0 - gap) * sigma, t)
        vals.append((1.0 - abs(w)) / gap)
        if len(vals) >= 3:
            a, b, c = vals[-3], vals[-2], vals[-1]
            if a > inf_threshold and c >= b >= a:
                return math.inf
            scale = max(1.0, abs(c))
            if abs(c - b) <= tail_tol * scale and abs(b - a) <= tail_tol * scale:
                break
    suffix = list(vals)
    for i in range(len(suffix) - 2, -1, -1):
        suffix[i] = min(suffix[i], suffix[i + 1])
    if len(suffix) >= 2:
        return 2.0 * suffix[-1] - suffix[-2]
    return suffix[-1]


# --- classification ---------------------------------------------------------

CLASS_BOUNDARY_DW = "boundary-DW"
CLASS_REPELLING = "repelling-regular"
CLASS_NON_REGULAR = "non-regular-fixed"
CLASS_CONTACT = "contact"
CLASS_GENERIC = "generic"

_DEFAULT_PROBE_TIMES = (0.5, 1.0, 2.0)


def classify_point(
    model: SemigroupModel,
    sigma: complex,
    times: Sequence[float] = _DEFAULT_PROBE_TIMES,
    fixed_tol: float = 1e-7,
    contact_tol: float = 1e-7,
    limit_tol: float = 1e-8,
    depth: int = 40,
) -> str:
    """Classify a circle point by its angular limit and dilation.

    Whether a point is fixed, and whether a fixed point is regular, persists
    across the whole semigroup, so those verdicts must agree at every probe
    time; a disagreement is an error.  Contact-ness of a non-fixed point is
    allowed to decay with t (a boundary image can be swallowed past a slit
    tip into the disk); such points classify as generic.
    """
    verdicts = []
    for t in times:
        res = angular_limit_report(model, sigma, t, tol=limit_tol, max_depth=depth)
        if not res.converged:
            raise InconsistencyError(f"angular limit did not settle at {sigma}, t={t}")
        val = res.value
        is_fixed = abs(val - sigma) <= fixed_tol
        is_contact = abs(abs(val) - 1.0) <= contact_tol
        if is_fixed:
            if abs(model.dw) > 1.0 - 1e-12 and abs(sigma - model.dw) <= fixed_tol:
                verdicts.append(CLASS_BOUNDARY_DW)
            else:
                dil = dilation(model, sigma, t, depth)
                verdicts.append(
                    CLASS_REPELLING if math.isfinite(dil) else CLASS_NON_REGULAR
                )
        elif is_contact:
            verdicts.append(CLASS_CONTACT)
        else:
            verdicts.append(CLASS_GENERIC)
    protected = {v if v not in (CLASS_CONTACT, CLASS_GENERIC) else "not-fixed" for v in verdicts}
    if len(protected) != 1:
        raise ClassificationInstabilityError(
            f"classification of {sigma} changed across probe times: {verdicts}"
        )
    distinct = set(verdicts)
    if len(distinct) == 1:
        return verdicts[0]
    if distinct == {CLASS_CONTACT, CLASS_GENERIC}:
        earlier = [v for _, v in sorted(zip(times, verdicts))]
        if earlier != sorted(earlier, key=lambda v: v == CLASS_GENERIC):
            raise ClassificationInstabilityError(
                f"contact-ness of {sigma} reappeared after vanishing: {verdicts}"
            )
        return CLASS_GENERIC
    raise ClassificationInstabilityError(
        f"classification of {sigma} changed across probe times: {verdicts}"
    )


# --- unrestricted limits ----------------------------------------------------

@dataclass(frozen=True)
class ProbeResult:
    verdict: str  # "agrees" | "disagrees" | "inconclusive"
    limits: tuple[complex | None, ...]
    infinite: tuple[bool, ...]

    @property
    def common_value(self) -> complex | None:
        if self.verdict == "agrees" and not any(self.infinite):
            return self.limits[0]
        return None


def unrestricted_probe(
    evaluate: Callable[[complex], complex],
    sigma: complex,
    paths: Iterable[ApproachPath] | None = None,
    tol: float = 1e-6,
    max_depth: int = 40,
    inf_threshold: float = INF_THRESHOLD,
) -> ProbeResult:
    """Compare the limits of ``evaluate`` along several approach paths.

    "agrees": every path settles and the limits match within tol (or every
    path diverges to infinity).  "disagrees": two paths settle at values more
    than 10*tol apart, or one settles while another diverges.  Anything else
    is "inconclusive" -- a value, not an error.
    """
    if paths is None:
        paths = default_probe_paths(sigma)
    estimates = [
        path_limit(evaluate, p, tol, max_depth, inf_threshold) for p in paths
    ]
    limits = tuple(e.value for e in estimates)
    infinite = tuple(e.infinite for e in estimates)

    finite_vals = [v for v in limits if v is not None]
    n_inf = sum(infinite)
    n = len(estimates)

    if n_inf == n:
        return ProbeResult("agrees", limits, infinite)
    if len(finite_vals) == n:
        spread = max(
            (abs(u - v) for i, u in enumerate(finite_vals) for v in finite_vals[i + 1:]),
            default=0.0,
        )
        if spread <= tol:
            return ProbeResult("agrees", limits, infinite)
        if spread > 10.0 * tol:
            return ProbeResult("disagrees", limits, infinite)
        return ProbeResult("inconclusive", limits, infinite)
    if n_inf > 0 and finite_vals:
        return ProbeResult("disagrees", limits, infinite)
    return ProbeResult("inconclusive", limits, infinite)


# --- linearizer signature at a boundary point -------------------------------

@dataclass(frozen=True)
class KoenigsSignature:
    re_trend: str  # "minus-infinity" | "bounded"
    re_at_ref: float
    im_radial_limit: float | None
    im_tangential_spread: float


def koenigs_signature(
    h_eval: Callable[[complex], complex],
    sigma: complex,
    r_grid: Sequence[float] | None = None,
    re_threshold: float = -5.0,
    ref_gap: float = 1e-7,
    tol: float = 1e-8,
    q: float = 2.0,
) -> KoenigsSignature:
    """Boundary signature of a boundary-case linearizer at sigma.

    Fixed points other than the attracting one push Re h to -infinity along
    the radius; regular fixed points additionally scatter Im h across
    tangential approaches, while non-fixed points keep both parts finite.
    """
    if r_grid is None:
        r_grid = [1.0 - 2.0 ** (-k) for k in range(3, 41)]
    r_grid = sorted(set(list(r_grid) + [1.0 - ref_gap]))
    re_vals = []
    im_vals = []
    for r in r_grid:
        val = complex(h_eval(r * sigma))
        re_vals.append(val.real)
        im_vals.append(val.imag)
    re_ref = re_vals[r_grid.index(1.0 - ref_gap)]
    tail = re_vals[-4:]
    decreasing = all(b < a for a, b in zip(tail, tail[1:]))
    trend = "minus-infinity" if (decreasing and re_ref < re_threshold) else "bounded"

    im_limit: float | None = None
    t3 = im_vals[-3:]
    if len(t3) == 3 and max(abs(a - b) for a in t3 for b in t3) <= max(tol, 1e-8):
        im_limit = t3[-1]

    side_vals = []
    for side in (+1, -1):
        est = path_limit(
            lambda z: complex(h_eval(z)).imag + 0.0j,
            tangential_path(sigma, q, side),
            tol=max(tol, 1e-6),
            max_depth=40,
        )
        if est.value is not None:
            side_vals.append(est.value.real)
        elif est.samples:
            side_vals.append(est.samples[-1].real)
    spread = max(side_vals) - min(side_vals) if len(side_vals) >= 2 else math.inf
    return KoenigsSignature(
        re_trend=trend,
        re_at_ref=re_ref,
        im_radial_limit=im_limit,
        im_tangential_spread=spread,
    )


# --- equicontinuity ---------------------------------------------------------

def equicontinuity_modulus(
    model: SemigroupModel,
    sigma: complex,
    T: float,
    delta_grid: Sequence[float],
    n_dirs: int = 9,
    n_times: int = 9,
) -> dict[float, float]:
    """Table delta -> sup over t <= T and |z - sigma| <= delta of
    |phi_t(z) - phi_t(sigma)|.

    Samples pool across deltas (a sample counts toward every delta at least
    as large as its distance), which makes the table nondecreasing in delta
    by construction.  Unit-modulus samples use angular-limit values.
    """
    deltas = sorted(delta_grid)
    times = np.linspace(0.0, T, n_times)
    interior_vertex = abs(sigma) < 1.0 - max(deltas)
    samples: list[tuple[float, complex]] = []
    for d in deltas:
        for rho in (0.5, 1.0):
            r = rho * d
            if interior_vertex:
                for theta in np.linspace(0.0, 2.0 * math.pi, n_dirs, endpoint=False):
                    z = sigma + r * cmath.exp(1j * theta)
                    samples.append((abs(z - sigma), z))
                continue
            # boundary vertex: interior fan plus circle arc points
            theta_max = _HALF_PI - max(0.05, r)
            for theta in np.linspace(-theta_max, theta_max, n_dirs):
                z = sigma * (1.0 - r * cmath.exp(1j * theta))
                samples.append((abs(z - sigma), z))
            psi = 2.0 * math.asin(0.5 * r)
            for sgn in (+1.0, -1.0):
                z = sigma * cmath.exp(1j * sgn * psi)
                samples.append((abs(z - sigma), z))

    table: dict[float, float] = {}
    ref = {t: _boundary_value(model, sigma, t) for t in times}
    values = [
        (dist, max(abs(_boundary_value(model, z, t) - ref[t]) for t in times))
        for dist, z in samples
    ]
    for d in deltas:
        worst = 0.0
        for dist, v in values:
            if dist <= d * (1.0 + 1e-12):
                worst = max(worst, v)
        table[d] = worst
    return table


def time_equicontinuity(
    model: SemigroupModel,
    z_grid: Sequence[complex],
    t_grid: Sequence[float],
    widths: Sequence[float] = (1e-3, 2e-3, 5e-3, 1e-2),
) -> dict[float, float]:
    """Modulus estimate omega(w) = sup over z and pairs |t1 - t2| <= w of
    |phi_{t1}(z) - phi_{t2}(z)|; cumulative over pairs, hence nondecreasing."""
    ts = sorted(t_grid)
    vals = np.empty((len(ts), len(z_grid)), dtype=complex)
    for i, t in enumerate(ts):
        for j, z in enumerate(z_grid):
            vals[i, j] = _boundary_value(model, complex(z), t)
    table: dict[float, float] = {}
    for w in sorted(widths):
        worst = 0.0
        if w > 0:
            for i in range(len(ts)):
                for j in range(i + 1, len(ts)):
                    gap = ts[j] - ts[i]
                    if gap > w + 1e-15:
                        break
                    if gap > 0:
                        worst = max(worst, float(np.max(np.abs(vals[j] - vals[i]))))
        table[w] = worst
    return table


# --- long-time behaviour ----------------------------------------------------

@dataclass(frozen=True)
class LongTimeResult:
    kind: str  # "fixed" | "converges_to_dw" | "undecided"
    distance: float | None = None
    time: float | None = None


def long_time_boundary(
    model: SemigroupModel,
    sigma: complex,
    T: float,
    fixed_times: Sequence[float] = _DEFAULT_PROBE_TIMES,
    fixed_tol: float = 1e-7,
    dw_tol: float = 1e-2,
    limit_tol: float = 1e-8,
) -> LongTimeResult:
    """Either sigma stays fixed for all probe times, or its trajectory of
    angular-limit values drifts to the attracting point; a geometric time
    grid up to T watches for the distance to fall below dw_tol."""
    if abs(abs(sigma) - 1.0) > 1e-12:
        raise DomainError("sigma must be unit-modulus")
    fixed = True
    for t in fixed_times:
        val = angular_limit(model, sigma, t, tol=limit_tol)
        if val is None or abs(val - sigma) > fixed_tol:
            fixed = False
            break
    if fixed:
        return LongTimeResult(kind="fixed")

    t = 0.5
    hit_time = None
    dist = None
    while t <= T * (1.0 + 1e-12):
        val = angular_limit(model, sigma, min(t, T), tol=limit_tol)
        if val is not None:
            dist = abs(val - model.dw)
            if dist < dw_tol:
                hit_time = min(t, T)
                break
        if t >= T:
            break
        t = min(2.0 * t, T) if 2.0 * t < T else T
    if hit_time is None:
        return LongTimeResult(kind="undecided", distance=dist, time=T)
    final = angular_limit(model, sigma, T, tol=limit_tol)
    final_dist = abs(final - model.dw) if final is not None else dist
    return LongTimeResult(kind="converges_to_dw", distance=final_dist, time=hit_time)


# --- per-point report -------------------------------------------------------

@dataclass(frozen=True)
class BoundaryPointReport:
    sigma: complex
    angular_limit: complex | None
    is_contact: bool
    is_fixed: bool
    dilations: dict[float, float]
    classification: str
    unrestricted_verdict: str

    def __post_init__(self):
        if self.is_fixed and not self.is_contact:
            raise ValueError("a fixed point is in particular a contact point")

    def to_json(self) -> dict:
        def enc(v):
            if v is None:
                return None
            return [v.real, v.imag]

        return {
            "sigma": enc(self.sigma),
            "angular_limit": enc(self.angular_limit),
            "is_contact": self.is_contact,
            "is_fixed": self.is_fixed,
            "dilations": {
                str(t): (d if math.isfinite(d) else "inf")
                for t, d in sorted(self.dilations.items())
            },
            "classification": self.classification,
            "unrestricted_verdict": self.unrestricted_verdict,
        }


def boundary_report(
    model: SemigroupModel,
    sigma: complex,
    times: Sequence[float] = _DEFAULT_PROBE_TIMES,
    probe_time: float = 1.0,
    paths: Iterable[ApproachPath] | None = None,
    tol: float = 1e-7,
) -> BoundaryPointReport:
    """Assemble the full probe record for one circle point."""
    classification = classify_point(model, sigma, times=times)
    res = angular_limit_report(model, sigma, probe_time, tol=1e-8)
    val = res.value
    is_fixed = val is not None and abs(val - sigma) <= tol
    is_contact = val is not None and abs(abs(val) - 1.0) <= tol
    dils = {t: dilation(model, sigma, t) for t in times}
    probe = unrestricted_probe(
        lambda z: flow(model, z, probe_time), sigma, paths=paths
    )
    return BoundaryPointReport(
        sigma=sigma,
        angular_limit=val,
        is_contact=is_contact or is_fixed,
        is_fixed=is_fixed,
        dilations=dils,
        classification=classification,
        unrestricted_verdict=probe.verdict,
    )
