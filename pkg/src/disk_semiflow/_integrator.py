"""Adaptive Dormand-Prince 5(4) integrator for a single complex-valued ODE.

Specialised for autonomous fields w' = G(w) whose exact trajectories stay in
an invariant set (the unit disk, or a half-plane).  A proposed step whose
endpoint leaves the invariant set is rejected and halved; sixty consecutive
guard halvings abort the integration, since the true flow never exits and a
persistent exit means the local error control is lying.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .errors import IntegrationError

# Dormand-Prince coefficients (FSAL pair of orders 5 and 4).
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_E = (  # b5 - b4, applied to the stages for the embedded error estimate
    71 / 57600,
    0.0,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)

_MAX_GUARD_HALVINGS = 60
_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


def integrate_field(
    rhs: Callable[[complex], complex],
    w0: complex,
    t_end: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-12,
    max_step: float = 1.0,
    guard: Callable[[complex], bool] | None = None,
    checkpoints: Sequence[float] | None = None,
) -> complex | list[complex]:
    """Integrate w' = rhs(w), w(0) = w0, up to t_end.

    With ``checkpoints`` (sorted, within [0, t_end]) a list of states at those
    times is returned instead of the final state; the integrator steps through
    them without restarting, so a trajectory costs one sweep.
    """
    if t_end < 0:
        raise IntegrationError("cannot integrate backwards in time")
    targets = list(checkpoints) if checkpoints is not None else [t_end]
    if targets and (targets[0] < 0 or targets[-1] > t_end):
        raise IntegrationError("checkpoints outside [0, t_end]")
    out: list[complex] = []

    t = 0.0
    w = w0
    k1 = rhs(w)
    h = min(max_step, 0.1 / (1.0 + abs(k1)))
    guard_halvings = 0
    idx = 0
    while idx < len(targets) and targets[idx] <= t:
        out.append(w)
        idx += 1

    while idx < len(targets):
        target = targets[idx]
        if target - t <= 1e-15 * max(1.0, t):
            # reached within float resolution
            t = target
            out.append(w)
            idx += 1
            continue
        if h > target - t:
            h = target - t
        if h <= 4e-16 * max(1.0, t):
            raise IntegrationError(
                f"step size collapsed at t={t:.6g} (state {w!r}); the exact "
                "flow is pinned against the invariant-set boundary"
            )

        ks = [k1]
        for i in range(1, 7):
            acc = 0.0j
            row = _A[i]
            for j, aij in enumerate(row):
                if aij:
                    acc += aij * ks[j]
            ks.append(rhs(w + h * acc))
        w_new = w + h * sum(b * k for b, k in zip(_B5, ks) if b)
        err = abs(h * sum(e * k for e, k in zip(_E, ks) if e))
        scale = abs_tol + rel_tol * max(abs(w), abs(w_new))

        if guard is not None and not guard(w_new):
            guard_halvings += 1
            if guard_halvings > _MAX_GUARD_HALVINGS:
                raise IntegrationError(
                    "state pinned against the invariant-set boundary after "
                    f"{_MAX_GUARD_HALVINGS} halvings (t={t:.6g}); "
                    "tolerances too loose or the field is not a generator"
                )
            h *= 0.5
            continue

        if err <= scale:
            guard_halvings = 0
            t += h
            w = w_new
            k1 = ks[6]  # FSAL
            if err == 0.0:
                factor = _MAX_FACTOR
            else:
                factor = min(_MAX_FACTOR, _SAFETY * (scale / err) ** 0.2)
            h = min(max_step, h * max(_MIN_FACTOR, factor))
            while idx < len(targets) and targets[idx] <= t + 1e-16 * max(1.0, t):
                out.append(w)
                idx += 1
        else:
            h *= max(_MIN_FACTOR, _SAFETY * (scale / err) ** 0.2)

    if checkpoints is None:
        return out[-1]
    return out
