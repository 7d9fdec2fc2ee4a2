"""Adaptive Gauss-Kronrod quadrature for complex integrands on segments.

The integrands we meet (reciprocal generators, Herglotz ratios) are analytic
on the whole integration segment, so a 7/15-point pair with bisection on the
worst panel converges extremely fast.  Working with complex values directly
avoids splitting every integral into two real quadratures.
"""

from __future__ import annotations

import heapq
from typing import Callable

from .errors import QuadratureError

# 15-point Kronrod abscissae on [-1, 1] (symmetric; only the non-negative
# half is tabulated) and the matching Kronrod / embedded 7-point Gauss weights.
_XK = (
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
)
_WK = (
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
)
# Gauss weights attach to the odd-indexed Kronrod nodes (and the centre).
_WG = (
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
)


def _kronrod_panel(f: Callable[[complex], complex], a: complex, b: complex):
    """One G7/K15 panel on the segment [a, b]; returns (I15, |I15 - I7|)."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(mid)
    k = _WK[7] * fc
    g = _WG[3] * fc
    for i in range(7):
        x = _XK[i]
        fp = f(mid + half * x)
        fm = f(mid - half * x)
        k += _WK[i] * (fp + fm)
        if i % 2 == 1:
            g += _WG[i // 2] * (fp + fm)
    scale = abs(half)
    return half * k, scale * abs(k - g)


def integrate_segment(
    f: Callable[[complex], complex],
    a: complex,
    b: complex,
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-13,
    max_panels: int = 2048,
) -> complex:
    """Integrate f along the straight segment from a to b.

    Panels are bisected worst-first until the summed Kronrod error estimate
    drops below max(abs_tol, rel_tol * |integral|).
    """
    if a == b:
        return 0.0j
    val, err = _kronrod_panel(f, a, b)
    # heap of (-error, counter, a, b, value, error); counter breaks ties
    heap = [(-err, 0, a, b, val, err)]
    total_val, total_err = val, err
    counter = 0
    while total_err > max(abs_tol, rel_tol * abs(total_val)):
        if len(heap) >= max_panels:
            raise QuadratureError(
                f"error {total_err:.3e} above tolerance after {len(heap)} panels"
            )
        _, _, pa, pb, pval, perr = heapq.heappop(heap)
        mid = 0.5 * (pa + pb)
        v1, e1 = _kronrod_panel(f, pa, mid)
        v2, e2 = _kronrod_panel(f, mid, pb)
        total_val += v1 + v2 - pval
        total_err += e1 + e2 - perr
        counter += 1
        heapq.heappush(heap, (-e1, counter, pa, mid, v1, e1))
        counter += 1
        heapq.heappush(heap, (-e2, counter, mid, pb, v2, e2))
    return total_val


def integrate_segment_fixed(
    f: Callable[[complex], complex], a: complex, b: complex, panels: int
) -> complex:
    """Composite K15 rule with a fixed number of equal panels (no adaptivity).

    Exists so callers can run their own panel-halving stability checks.
    """
    if panels < 1:
        raise ValueError("panels must be >= 1")
    total = 0.0j
    step = (b - a) / panels
    for j in range(panels):
        val, _ = _kronrod_panel(f, a + j * step, a + (j + 1) * step)
        total += val
    return total
