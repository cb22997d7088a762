"""BP EXIT curves and the area-theorem upper bound on the MAP threshold.

The EXIT value at erasure probability eps is the average, over the m bits of
a random symbol, of the probability that the bit stays unknown given
everything except its own channel observation: the symbol's check messages
at the DE fixed point plus the channel outputs of the other m - 1 bits.
Integrated from 1 downward it obeys the area theorem in bits per bit, so it
is compared directly with the design rate.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .density import (
    DeOptions,
    bp_threshold,
    channel_distribution,
    coordinate_undetermined,
    extrinsic_fixed_point,
)
from .ensemble import EnsembleSpec, design_rate
from .kernels import kernel_table

__all__ = [
    "ExitCurve",
    "MapBound",
    "bit_exit_from_extrinsic",
    "bp_exit",
    "symbol_exit",
    "exit_curve",
    "map_upper_bound",
]

log = logging.getLogger(__name__)

# offset used to sample the upper branch just right of a jump
_JUMP_EPS = 1e-9
# slack on the area test; the integral itself is only accurate to O(step^2)
_AREA_TOL = 1e-9


def bit_exit_from_extrinsic(m: int, extrinsic: np.ndarray, eps: float) -> float:
    """Probability a given bit is undetermined from check messages + other bits.

    With e of the other bits erased, the bit lives in a coordinate space of
    dimension e + 1; the check information is a uniform subspace of dimension
    k, and their intersection is uniform inside the coordinate space.
    """
    K = kernel_table(m).intersect
    others = channel_distribution(m - 1, eps) if m > 1 else np.ones(1)
    total = 0.0
    for k in range(1, m + 1):
        if extrinsic[k] == 0.0:
            continue
        for e_other, w in enumerate(others):
            c = e_other + 1
            if w == 0.0:
                continue
            for t in range(1, min(c, k) + 1):
                total += extrinsic[k] * w * K[c, k, t] * coordinate_undetermined(c, t)
    return min(max(total, 0.0), 1.0)


def bp_exit(e: EnsembleSpec, eps: float, opts: DeOptions = DeOptions()) -> float:
    """BP EXIT value at ``eps``, normalised to [0, 1]."""
    return bit_exit_from_extrinsic(e.m, extrinsic_fixed_point(e, eps, opts), eps)


def symbol_exit(e: EnsembleSpec, eps: float, opts: DeOptions = DeOptions()) -> float:
    """Mean extrinsic degrees of freedom per symbol divided by m."""
    p = extrinsic_fixed_point(e, eps, opts)
    return float(p @ np.arange(e.m + 1)) / e.m


@dataclass
class ExitCurve:
    grid: np.ndarray
    values: np.ndarray
    jump: float


@dataclass
class MapBound:
    """Result of the area-theorem integration.

    ``epsilon`` is the upper bound on the MAP threshold. When the area right
    of the BP threshold is smaller than the design rate, ``saturated`` is set
    and ``epsilon`` equals the BP threshold.
    """

    epsilon: float
    bp_threshold: float
    area: float
    rate: float
    saturated: bool
    curve: ExitCurve


def _grid(step: float, lo: float = 0.0) -> np.ndarray:
    n = int(round(1.0 / step))
    g = np.linspace(0.0, 1.0, n + 1)
    return g[g >= lo]


def exit_curve(
    e: EnsembleSpec,
    step: float = 1e-3,
    opts: DeOptions = DeOptions(),
    threshold: float | None = None,
) -> ExitCurve:
    """Sample :func:`bp_exit` on a uniform grid over [0, 1]."""
    if not 0.0 < step <= 0.01:
        raise ValueError("step must be in (0, 0.01]")
    thr = bp_threshold(e, opts) if threshold is None else threshold
    grid = _grid(step)
    values = np.array([0.0 if g < thr else bp_exit(e, g, opts) for g in grid])
    return ExitCurve(grid, values, thr)


def _area_to(h_lo: float, h_hi: float, width: float, target: float) -> float:
    # h is linear on [x, x + width] from h_lo to h_hi; find s in [0, width]
    # such that the area of [x + width - s, x + width] equals target
    slope = (h_hi - h_lo) / width
    if abs(slope) < 1e-15:
        return target / h_hi if h_hi > 0 else width
    # area(s) = h_hi s - slope s^2 / 2
    disc = h_hi * h_hi - 2.0 * slope * target
    s = (h_hi - math.sqrt(max(disc, 0.0))) / slope
    return min(max(s, 0.0), width)


def map_upper_bound(
    e: EnsembleSpec, step: float = 1e-3, opts: DeOptions = DeOptions()
) -> MapBound:
    """Integrate the BP EXIT curve from 1 downward until the area is the design rate."""
    if not 0.0 < step <= 1e-3:
        raise ValueError("step must be in (0, 1e-3]")
    rate = design_rate(e)
    thr = bp_threshold(e, opts)
    pts = [1.0]
    vals = [bp_exit(e, 1.0, opts)]
    area = 0.0
    x = 1.0
    while True:
        nxt = max(x - step, thr)
        if nxt <= thr:
            h = bp_exit(e, min(thr + _JUMP_EPS, 1.0), opts)
        else:
            h = bp_exit(e, nxt, opts)
        width = x - nxt
        cell = 0.5 * (h + vals[-1]) * width
        pts.append(nxt)
        vals.append(h)
        if area + cell >= rate - _AREA_TOL and width > 0:
            s = _area_to(h, vals[-2], width, min(rate - area, cell))
            bound = x - s
            curve = ExitCurve(np.array(pts[::-1]), np.array(vals[::-1]), thr)
            return MapBound(bound, thr, rate, rate, False, curve)
        area += cell
        x = nxt
        if x <= thr:
            break
    log.warning(
        "EXIT area right of the BP threshold (%.6g) is below the design rate (%.6g); "
        "reporting the BP threshold",
        area,
        rate,
    )
    curve = ExitCurve(np.array(pts[::-1]), np.array(vals[::-1]), thr)
    return MapBound(thr, thr, area, rate, True, curve)

