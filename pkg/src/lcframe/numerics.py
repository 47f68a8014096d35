"""Small numerical helpers shared by the curvature and limit modules."""

from __future__ import annotations

import math

__all__ = ["richardson", "loglog_slope"]


def richardson(values, ratio: float, levels: int = 2) -> float:
    """Extrapolate a sequence sampled at steps r0 * ratio^k to step 0.

    Assumes an error expansion in integer powers of the step and
    cancels up to `levels` leading terms.  `values` is ordered from the
    coarsest step to the finest; `ratio` is the step shrink factor
    (0 < ratio < 1).
    """
    if not values:
        raise ValueError("richardson needs at least one value")
    if not 0.0 < ratio < 1.0:
        raise ValueError("step ratio must lie in (0, 1)")
    level = list(values)
    for m in range(1, min(levels, len(values) - 1) + 1):
        factor = ratio ** m
        level = [
            (fine - factor * coarse) / (1.0 - factor)
            for coarse, fine in zip(level, level[1:])
        ]
    return level[-1]


def loglog_slope(distances, magnitudes):
    """Least-squares slope of log|value| against log(distance).

    Returns (slope, intercept, rms_residual).  Zero magnitudes are
    excluded; if fewer than two points remain, returns (None, None, None).
    """
    pts = [(math.log(r), math.log(m))
           for r, m in zip(distances, magnitudes) if m > 0.0 and r > 0.0]
    if len(pts) < 2:
        return None, None, None
    n = len(pts)
    sx = sum(p[0] for p in pts)
    sy = sum(p[1] for p in pts)
    sxx = sum(p[0] * p[0] for p in pts)
    sxy = sum(p[0] * p[1] for p in pts)
    denom = n * sxx - sx * sx
    if denom == 0.0:
        return None, None, None
    slope = (n * sxy - sx * sy) / denom
    intercept = (sy - slope * sx) / n
    rss = sum((y - (slope * x + intercept)) ** 2 for x, y in pts)
    return slope, intercept, math.sqrt(rss / n)
