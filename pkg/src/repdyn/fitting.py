"""Least squares line fitting with a slope uncertainty estimate."""

from __future__ import annotations

import numpy as np


def fit_line(xs, ys):
    """Fit ``y = slope * x + intercept``, returning (slope, intercept, se).

    ``se`` is the standard error of the slope from the residuals; it is 0
    when there are two points or fewer, so confidence intervals collapse
    rather than blow up on degenerate fits.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size < 2:
        raise ValueError("need at least two points to fit a line")
    slope, intercept = np.polyfit(xs, ys, 1)
    if xs.size <= 2:
        return float(slope), float(intercept), 0.0
    resid = ys - (slope * xs + intercept)
    denom = np.sum((xs - xs.mean()) ** 2)
    se = np.sqrt(np.sum(resid**2) / (xs.size - 2) / denom)
    return float(slope), float(intercept), float(se)
