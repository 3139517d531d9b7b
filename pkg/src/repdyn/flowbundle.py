"""Cocycle transport along flow lines and empirical invariant splittings.

A flow line through the Cayley tree determines a sequence of generator
images; composing them transports fibers of the trivial bundle along the
line.  :class:`CocycleTrajectory` stores the partial products ``P(t)`` in
both directions from the basepoint (``P(0)`` is the identity and ``P(t)``
maps the fiber at time 0 to the fiber at time t).

`estimate_splitting` reads an index-k candidate splitting off the singular
value decompositions at the window ends: the forward-expanding block from
the directions most contracted by backward transport, the forward-contracted
block from the directions most contracted by forward transport, and the
neutral block from the middle right-singular directions.  `measure_rates`
then fits the contraction and dominance constants that a partially
hyperbolic splitting must exhibit, optionally in a changed fiber norm.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .domination import GeneratorSet
from .errors import DegenerateGapError, DegenerateInputError, WindowBoundsError
from .fitting import fit_line
from .linalg import (
    GAP_TOL,
    Subspace,
    bottom_singular_subspace,
    require_matrix,
    subspace_distance,
)
from .words import FlowLineWindow

# default half width for trajectory windows
DEFAULT_WINDOW = 48

# smallest singular value of the stacked splitting basis must exceed this
_INDEPENDENCE_TOL = 1e-6

# fraction of the window (at the far end) used for rate fits
_FIT_FRACTION = 2.0 / 3.0

# half width of the sliding window that re-estimates splitting frames while
# rates are accumulated; long enough to resolve the blocks, short enough
# that the relative products stay well conditioned
_RELATIVE_WINDOW = 12


@dataclass
class CocycleTrajectory:
    """Partial transport products along a flow line window.

    ``forward[t]`` is ``P(t)`` for ``t = 0..t_forward`` and ``backward[t]``
    is ``P(-t)``; ``P(t + 1) = image(letter at t) @ P(t)`` and backward
    steps apply inverse images.
    """

    gens: GeneratorSet
    line: FlowLineWindow
    forward: list = field(repr=False)
    backward: list = field(repr=False)
    truncated: bool = False

    @property
    def dim(self) -> int:
        return self.gens.dim

    @property
    def t_forward(self) -> int:
        return len(self.forward) - 1

    @property
    def t_backward(self) -> int:
        return len(self.backward) - 1

    def product(self, t: int) -> np.ndarray:
        """Transport matrix from the fiber at time 0 to the fiber at t."""
        store = self.forward if t >= 0 else self.backward
        i = abs(t)
        if i >= len(store):
            raise WindowBoundsError(f"time {t} outside the computed window")
        return store[i]


def build_trajectory(gens: GeneratorSet, line: FlowLineWindow,
                     half_width: Optional[int] = None) -> CocycleTrajectory:
    """Compose generator images along a flow line window.

    Walks as far as the line's usable window (or ``half_width``, if smaller)
    in both directions.  Overflowing float64 stops the affected direction at
    the last finite product and flags the trajectory as truncated.
    """
    usable = line.usable_half_width
    if half_width is None:
        half_width = usable
    if not 1 <= half_width <= usable:
        raise WindowBoundsError(
            f"half width {half_width} exceeds the usable window {usable}"
        )
    truncated = False
    forward = [np.eye(gens.dim)]
    for t in range(half_width):
        nxt = gens.image(line.letter(t)) @ forward[-1]
        if not np.isfinite(nxt).all():
            truncated = True
            break
        forward.append(nxt)
    backward = [np.eye(gens.dim)]
    for t in range(half_width):
        nxt = gens.image(-line.letter(-t - 1)) @ backward[-1]
        if not np.isfinite(nxt).all():
            truncated = True
            break
        backward.append(nxt)
    return CocycleTrajectory(
        gens=gens, line=line, forward=forward, backward=backward, truncated=truncated
    )


@dataclass
class SplittingEstimate:
    """An empirical index-k splitting with its convergence residual.

    ``residual`` is the largest principal-angle change when the estimation
    window shrinks to three quarters; ``independence`` is the smallest
    singular value of the stacked basis (1 would be an orthogonal direct
    sum, 0 a degenerate one).
    """

    k: int
    v_plus: Subspace
    v_zero: Subspace
    v_minus: Subspace
    residual: float
    independence: float
    t_forward: int
    t_backward: int


def _check_gaps(traj, k, sign):
    n = traj.dim
    horizon = traj.t_forward if sign > 0 else traj.t_backward
    for t in range(1, horizon + 1):
        s = np.linalg.svd(traj.product(sign * t), compute_uv=False)
        for p in sorted({k, n - k}):
            gap = (s[p - 1] - s[p]) / s[p - 1]
            if gap < GAP_TOL:
                raise DegenerateGapError(
                    f"singular gap at index {p} degenerate at time {sign * t}"
                    f" (relative gap {gap:.3e})",
                    index=p,
                    gap=float(gap),
                    time=sign * t,
                )


def splitting_at(traj, k: int, t_forward: int, t_backward: int):
    """Raw splitting estimate from specific window ends.

    Returns ``(v_plus, v_zero, v_minus)`` read off the products
    ``P(-t_backward)`` and ``P(t_forward)`` without residual or
    independence checks; `estimate_splitting` wraps this with both.
    """
    n = traj.dim
    v_plus = bottom_singular_subspace(traj.product(-t_backward), k)
    fwd = traj.product(t_forward)
    v_minus = bottom_singular_subspace(fwd, k)
    _, _, vt = np.linalg.svd(fwd)
    v_zero = Subspace(vt[k : n - k].T)
    return v_plus, v_zero, v_minus


def estimate_splitting(traj: CocycleTrajectory, k: int) -> SplittingEstimate:
    """Candidate invariant splitting of index k from a trajectory window.

    Requires ``1 <= k < n / 2`` (the neutral block must be nonempty) and at
    least two steps in each direction.  Raises
    :class:`DegenerateGapError`, naming the first failing time, when a
    required singular gap collapses anywhere in the window, and
    :class:`DegenerateInputError` when the three blocks fail to be
    linearly independent.
    """
    n = traj.dim
    if not 1 <= k < n / 2:
        raise ValueError(f"k must satisfy 1 <= k < {n / 2:g} for dimension {n}")
    if traj.t_forward < 2 or traj.t_backward < 2:
        raise WindowBoundsError("need at least two steps in each direction")
    _check_gaps(traj, k, +1)
    _check_gaps(traj, k, -1)

    t_fwd, t_back = traj.t_forward, traj.t_backward
    v_plus, v_zero, v_minus = splitting_at(traj, k, t_fwd, t_back)

    def shrink(t):
        s = max(1, (3 * t) // 4)
        return s if s < t else t - 1

    p2, z2, m2 = splitting_at(traj, k, shrink(t_fwd), shrink(t_back))
    residual = max(
        subspace_distance(v_plus, p2),
        subspace_distance(v_zero, z2),
        subspace_distance(v_minus, m2),
    )
    stacked = np.hstack([v_plus.basis, v_zero.basis, v_minus.basis])
    independence = float(np.linalg.svd(stacked, compute_uv=False)[-1])
    if independence <= _INDEPENDENCE_TOL:
        raise DegenerateInputError(
            f"splitting blocks nearly dependent (smallest stacked singular value"
            f" {independence:.3e})"
        )
    return SplittingEstimate(
        k=k,
        v_plus=v_plus,
        v_zero=v_zero,
        v_minus=v_minus,
        residual=residual,
        independence=independence,
        t_forward=t_fwd,
        t_backward=t_back,
    )


@dataclass
class RateReport:
    """Fitted contraction and dominance constants for a splitting.

    Rates are positive when the splitting behaves partially hyperbolically:
    ``a_plus`` (backward contraction of the expanding block), ``a_minus``
    (forward contraction of the contracting block), and the two dominance
    rates of neutral over expanding and contracting over neutral.  ``A_*``
    are the matching multiplicative constants from the fit intercepts.
    """

    a_plus: float
    A_plus: float
    a_minus: float
    A_minus: float
    aprime_plus_zero: float
    Aprime_plus_zero: float
    aprime_zero_minus: float
    Aprime_zero_minus: float
    curves: dict
    fit_start_forward: int
    fit_start_backward: int
    norm_used: bool


def _log_smax(m):
    return float(np.log(np.linalg.svd(m, compute_uv=False)[0]))


def _log_smin(m):
    return float(np.log(np.linalg.svd(m, compute_uv=False)[-1]))


def _relative_forward(gens, line, s, h):
    """Transport matrix from the fiber at time s to time s + h."""
    m = np.eye(gens.dim)
    for u in range(s, s + h):
        m = gens.image(line.letter(u)) @ m
    return m


def _relative_backward(gens, line, s, h):
    """Transport matrix from the fiber at time s to time s - h."""
    m = np.eye(gens.dim)
    for u in range(1, h + 1):
        m = gens.image(-line.letter(s - u)) @ m
    return m


def _local_frames(gens, line, s, h, k):
    """Splitting blocks at time s, re-estimated from a length-h window.

    Short relative products stay well conditioned, so the blocks carry a
    uniformly small error at every time.  Transporting one basis across the
    whole window instead would let the strongest direction amplify basis
    error until the contracted blocks sink below float noise.
    """
    fwd = _relative_forward(gens, line, s, h)
    v_minus = bottom_singular_subspace(fwd, k)
    _, _, vt = np.linalg.svd(fwd)
    v_zero = Subspace(vt[k : gens.dim - k].T)
    v_plus = bottom_singular_subspace(_relative_backward(gens, line, s, h), k)
    return v_plus, v_zero, v_minus


def measure_rates(traj: CocycleTrajectory, split: SplittingEstimate,
                  norm_matrix=None) -> RateReport:
    """Fit contraction and dominance rates of a splitting along a trajectory.

    Each curve accumulates, step by step, the logarithmic extremal stretch
    of a splitting block, with the blocks re-estimated at every time from a
    short relative window; straight lines are fitted on the far two thirds
    of each curve.  ``norm_matrix`` measures the fibers in the norm
    ``|W v|`` instead of the Euclidean one, i.e. transports in the
    coordinates ``x -> W x``; fitted rates are insensitive to that choice.
    """
    gens, line = traj.gens, traj.line
    if norm_matrix is not None:
        w = require_matrix(norm_matrix, "norm matrix")
        w_inv = np.linalg.inv(w)
        gens = GeneratorSet(
            [w @ gens.image(i + 1) @ w_inv for i in range(gens.rank)],
            names=gens.names,
        )

    k = split.k
    tb, tf = traj.t_backward, traj.t_forward
    h = max(1, min(_RELATIVE_WINDOW, min(tb, tf) // 2))
    extent_f = tf - h
    extent_b = tb - h
    if extent_f < 1 or extent_b < 1:
        raise WindowBoundsError("trajectory window too small to fit rates")

    up_back = np.zeros(extent_b + 1)
    acc = 0.0
    for s in range(extent_b):
        v_plus, _, _ = _local_frames(gens, line, -s, h, k)
        step = gens.image(-line.letter(-s - 1))
        acc += _log_smax(step @ v_plus.basis)
        up_back[s + 1] = acc

    down_fwd = np.zeros(extent_f + 1)
    dom_pz = np.zeros(extent_f + 1)
    dom_zm = np.zeros(extent_f + 1)
    acc_minus = acc_pz = acc_zm = 0.0
    for s in range(extent_f):
        v_plus, v_zero, v_minus = _local_frames(gens, line, s, h, k)
        step = gens.image(line.letter(s))
        log_minus = _log_smax(step @ v_minus.basis)
        acc_minus += log_minus
        acc_pz += _log_smax(step @ v_zero.basis) - _log_smin(step @ v_plus.basis)
        acc_zm += log_minus - _log_smin(step @ v_zero.basis)
        down_fwd[s + 1] = acc_minus
        dom_pz[s + 1] = acc_pz
        dom_zm[s + 1] = acc_zm

    start_f = min(extent_f - int(_FIT_FRACTION * extent_f), extent_f - 1)
    start_b = min(extent_b - int(_FIT_FRACTION * extent_b), extent_b - 1)
    ts_f = np.arange(start_f, extent_f + 1)
    ts_b = np.arange(start_b, extent_b + 1)

    def rate(curve, ts):
        slope, intercept, _ = fit_line(ts, curve[ts[0] : ts[-1] + 1])
        return -slope, float(np.exp(intercept))

    a_plus, A_plus = rate(up_back, ts_b)
    a_minus, A_minus = rate(down_fwd, ts_f)
    ap_pz, App_pz = rate(dom_pz, ts_f)
    ap_zm, App_zm = rate(dom_zm, ts_f)
    return RateReport(
        a_plus=a_plus,
        A_plus=A_plus,
        a_minus=a_minus,
        A_minus=A_minus,
        aprime_plus_zero=ap_pz,
        Aprime_plus_zero=App_pz,
        aprime_zero_minus=ap_zm,
        Aprime_zero_minus=App_zm,
        curves={
            "backward_expanding": up_back,
            "forward_contracting": down_fwd,
            "dominance_neutral_over_expanding": dom_pz,
            "dominance_contracting_over_neutral": dom_zm,
        },
        fit_start_forward=int(start_f),
        fit_start_backward=int(start_b),
        norm_used=norm_matrix is not None,
    )


def splitting_index_scan(traj: CocycleTrajectory) -> dict:
    """Try `estimate_splitting` for every admissible index.

    Returns a dict mapping each ``k`` with ``1 <= k < n / 2`` to either a
    :class:`SplittingEstimate` or the exception that ruled it out, so the
    largest working index is visible at a glance.
    """
    out = {}
    n = traj.dim
    for k in range(1, (n + 1) // 2):
        if not k < n / 2:
            break
        try:
            out[k] = estimate_splitting(traj, k)
        except (DegenerateGapError, DegenerateInputError, WindowBoundsError) as e:
            out[k] = e
    return out
