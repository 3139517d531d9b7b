"""Singular value and eigenvalue decompositions with explicit gap contracts.

This module wraps the dense decompositions every other analysis here relies
on.  The two central objects are log singular value vectors ("cartan" kind)
and log eigenvalue-modulus vectors ("jordan" kind), both sorted in
nonincreasing order so the first entry is the fastest growth direction:

    >>> import numpy as np
    >>> from repdyn import linalg
    >>> v = linalg.cartan_projection(np.diag([3.0, 2.0, 1.0]))
    >>> np.round(v.values, 4)
    array([1.0986, 0.6931, 0.    ])

Subspace extraction (`top_singular_subspace`, `bottom_singular_subspace`)
refuses to answer when the defining singular value gap is numerically
degenerate, raising :class:`~repdyn.errors.DegenerateGapError` instead of
returning an arbitrary basis.  Angles between subspaces come in two flavors:
`principal_angle` (smallest angle, measures transversality) and
`subspace_distance` (largest angle, measures how far apart two estimates of
the same subspace are).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConditionWarning, DegenerateGapError, DegenerateInputError

MIN_DIM = 2
MAX_DIM = 16

# relative gap below which a singular subspace is considered undefined
GAP_TOL = 1e-9

# a_1 / a_n beyond this emits ConditionWarning
CONDITION_LIMIT = 1e12

ORTHONORMAL_TOL = 1e-10

# tolerance for the nonincreasing check on spectral vectors
_SORT_TOL = 1e-9

def require_matrix(m, what="matrix"):
    """Validate a square invertible matrix and return it as float64.

    Checks shape (square, side between MIN_DIM and MAX_DIM), finiteness, and
    float-level invertibility.  Raises :class:`DegenerateInputError` on any
    violation.  Merely ill-conditioned matrices pass; those draw a
    :class:`ConditionWarning` at the decomposition sites instead.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DegenerateInputError(f"{what} must be square, got shape {m.shape}")
    n = m.shape[0]
    if not MIN_DIM <= n <= MAX_DIM:
        raise DegenerateInputError(
            f"{what} side must lie in [{MIN_DIM}, {MAX_DIM}], got {n}"
        )
    if not np.isfinite(m).all():
        raise DegenerateInputError(f"{what} has non-finite entries")
    scale = np.linalg.norm(m, axis=1).max()
    if scale == 0.0:
        raise DegenerateInputError(f"{what} is the zero matrix")
    sign, logdet = np.linalg.slogdet(m)
    if sign == 0.0 or not np.isfinite(logdet):
        # LU pivoting can round a wildly scaled but invertible product to a
        # zero pivot; confirm the verdict spectrally before rejecting
        s = np.linalg.svd(m, compute_uv=False)
        if s[-1] == 0.0 or not np.isfinite(s[0] / s[-1]):
            raise DegenerateInputError(f"{what} is numerically singular")
    return m


def _warn_condition(s):
    if s[-1] <= 0.0 or not np.isfinite(s[0] / s[-1]):
        raise DegenerateInputError("singular values span more than float64 allows")
    if s[0] / s[-1] > CONDITION_LIMIT:
        warnings.warn(
            f"condition number {s[0] / s[-1]:.3e} exceeds {CONDITION_LIMIT:.0e};"
            " downstream gaps may be meaningless",
            ConditionWarning,
            stacklevel=3,
        )


@dataclass(frozen=True, eq=False)
class SpectralVector:
    """A nonincreasing vector of logarithms with a declared origin.

    ``kind`` is ``"cartan"`` for log singular values or ``"jordan"`` for log
    eigenvalue moduli.  The entries sum to log |det| in both cases.
    """

    values: np.ndarray
    kind: str

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("spectral vector must be a nonempty 1-d array")
        if not np.isfinite(values).all():
            raise ValueError("spectral vector entries must be finite")
        if self.kind not in ("cartan", "jordan"):
            raise ValueError(f"unknown spectral vector kind {self.kind!r}")
        slack = _SORT_TOL * (1.0 + np.abs(values).max())
        if np.any(np.diff(values) > slack):
            raise ValueError("spectral vector must be nonincreasing")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size

    def __getitem__(self, i):
        return self.values[i]

    @property
    def total(self) -> float:
        """Sum of the entries, i.e. log |det| of the source matrix."""
        return float(self.values.sum())


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace given by an orthonormal column basis."""

    basis: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=float)
        if basis.ndim != 2:
            raise ValueError("subspace basis must be a 2-d array of columns")
        n, k = basis.shape
        if not 1 <= k <= n:
            raise ValueError(f"subspace dimension {k} invalid in ambient dimension {n}")
        gram = basis.T @ basis
        if np.abs(gram - np.eye(k)).max() > ORTHONORMAL_TOL:
            raise ValueError("subspace basis columns are not orthonormal")
        basis = basis.copy()
        basis.flags.writeable = False
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]


def cartan_projection(m) -> SpectralVector:
    """Log singular values of ``m``, nonincreasing.

    Emits :class:`ConditionWarning` when the condition number exceeds
    CONDITION_LIMIT.
    """
    m = require_matrix(m)
    s = np.linalg.svd(m, compute_uv=False)
    _warn_condition(s)
    return SpectralVector(np.log(s), "cartan")


def jordan_projection(m) -> SpectralVector:
    """Log moduli of the eigenvalues of ``m``, nonincreasing.

    Invariant under conjugation, and equals the limit of
    ``cartan_projection(m^k).values / k``.
    """
    m = require_matrix(m)
    moduli = np.sort(np.abs(np.linalg.eigvals(m)))[::-1]
    if moduli[-1] <= 0.0:
        raise DegenerateInputError("eigenvalue modulus underflowed to zero")
    return SpectralVector(np.log(moduli), "jordan")


def top_singular_subspace(m, p: int) -> Subspace:
    """Span of the ``p`` leading left singular vectors of ``m``.

    Parameters
    ----------
    m : array_like
        Square invertible matrix.
    p : int
        Number of leading directions, ``1 <= p < n``.

    Raises
    ------
    DegenerateGapError
        If the relative gap between singular values ``p`` and ``p + 1``
        falls below GAP_TOL, making the subspace ill defined.
    """
    m = require_matrix(m)
    n = m.shape[0]
    if not 1 <= p < n:
        raise ValueError(f"subspace size must satisfy 1 <= p < {n}, got {p}")
    u, s, _ = np.linalg.svd(m)
    _warn_condition(s)
    gap = (s[p - 1] - s[p]) / s[p - 1]
    if gap < GAP_TOL:
        raise DegenerateGapError(
            f"singular gap at index {p} is degenerate (relative gap {gap:.3e})",
            index=p,
            gap=float(gap),
        )
    return Subspace(u[:, :p])


def bottom_singular_subspace(m, p: int) -> Subspace:
    """Span of the right singular vectors of ``m`` for its ``p`` smallest
    singular values.

    This equals the span of the ``p`` leading left singular vectors of the
    inverse matrix, computed here without inverting.  The defining gap is the
    one between singular values ``n - p`` and ``n - p + 1``.
    """
    m = require_matrix(m)
    n = m.shape[0]
    if not 1 <= p < n:
        raise ValueError(f"subspace size must satisfy 1 <= p < {n}, got {p}")
    _, s, vt = np.linalg.svd(m)
    _warn_condition(s)
    gap = (s[n - p - 1] - s[n - p]) / s[n - p - 1]
    if gap < GAP_TOL:
        raise DegenerateGapError(
            f"singular gap at index {n - p} is degenerate (relative gap {gap:.3e})",
            index=n - p,
            gap=float(gap),
        )
    return Subspace(vt[n - p :, :].T)


def opposition_involution(v: SpectralVector) -> SpectralVector:
    """Negate and reverse a spectral vector: (v1..vn) -> (-vn..-v1).

    An exact involution (no rounding), preserving the nonincreasing order
    and the kind tag.
    """
    return SpectralVector(-v.values[::-1], v.kind)


def principal_angle(u: Subspace, w: Subspace) -> float:
    """Smallest principal angle between two subspaces, in radians.

    Zero means the subspaces intersect (up to numerics); requires
    ``u.dim + w.dim <= n`` so that transversality is possible at all.
    """
    if u.ambient_dim != w.ambient_dim:
        raise ValueError("subspaces live in different ambient dimensions")
    if u.dim + w.dim > u.ambient_dim:
        raise ValueError(
            "dimensions force an intersection; smallest angle would always be 0"
        )
    return float(scipy.linalg.subspace_angles(u.basis, w.basis).min())


def subspace_distance(u: Subspace, w: Subspace) -> float:
    """Largest principal angle between two equal-dimensional subspaces.

    This is a metric on the Grassmannian; use it to compare successive
    estimates of the same subspace.
    """
    if u.ambient_dim != w.ambient_dim:
        raise ValueError("subspaces live in different ambient dimensions")
    if u.dim != w.dim:
        raise ValueError("subspace distance needs equal dimensions")
    return float(scipy.linalg.subspace_angles(u.basis, w.basis).max())
