"""Data-side statistics of an observed path.

Implements k-th order increments at rate r, power variations psi_n(r),
the real part of the empirical characteristic function phi_n(t) and the
log-ratio Hurst estimator H_n(p, k).

All sample means divide by n (the number of observations) rather than by
the number of increment terms; the ratio statistics and all limit
results are stated in that normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateIncrementsError, InsufficientDataError, ParameterError

__all__ = [
    "SamplePath",
    "IncrementSeries",
    "HurstEstimate",
    "increments",
    "power_variation",
    "emp_charfn",
    "emp_charfn_grid",
    "estimate_H",
]


@dataclass(frozen=True)
class SamplePath:
    """Ordered real observations X_1, ..., X_n with optional provenance."""

    values: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or vals.size < 1:
            raise ParameterError("path must be a nonempty 1-d array")
        if not np.all(np.isfinite(vals)):
            raise ParameterError("path contains non-finite values")

    @property
    def n(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class IncrementSeries:
    """The k-th order increments at rate r, indexed i = rk + 1..n."""

    values: np.ndarray
    k: int
    r: int


def increments(path: SamplePath, k: int, r: int = 1) -> IncrementSeries:
    """Binomial differences sum_j (-1)^j C(k,j) X_{i-rj} for i = rk..n.

    A k-th order increment annihilates polynomial trends of degree < k.
    """
    if k < 1 or r < 1:
        raise ParameterError(f"k and r must be positive integers, got {k}, {r}")
    n = path.n
    if n < r * k + 1:
        raise InsufficientDataError(
            f"need at least {r * k + 1} observations for order {k} at rate {r}, got {n}"
        )
    x = path.values
    # X_i sits at array index i - 1; the increment at stage i uses
    # X_{i - rk}..X_i, so the fully observed stages are i = rk + 1..n
    out = np.zeros(n - r * k)
    for j in range(k + 1):
        coef = (-1.0) ** j * math.comb(k, j)
        lo = r * (k - j)
        out += coef * x[lo : lo + out.size]
    return IncrementSeries(values=out, k=k, r=r)


def power_variation(path: SamplePath, p: float, k: int, r: int = 1) -> float:
    """psi_n(r) = (1/n) sum_i |Delta_{i,k}^r X|^p.

    The divisor is n, not the term count n - rk + 1.
    """
    if not -1.0 < p < 1.0:
        raise ParameterError(f"p must lie in (-1, 1), got {p}")
    inc = increments(path, k, r).values
    if p <= 0.0 and np.any(inc == 0.0):
        raise DegenerateIncrementsError(
            f"zero increment encountered with p = {p}; "
            "input likely contains constant or polynomial segments"
        )
    if p == 0.0:
        return inc.size / path.n
    return float(np.sum(np.abs(inc) ** p)) / path.n


def emp_charfn(path: SamplePath, t: float, k: int) -> float:
    """phi_n(t) = (1/n) sum_i cos(t * Delta_{i,k} X), rate r = 1."""
    inc = increments(path, k, 1).values
    return float(np.sum(np.cos(t * inc))) / path.n


def emp_charfn_grid(inc: IncrementSeries, ts: np.ndarray, n: int) -> np.ndarray:
    """Vectorized phi_n over a grid of t values, reusing precomputed increments.

    Parameters
    ----------
    inc : IncrementSeries
        Increments at rate 1 of the path.
    ts : array
        Evaluation points.
    n : int
        Length of the original path (the normalizing divisor).
    """
    ts = np.asarray(ts, dtype=float)
    return np.cos(np.outer(ts, inc.values)).sum(axis=1) / n


@dataclass(frozen=True)
class HurstEstimate:
    """Raw log-ratio estimate; in_range is False when the value leaves (0, 1)."""

    value: float
    in_range: bool


def estimate_H(path: SamplePath, p: float = -0.4, k: int = 2) -> HurstEstimate:
    """H_n(p, k) = (1/p) log2(psi_n(2) / psi_n(1)).

    The value is reported raw, never clamped; out-of-range estimates are
    flagged so downstream failure accounting can see them.
    """
    if p == 0.0:
        raise ParameterError("p must be nonzero")
    psi1 = power_variation(path, p, k, 1)
    psi2 = power_variation(path, p, k, 2)
    if psi1 <= 0.0 or psi2 <= 0.0:
        raise DegenerateIncrementsError("power variation vanished; cannot form the ratio")
    value = math.log2(psi2 / psi1) / p
    return HurstEstimate(value=value, in_range=0.0 < value < 1.0)
