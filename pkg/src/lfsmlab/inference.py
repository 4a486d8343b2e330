"""Feasible confidence regions: parametric bootstrap and subsampling.

The limit covariance of the contrast estimator is not computable in
closed form, so both constructions estimate the sampling variability
empirically: the bootstrap refits on fresh paths simulated from the
fitted parameter, subsampling refits on disjoint blocks of the observed
path and rescales the block deviations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict

import numpy as np
from scipy.stats import norm as _normal

from .errors import (
    ConfigurationError,
    EstimationFailedError,
    UnreliableRegionError,
)
from .contrast import (
    EstimateResult,
    EstimatorConfig,
    estimate_mce,
    fit_theta,
    quad_rule,
)
from .classic import select_k_hat
from .model import LfsmParams
from .simulate import SimConfig, simulate_lfsm
from .stable import RngStream
from .stats import SamplePath, emp_charfn_grid, estimate_H, increments

__all__ = ["ConfidenceRegion", "bootstrap_ci", "subsample_ci"]

_COORDS = ("sigma", "alpha", "hurst")


@dataclass(frozen=True)
class ConfidenceRegion:
    """Per-parameter intervals around the point estimate.

    scales holds the standard errors (bootstrap) or the deviation
    quantiles (subsampling); n_dropped counts resampled fits that failed
    and were excluded.
    """

    estimate: EstimateResult
    intervals: dict
    method: str
    level: float
    tuning: int
    n_used: int
    n_dropped: int
    scales: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name, (lo, hi) in self.intervals.items():
            if lo > hi:
                raise ConfigurationError(f"interval for {name} has lo > hi")

    def contains(self, name: str, value: float) -> bool:
        lo, hi = self.intervals[name]
        return lo <= value <= hi

    def to_dict(self) -> dict:
        out = asdict(self)
        out["estimate"] = self.estimate.to_dict()
        return out


def _as_triple(res: EstimateResult) -> np.ndarray:
    return np.array([res.sigma, res.alpha, res.hurst])


def bootstrap_ci(path: SamplePath, cfg: EstimatorConfig, N: int, rng: RngStream,
                 level: float = 0.95, m: int = 256, M: int = 600) -> ConfidenceRegion:
    """Parametric bootstrap region around the minimal contrast estimate.

    Fits xi_n, simulates N fresh length-n paths from xi_n, refits each,
    and builds normal-approximation intervals from the empirical
    covariance of the refits. Failed refits are dropped and counted; more
    than half failing aborts with an error.
    """
    if N < 2:
        raise ConfigurationError(f"need N >= 2 bootstrap resamples, got {N}")
    base = estimate_mce(path, cfg)
    if base.failed or not (0.0 < base.hurst < 1.0):
        raise EstimationFailedError(
            "original fit unusable for bootstrap "
            f"(sigma={base.sigma:.4g}, alpha={base.alpha:.4g}, hurst={base.hurst:.4g})"
        )
    fitted = LfsmParams(sigma=base.sigma, alpha=base.alpha, hurst=base.hurst)
    refits = []
    dropped = 0
    for j in range(N):
        sim = SimConfig(
            params=fitted, n=path.n, m=m, M=M,
            seed=RngStream(rng.seed, rng.stream + j),
        )
        res = estimate_mce(simulate_lfsm(sim), cfg)
        if res.failed:
            dropped += 1
        else:
            refits.append(_as_triple(res))
    if dropped > N // 2:
        raise UnreliableRegionError(
            f"{dropped} of {N} bootstrap refits failed; region not trustworthy"
        )
    arr = np.array(refits)
    se = arr.std(axis=0, ddof=1) if arr.shape[0] > 1 else np.zeros(3)
    z = _normal.ppf(0.5 + level / 2.0)
    center = _as_triple(base)
    intervals = {
        name: (float(center[i] - z * se[i]), float(center[i] + z * se[i]))
        for i, name in enumerate(_COORDS)
    }
    return ConfidenceRegion(
        estimate=base,
        intervals=intervals,
        method="bootstrap",
        level=level,
        tuning=N,
        n_used=len(refits),
        n_dropped=dropped,
        scales={name: float(se[i]) for i, name in enumerate(_COORDS)},
    )


def subsample_ci(path: SamplePath, L: int, cfg: EstimatorConfig,
                 level: float = 0.95) -> ConfidenceRegion:
    """Blockwise subsampling region around the minimal contrast estimate.

    The path is split into L consecutive groups. The full sample fixes
    the order k_hat and the estimate xi_n; each group refits with its own
    order but uses the full-sample H as plug-in for the (sigma, alpha)
    contrast. Deviations sqrt(n/L) (est_l - est_full) supply the empirical
    2.5%/97.5% quantiles that get inverted into the interval.
    """
    n = path.n
    if L < 2 or n % L != 0:
        raise ConfigurationError(f"L = {L} must be >= 2 and divide n = {n}")
    g = n // L
    k_hat, _ = select_k_hat(path)
    cfg_full = EstimatorConfig(
        p=cfg.p, k=k_hat, nu=cfg.nu, quad_order=cfg.quad_order,
        start=cfg.start, sigma_max=cfg.sigma_max, optimizer=cfg.optimizer,
    )
    base = estimate_mce(path, cfg_full)
    if base.failed:
        raise EstimationFailedError("full-sample fit failed; cannot subsample")
    h_plug = base.hurst
    nodes, _ = quad_rule(cfg.nu, cfg.quad_order)

    deviations = []
    dropped = 0
    scale = math.sqrt(n / L)
    for l in range(L):
        group = SamplePath(values=path.values[l * g : (l + 1) * g])
        try:
            k_l, _ = select_k_hat(group)
            h_l = estimate_H(group, cfg.p, k_l).value
            inc = increments(group, k_l, 1)
            phi_vals = emp_charfn_grid(inc, nodes, inc.values.size)
            theta_l = fit_theta(phi_vals, h_plug, cfg_full, k=k_l)
        except Exception:
            dropped += 1
            continue
        if theta_l.failed:
            dropped += 1
            continue
        est_l = np.array([theta_l.sigma, theta_l.alpha, h_l])
        deviations.append(scale * (est_l - _as_triple(base)))
    if dropped > L // 2:
        raise UnreliableRegionError(
            f"{dropped} of {L} group fits failed; region not trustworthy"
        )
    dev = np.array(deviations)
    tail = (1.0 - level) / 2.0
    q_lo = np.quantile(dev, tail, axis=0)
    q_hi = np.quantile(dev, 1.0 - tail, axis=0)
    center = _as_triple(base)
    root_n = math.sqrt(n)
    intervals = {
        name: (float(center[i] - q_hi[i] / root_n), float(center[i] - q_lo[i] / root_n))
        for i, name in enumerate(_COORDS)
    }
    return ConfidenceRegion(
        estimate=base,
        intervals=intervals,
        method="subsampling",
        level=level,
        tuning=L,
        n_used=len(deviations),
        n_dropped=dropped,
        scales={
            name: (float(q_lo[i]), float(q_hi[i])) for i, name in enumerate(_COORDS)
        },
    )
