"""Closed-form two-point estimator of (sigma, alpha) and order selection.

Evaluating the empirical characteristic function at two points t1 < t2
inverts the model curve exp(-|sigma ||h_k|| t|^alpha) exactly:

    alpha = (log|log phi(t2)| - log|log phi(t1)|) / (log t2 - log t1)
    sigma = (-log phi(t1))^(1/alpha) / (t1 ||h_k||_alpha)

The data-driven increment order k_hat = 2 + floor(1/alpha0) uses a
preliminary alpha fit at k = 1 and guarantees the normal limit regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import LogDomainError, ParameterError
from .model import LfsmParams, alpha_norm
from .contrast import EstimateResult
from .stats import SamplePath, emp_charfn, estimate_H

__all__ = [
    "TwoPointConfig",
    "closed_form_alpha",
    "closed_form_sigma",
    "estimate_classic",
    "select_k_hat",
]


@dataclass(frozen=True)
class TwoPointConfig:
    t1: float = 1.0
    t2: float = 2.0
    p: float = -0.4
    k: int = 2

    def __post_init__(self) -> None:
        if not 0.0 < self.t1 < self.t2:
            raise ParameterError(f"need 0 < t1 < t2, got {self.t1}, {self.t2}")


def closed_form_alpha(phi1: float, phi2: float, t1: float, t2: float) -> float:
    """Invert the stability index from two characteristic-function values.

    No clamping; the caller decides whether the result lies in (0, 2).
    """
    if not (0.0 < phi1 < 1.0 and 0.0 < phi2 < 1.0):
        raise LogDomainError(
            f"characteristic values must lie in (0, 1), got {phi1}, {phi2}"
        )
    num = math.log(abs(math.log(phi2))) - math.log(abs(math.log(phi1)))
    return num / (math.log(t2) - math.log(t1))


def closed_form_sigma(phi1: float, t1: float, alpha: float, hurst: float, k: int) -> float:
    """Invert the scale given alpha and H (through the kernel norm)."""
    if not 0.0 < phi1 < 1.0:
        raise LogDomainError(f"characteristic value must lie in (0, 1), got {phi1}")
    if not 0.0 < alpha < 2.0:
        raise ParameterError(f"alpha must lie in (0, 2), got {alpha}")
    if not 0.0 < hurst < 1.0:
        raise ParameterError(f"hurst must lie in (0, 1), got {hurst}")
    params = LfsmParams(sigma=1.0, alpha=alpha, hurst=hurst)
    return (-math.log(phi1)) ** (1.0 / alpha) / (t1 * alpha_norm(k, params))


def estimate_classic(path: SamplePath, cfg: TwoPointConfig = TwoPointConfig()) -> EstimateResult:
    """Two-point closed-form estimate of the full triple.

    H comes from the log-ratio estimator; any log-domain problem or an
    alpha outside (0, 2) marks the result failed, with best-effort values
    reported for audit.
    """
    hurst = estimate_H(path, cfg.p, cfg.k).value
    phi1 = emp_charfn(path, cfg.t1, cfg.k)
    phi2 = emp_charfn(path, cfg.t2, cfg.k)
    sigma = math.nan
    alpha = math.nan
    failed = False
    try:
        alpha = closed_form_alpha(phi1, phi2, cfg.t1, cfg.t2)
        if not 0.0 < alpha < 2.0:
            failed = True
        else:
            h_for_norm = min(max(hurst, 1e-3), 1.0 - 1e-3)
            sigma = closed_form_sigma(phi1, cfg.t1, alpha, h_for_norm, cfg.k)
    except LogDomainError:
        failed = True
    return EstimateResult(
        sigma=sigma,
        alpha=alpha,
        hurst=hurst,
        objective=math.nan,
        iterations=0,
        converged=not failed,
        failed=failed,
    )


def select_k_hat(path: SamplePath, cfg: TwoPointConfig = TwoPointConfig()) -> tuple[int, bool]:
    """Adaptive order k_hat = 2 + floor(1 / alpha0).

    The preliminary alpha0 uses k = 1, t1 = 1, t2 = 2. Returns
    (k_hat, fallback); fallback is True when the preliminary fit failed
    and the default order 2 was substituted.
    """
    prelim = TwoPointConfig(t1=1.0, t2=2.0, p=cfg.p, k=1)
    try:
        phi1 = emp_charfn(path, prelim.t1, prelim.k)
        phi2 = emp_charfn(path, prelim.t2, prelim.k)
        alpha0 = closed_form_alpha(phi1, phi2, prelim.t1, prelim.t2)
    except LogDomainError:
        return 2, True
    if not 0.0 < alpha0 < 2.0:
        return 2, True
    return 2 + math.floor(1.0 / alpha0), False
