"""Model-side quantities for the fractional stable moving average.

Everything here is deterministic: the increment kernel of order k at
rate r, its alpha-norm, the limiting characteristic function, and the
regime coefficients beta and q that govern the tail behaviour
h_k(x) ~ q * x^{-beta/alpha}.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ParameterError

__all__ = [
    "LfsmParams",
    "KernelSpec",
    "Regime",
    "kernel_h",
    "alpha_norm",
    "alpha_norm_wide",
    "theo_charfn",
    "beta_coeff",
    "regime_of",
    "q_factor",
]

# Quantization step for the norm memo key; fits re-evaluate the norm at
# thousands of nearby (alpha, H) points, so collisions are intentional
# only below the optimizer's resolution.
_KEY_DECIMALS = 12


@dataclass(frozen=True)
class LfsmParams:
    """The parameter triple (sigma, alpha, H)."""

    sigma: float
    alpha: float
    hurst: float

    def __post_init__(self) -> None:
        if not self.sigma > 0.0:
            raise ParameterError(f"sigma must be positive, got {self.sigma}")
        if not 0.0 < self.alpha < 2.0:
            raise ParameterError(f"alpha must lie in (0, 2), got {self.alpha}")
        if not 0.0 < self.hurst < 1.0:
            raise ParameterError(f"hurst must lie in (0, 1), got {self.hurst}")

    @property
    def kernel_exponent(self) -> float:
        """d = H - 1/alpha, the power of the moving-average kernel."""
        return self.hurst - 1.0 / self.alpha


@dataclass(frozen=True)
class KernelSpec:
    """Order-k, rate-r increment kernel with exponent d = H - 1/alpha."""

    k: int
    r: int
    d: float

    def __post_init__(self) -> None:
        if self.k < 1 or self.r < 1:
            raise ParameterError(f"k and r must be positive integers, got {self.k}, {self.r}")
        if not self.d < 1.0:
            raise ParameterError(f"kernel exponent must be < 1, got {self.d}")

    @classmethod
    def from_params(cls, params: LfsmParams, k: int, r: int = 1) -> "KernelSpec":
        return cls(k=k, r=r, d=params.kernel_exponent)


class Regime(enum.Enum):
    NORMAL = "normal"
    STABLE = "stable"
    BOUNDARY = "boundary"


def kernel_h(spec: KernelSpec, x):
    """Evaluate sum_j (-1)^j C(k,j) (x - r*j)_+^d with 0_+^d = 0.

    Vectorized over x; scalar in, scalar out.
    """
    xv = np.asarray(x, dtype=float)
    out = np.zeros(xv.shape)
    for j in range(spec.k + 1):
        arg = xv - spec.r * j
        pos = arg > 0.0
        if np.any(pos):
            out[pos] += (-1.0) ** j * math.comb(spec.k, j) * arg[pos] ** spec.d
    if np.isscalar(x) or xv.ndim == 0:
        return float(out)
    return out


def _kernel_on_offsets(spec: KernelSpec, base: float, offsets: np.ndarray) -> np.ndarray:
    # Evaluates the kernel at base + offsets without catastrophic
    # cancellation when base is a singular knot and offsets are tiny.
    out = np.zeros_like(offsets)
    with np.errstate(over="ignore"):
        for j in range(spec.k + 1):
            arg = (base - spec.r * j) + offsets
            pos = arg > 0.0
            if np.any(pos):
                out[pos] += (-1.0) ** j * math.comb(spec.k, j) * arg[pos] ** spec.d
    return out


def _tanh_sinh_rule(half_width: float, step: float = 0.1, t_max: float = 5.0):
    """Double-exponential rule on [-half_width, half_width].

    Returns (offsets_from_left, offsets_from_right, weights); splitting the
    abscissae by nearest endpoint keeps full precision at both ends, where
    the kernel has power singularities when d < 0.
    """
    t = np.arange(-t_max, t_max + 0.5 * step, step)
    u = 0.5 * np.pi * np.sinh(t)
    w = half_width * 0.5 * np.pi * np.cosh(t) / np.cosh(u) ** 2 * step
    # distance to the nearer endpoint, computed in a cancellation-free form
    edge = half_width * 2.0 / (1.0 + np.exp(2.0 * np.abs(u)))
    left = u < 0.0
    return t, w, edge, left


_TS_T, _TS_W, _TS_EDGE, _TS_LEFT = _tanh_sinh_rule(1.0)

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)

# Smooth-region layout beyond the last knot: unit intervals up to +10,
# then octave intervals out to +640, then the analytic power tail.
_SMOOTH_UNIT = 10
_SMOOTH_OCTAVES = 6


def _singular_panel(vfunc, a: float, b: float, power: float) -> float:
    """Tanh-sinh panel for integrands with power singularities at a and b.

    vfunc(base, offsets) evaluates the raw integrand at base + offsets in
    a cancellation-free way; abscissae are carried as exact offsets from
    the nearest endpoint, then |value|^power is summed against the rule.
    """
    half = 0.5 * (b - a)
    scaled = half * _TS_EDGE
    good = scaled > 0.0
    vals = np.zeros_like(scaled)
    lm = _TS_LEFT & good
    rm = ~_TS_LEFT & good
    vals[lm] = vfunc(a, scaled[lm])
    vals[rm] = vfunc(b, -scaled[rm])
    with np.errstate(over="ignore"):
        terms = half * _TS_W[good] * np.abs(vals[good]) ** power
    # raw values can overflow at doubly-exponentially small offsets for
    # very negative exponents; the true term there scales like
    # offset^(1 + power*d) with positive exponent, so it is negligible
    return float(np.sum(terms[np.isfinite(terms)]))


def _integrate_kernel_power(spec: KernelSpec, power: float, tail_coeff: float,
                            tail_power: float) -> float:
    """Integrate |h(x)|^power over (0, inf).

    Singular knots at 0, r, ..., rk are handled with tanh-sinh panels;
    the smooth region uses Gauss-Legendre panels; beyond the last panel
    the integrand is replaced by its asymptote
    tail_coeff * (x - rk/2)^{tail_power}, which integrates in closed form.
    """
    r, k = spec.r, spec.k

    def vfunc(base, offsets):
        return _kernel_on_offsets(spec, base, offsets)

    total = 0.0
    for j in range(k):
        total += _singular_panel(vfunc, float(r * j), float(r * (j + 1)), power)
    # first unit panel above the last knot still touches a singularity
    total += _singular_panel(vfunc, float(r * k), float(r * k + 1), power)
    edges = [float(r * k) + 1.0 + i for i in range(_SMOOTH_UNIT)]
    span = float(_SMOOTH_UNIT)
    for _ in range(_SMOOTH_OCTAVES):
        edges.append(edges[-1] + span)
        span *= 2.0
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        xs = a + half * (_GL_NODES + 1.0)
        total += half * float(np.dot(_GL_WEIGHTS, np.abs(kernel_h(spec, xs)) ** power))
    x0 = edges[-1]
    shifted = x0 - 0.5 * r * k
    total += tail_coeff * shifted ** (tail_power + 1.0) / (-(tail_power + 1.0))
    return total


@lru_cache(maxsize=65536)
def _alpha_norm_cached(k: int, r: int, alpha_key: float, hurst_key: float) -> float:
    d = hurst_key - 1.0 / alpha_key
    spec = KernelSpec(k=k, r=r, d=d)
    q = 1.0
    for i in range(k):
        q *= d - i
    beta = 1.0 + alpha_key * (k - hurst_key)
    tail_coeff = (abs(q) * float(r) ** k) ** alpha_key
    tail_power = -beta  # alpha * (d - k) = 1 - beta - 1
    integral = _integrate_kernel_power(spec, alpha_key, tail_coeff, tail_power)
    try:
        return integral ** (1.0 / alpha_key)
    except OverflowError:
        # the 1/alpha root explodes for very small alpha; the limiting
        # value is the honest answer and keeps callers exception-free
        return math.inf


def alpha_norm(k: int, params: LfsmParams, r: int = 1) -> float:
    """The alpha-norm (int_0^inf |h_{k,r}|^alpha dx)^(1/alpha).

    Memoized on (k, r, alpha, H) with the parameters quantized at 1e-12;
    sigma plays no role.
    """
    return alpha_norm_wide(k, params.alpha, params.hurst, r)


def alpha_norm_wide(k: int, alpha: float, hurst: float, r: int = 1) -> float:
    """alpha_norm for any alpha > 0, not just the stable range (0, 2).

    The integral int |h_{k,r}|^alpha dx is finite for every positive
    alpha, and optimizers that roam past alpha = 2 before the fit is
    flagged need it there.
    """
    if not alpha > 0.0:
        raise ParameterError(f"alpha must be positive, got {alpha}")
    if not 0.0 < hurst < 1.0:
        raise ParameterError(f"hurst must lie in (0, 1), got {hurst}")
    # quantizing can land exactly on an excluded endpoint when the input
    # hugs the boundary closer than the key resolution; nudge back inside
    eps = 10.0 ** (-_KEY_DECIMALS)
    alpha_key = max(round(alpha, _KEY_DECIMALS), eps)
    hurst_key = min(max(round(hurst, _KEY_DECIMALS), eps), 1.0 - eps)
    return _alpha_norm_cached(int(k), int(r), alpha_key, hurst_key)


def theo_charfn(params: LfsmParams, k: int, t: float) -> float:
    """Limiting characteristic function exp(-|sigma*||h_k||_alpha*t|^alpha)."""
    if t < 0.0:
        raise ParameterError(f"t must be nonnegative, got {t}")
    scale = params.sigma * alpha_norm(k, params)
    return math.exp(-((scale * t) ** params.alpha))


def beta_coeff(params: LfsmParams, k: int) -> float:
    """beta = 1 + alpha(k - H), the heavy-regime stability index."""
    return 1.0 + params.alpha * (k - params.hurst)


def regime_of(params: LfsmParams, k: int) -> Regime:
    threshold = params.hurst + 1.0 / params.alpha
    if k > threshold:
        return Regime.NORMAL
    if k < threshold:
        return Regime.STABLE
    return Regime.BOUNDARY


def q_factor(params: LfsmParams, k: int) -> float:
    """prod_{i=0}^{k-1} (H - 1/alpha - i), the kernel tail coefficient."""
    d = params.kernel_exponent
    out = 1.0
    for i in range(k):
        out *= d - i
    return out
