"""Numeric limit-theory quantities used as property-test targets.

None of these feed the estimators; they exist so the covariance-type
functionals and tail constants appearing in the asymptotic theory can be
checked against their stated bounds and limits:

  * U_{g,h}(u, v): the dependence measure built from joint stable norms,
  * rho_l: the covariance-summability integral of shifted kernels,
  * Phi_{t,eta} and its x-derivatives,
  * Phi^1_r, Phi^2_t, the series Phi-bar, and the constants kappa_1, kappa_2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import ParameterError
from .model import (
    KernelSpec,
    LfsmParams,
    _GL_NODES,
    _GL_WEIGHTS,
    _SMOOTH_OCTAVES,
    _SMOOTH_UNIT,
    _kernel_on_offsets,
    _singular_panel,
    alpha_norm,
    beta_coeff,
    kernel_h,
    q_factor,
)
from .stable import a_p_constant

__all__ = [
    "GridFunction",
    "dep_measure_U",
    "rho_l",
    "phi_t_eta",
    "phi2",
    "phi1_r",
    "kappa1",
    "phi_bar",
    "kappa2",
]


@dataclass(frozen=True)
class GridFunction:
    """A kernel sampled on a uniform grid with power-tail metadata.

    Beyond x_max the function is treated as tail_coeff * x^(-tail_exp);
    tail_coeff may be zero for compactly supported functions.
    """

    values: np.ndarray
    delta: float
    tail_coeff: float
    tail_exp: float

    def __post_init__(self) -> None:
        if not self.delta > 0.0:
            raise ParameterError(f"delta must be positive, got {self.delta}")
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if not np.all(np.isfinite(vals)):
            raise ParameterError("grid values must be finite")

    @property
    def x_max(self) -> float:
        return (self.values.size - 1) * self.delta

    @classmethod
    def from_kernel(cls, k: int, params: LfsmParams, x_max: float = 200.0,
                    delta: float = 1e-3, shift: float = 0.0) -> "GridFunction":
        spec = KernelSpec.from_params(params, k)
        xs = np.arange(0.0, x_max + 0.5 * delta, delta)
        beta = beta_coeff(params, k)
        return cls(
            values=kernel_h(spec, xs + shift),
            delta=delta,
            tail_coeff=q_factor(params, k),
            tail_exp=beta / params.alpha,
        )


def _combo_power_integral(terms, alpha: float) -> float:
    """int_0^inf |sum_i c_i g_i(x)|^alpha dx for grid functions on one grid.

    Head by trapezoid on the shared grid, tail in closed form from the
    power asymptotes; mixing different tail exponents is only supported
    when at most one term has a nonzero tail.
    """
    coefs = [c for c, _ in terms]
    funcs = [g for _, g in terms]
    delta = funcs[0].delta
    size = funcs[0].values.size
    for g in funcs[1:]:
        if g.delta != delta or g.values.size != size:
            raise ParameterError("grid functions must share the same grid")
    combined = sum(c * g.values for c, g in terms)
    head = float(np.trapezoid(np.abs(combined) ** alpha, dx=delta))
    live = [(c, g) for c, g in terms if c != 0.0 and g.tail_coeff != 0.0]
    if not live:
        return head
    exps = {g.tail_exp for _, g in live}
    if len(exps) > 1:
        raise ParameterError("cannot combine tails with different exponents")
    e = exps.pop()
    if alpha * e <= 1.0:
        raise ParameterError("tail is not integrable at this alpha")
    tail_c = abs(sum(c * g.tail_coeff for c, g in live)) ** alpha
    x_max = funcs[0].x_max
    return head + tail_c * x_max ** (1.0 - alpha * e) / (alpha * e - 1.0)


def dep_measure_U(g: GridFunction, h: GridFunction, sigma: float, alpha: float,
                  u: float, v: float) -> float:
    """U_{g,h}(u,v) = exp(-s^a ||ug+vh||^a) - exp(-s^a (||ug||^a + ||vh||^a))."""
    n_joint = _combo_power_integral([(u, g), (v, h)], alpha)
    n_u = _combo_power_integral([(u, g)], alpha)
    n_v = _combo_power_integral([(v, h)], alpha)
    s = sigma ** alpha
    return math.exp(-s * n_joint) - math.exp(-s * (n_u + n_v))


def rho_l(k: int, params: LfsmParams, l: int) -> float:
    """rho_l = int_0^inf |h_k(x) h_k(x + l)|^(alpha/2) dx.

    Same quadrature strategy as the kernel norm: tanh-sinh panels at the
    integer knots where either factor is singular, Gauss-Legendre panels
    on the smooth region, closed-form power tail. rho is even in l.
    """
    l = abs(int(l))
    spec = KernelSpec.from_params(params, k)
    alpha = params.alpha
    power = 0.5 * alpha

    def vfunc(base, offsets):
        return _kernel_on_offsets(spec, base, offsets) * _kernel_on_offsets(
            spec, base + l, offsets
        )

    total = 0.0
    for j in range(k):
        total += _singular_panel(vfunc, float(j), float(j + 1), power)
    total += _singular_panel(vfunc, float(k), float(k + 1), power)
    edges = [float(k) + 1.0 + i for i in range(_SMOOTH_UNIT)]
    span = float(_SMOOTH_UNIT)
    for _ in range(_SMOOTH_OCTAVES):
        edges.append(edges[-1] + span)
        span *= 2.0
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        xs = a + half * (_GL_NODES + 1.0)
        vals = np.abs(kernel_h(spec, xs) * kernel_h(spec, xs + l)) ** power
        total += half * float(np.dot(_GL_WEIGHTS, vals))
    beta = beta_coeff(params, k)
    q = abs(q_factor(params, k))
    x0 = edges[-1]
    shifted = x0 - 0.5 * k + 0.5 * l
    total += q ** alpha * shifted ** (1.0 - beta) / (beta - 1.0)
    return total


def phi_t_eta(t: float, eta: float, x: float, alpha: float, v: int = 0) -> float:
    """Phi_{t,eta}(x) = (cos(xt) - 1) exp(-|eta t|^alpha) and x-derivatives."""
    if eta <= 0.0 or t < 0.0:
        raise ParameterError("need eta > 0 and t >= 0")
    g = math.exp(-((eta * t) ** alpha))
    if v == 0:
        return (math.cos(x * t) - 1.0) * g
    if v == 1:
        return -t * math.sin(x * t) * g
    if v == 2:
        return -t * t * math.cos(x * t) * g
    raise ParameterError(f"derivative order must be 0, 1 or 2, got {v}")


def phi2(t: float, x: float, params: LfsmParams, k: int) -> float:
    """Phi^2_t(x) = (cos(tx) - 1) exp(-|sigma ||h_k|| t|^alpha)."""
    eta = params.sigma * alpha_norm(k, params)
    return phi_t_eta(t, eta, x, params.alpha)


def phi1_r(r: int, x: float, params: LfsmParams, p: float, k: int) -> float:
    """Phi^1_r(x) = a_p^{-1} int (1-cos(ux)) exp(-|c u|^alpha) |u|^{-1-p} du.

    Here c = sigma ||h_{k,r}||_alpha. The oscillatory part is handled by
    Fourier-weighted quadrature; for p < 0 the flat and cosine pieces are
    integrated separately, which is safe since each converges on its own.
    """
    if x == 0.0:
        return 0.0
    c = params.sigma * alpha_norm(k, params, r=r)
    alpha = params.alpha
    w = abs(x)

    def flat(u):
        if u <= 0.0:
            # integrable endpoint singularity; some weighted rules probe u = 0
            return 0.0
        return math.exp(-((c * u) ** alpha)) * u ** (-1.0 - p)

    if p < 0.0:
        i_flat = quad(flat, 0.0, 1.0, epsabs=1e-12, epsrel=1e-11)[0]
        i_flat += quad(flat, 1.0, np.inf, epsabs=1e-12, epsrel=1e-11)[0]
        i_cos = quad(flat, 0.0, 1.0, weight="cos", wvar=w, limit=400)[0]
        i_cos += quad(flat, 1.0, np.inf, weight="cos", wvar=w, limit=400)[0]
        return 2.0 * (i_flat - i_cos) / a_p_constant(p)
    head = quad(lambda u: (1.0 - math.cos(u * w)) * flat(u), 0.0, 1.0,
                epsabs=1e-12, epsrel=1e-11, limit=800)[0]
    i_flat = quad(flat, 1.0, np.inf, epsabs=1e-12, epsrel=1e-11)[0]
    i_cos = quad(flat, 1.0, np.inf, weight="cos", wvar=w, limit=400)[0]
    return 2.0 * (head + i_flat - i_cos) / a_p_constant(p)


def kappa1(r: int, params: LfsmParams, p: float, k: int,
           gl_order: int = 8, z_max: float = 1e4, levels: int = 30) -> float:
    """kappa_1(r) = (alpha/beta) int_0^inf Phi^1_r(q z) z^{-1-alpha/beta} dz.

    Dyadic Gauss-Legendre panels resolve the z -> 0 power behaviour,
    octave panels cover [1, z_max], and beyond z_max Phi^1 is replaced by
    its exact large-argument limit |qz|^p, giving a closed-form tail.
    """
    alpha = params.alpha
    beta = beta_coeff(params, k)
    q = q_factor(params, k)
    expo = alpha / beta
    if p >= expo:
        raise ParameterError("z-tail diverges unless p < alpha/beta")
    nodes, weights = np.polynomial.legendre.leggauss(gl_order)

    def panel(a, b):
        half = 0.5 * (b - a)
        acc = 0.0
        for s, wgt in zip(a + half * (nodes + 1.0), weights):
            acc += wgt * phi1_r(r, q * s, params, p, k) * s ** (-1.0 - expo)
        return half * acc

    total = 0.0
    for i in range(levels):
        total += panel(2.0 ** (-i - 1), 2.0 ** (-i))
    octaves = int(math.ceil(math.log2(z_max)))
    z = 1.0
    for _ in range(octaves):
        total += panel(z, min(2.0 * z, z_max))
        z = min(2.0 * z, z_max)
    # beyond z_max replace Phi^1 by its large-argument limit: for p < 0
    # the (1 - cos) average of 1 dominates and Phi^1 tends to the
    # constant 2 c^p Gamma(-p/alpha) / (alpha a_p); for p in (0, 1) the
    # bare-power identity gives |qz|^p minus the same-type constant
    c = params.sigma * alpha_norm(k, params, r=r)
    if p < 0.0:
        phi1_inf = 2.0 * c ** p * math.gamma(-p / alpha) / (alpha * a_p_constant(p))
        total += phi1_inf * z_max ** (-expo) / expo
    else:
        flat_gap = quad(
            lambda u: (1.0 - math.exp(-((c * u) ** alpha))) * u ** (-1.0 - p),
            0.0, np.inf, epsabs=1e-12, epsrel=1e-11,
        )[0]
        c2 = 2.0 * flat_gap / a_p_constant(p)
        total += abs(q) ** p * z_max ** (p - expo) / (expo - p)
        total -= c2 * z_max ** (-expo) / expo
    return expo * total


def phi_bar(t: float, x: float, params: LfsmParams, k: int,
            tol: float = 1e-14, chunk: int = 1 << 16) -> float:
    """Phi-bar_t(x) = sum_{i>=1} Phi^2_t(h_k(i) x).

    The series is summed in chunks until the envelope bound
    |Phi^2_t(y)| <= g(t) |yt|^2 pushes the terms below tol; the remaining
    mass is added via the analytic remainder of that quadratic envelope.
    """
    if x == 0.0 or t == 0.0:
        return 0.0
    spec = KernelSpec.from_params(params, k)
    eta = params.sigma * alpha_norm(k, params)
    g = math.exp(-((eta * t) ** params.alpha))
    beta = beta_coeff(params, k)
    decay = 2.0 * beta / params.alpha
    if decay <= 1.0:
        raise ParameterError("series does not converge for these parameters")
    q = abs(q_factor(params, k))
    total = 0.0
    start = 1
    while True:
        idx = np.arange(start, start + chunk, dtype=float)
        y = kernel_h(spec, idx) * x
        total += g * float(np.sum(np.cos(t * y) - 1.0))
        start += chunk
        # envelope of the next chunk's first term
        env = g * (q * start ** (-beta / params.alpha) * x * t) ** 2
        if env < tol:
            break
        if start > (1 << 31):
            break
    # quadratic-envelope remainder of everything past the last index
    rem = 0.5 * g * (q * x * t) ** 2 * start ** (1.0 - decay) / (decay - 1.0)
    return total - rem


def kappa2(t: float, params: LfsmParams, k: int) -> float:
    """kappa_2(t) = (alpha/beta) int_0^inf Phi^2_t(q z) z^{-1-alpha/beta} dz.

    Always <= 0. The constant exponential factor pulls out of the
    integral; the remaining (cos - 1) power integral is split at z = 1
    with a Fourier-weighted tail, as for a_p.
    """
    if t == 0.0:
        return 0.0
    alpha = params.alpha
    beta = beta_coeff(params, k)
    expo = alpha / beta
    if not 0.0 < expo < 2.0:
        raise ParameterError("integral requires alpha/beta in (0, 2)")
    c = abs(t * q_factor(params, k))
    g = math.exp(-((params.sigma * alpha_norm(k, params) * t) ** alpha))
    head = quad(lambda z: (math.cos(c * z) - 1.0) * z ** (-1.0 - expo), 0.0, 1.0,
                epsabs=1e-13, epsrel=1e-12, limit=400)[0]
    tail = -1.0 / expo + quad(lambda z: z ** (-1.0 - expo), 1.0, np.inf,
                              weight="cos", wvar=c)[0]
    return expo * g * (head + tail)
