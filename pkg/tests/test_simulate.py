import math

import numpy as np
import pytest

from lfsmlab.errors import ParameterError, ResourceLimitError
from lfsmlab.model import LfsmParams
from lfsmlab.simulate import SimConfig, simulate_lfsm, self_similarity_check
from lfsmlab.stable import RngStream
from lfsmlab.stats import SamplePath, power_variation


def _cfg(n=4000, sigma=0.3, alpha=1.8, hurst=0.8, seed=0, stream=0, **kw):
    params = LfsmParams(sigma=sigma, alpha=alpha, hurst=hurst)
    return SimConfig(params=params, n=n, seed=RngStream(seed, stream), **kw)


def test_config_validation():
    params = LfsmParams(sigma=0.3, alpha=1.8, hurst=0.8)
    with pytest.raises(ParameterError):
        SimConfig(params=params, n=0, seed=RngStream(0, 0))
    with pytest.raises(ParameterError):
        SimConfig(params=params, n=10, m=0, seed=RngStream(0, 0))


def test_deterministic():
    a = simulate_lfsm(_cfg())
    b = simulate_lfsm(_cfg())
    np.testing.assert_array_equal(a.values, b.values)


def test_streams_differ():
    a = simulate_lfsm(_cfg(stream=0))
    b = simulate_lfsm(_cfg(stream=1))
    assert not np.array_equal(a.values, b.values)


def test_meta_provenance():
    path = simulate_lfsm(_cfg(seed=9, stream=2))
    assert path.meta["seed"] == 9
    assert path.meta["stream"] == 2
    assert path.meta["m"] == 256
    assert path.meta["M"] == 600
    assert path.n == 4000


def test_resource_cap():
    with pytest.raises(ResourceLimitError):
        simulate_lfsm(_cfg(n=10_000_000, m=256))


def test_levy_motion_degeneracy():
    # H = 1/alpha collapses the moving-average kernel to an indicator,
    # so unit-lag increments are i.i.d. SaS(sigma); check the empirical
    # characteristic function at a few points
    alpha = 1.25
    path = simulate_lfsm(_cfg(n=50_000, alpha=alpha, hurst=1.0 / alpha, seed=33))
    inc = np.diff(path.values)
    for u in (0.5, 1.0, 2.0):
        c = np.cos(u * inc)
        target = math.exp(-((0.3 * u) ** alpha))
        assert abs(c.mean() - target) <= 3.0 * c.std(ddof=1) / math.sqrt(inc.size)


def test_stationary_increment_halves_agree():
    path = simulate_lfsm(_cfg(n=20_000, seed=14))
    half = path.n // 2
    p = -0.4

    def psi_and_se(vals):
        sub = SamplePath(values=vals)
        psi = power_variation(sub, p, 1, 1)
        groups = 10
        g = vals.size // groups
        reps = [
            power_variation(SamplePath(values=vals[i * g:(i + 1) * g]), p, 1, 1)
            for i in range(groups)
        ]
        return psi, np.std(reps, ddof=1) / math.sqrt(groups)

    a, sa = psi_and_se(path.values[:half])
    b, sb = psi_and_se(path.values[half:])
    assert abs(a - b) <= 3.0 * math.hypot(sa, sb)


def test_mesh_refinement_below_noise():
    # doubling the mesh moves psi by less than the Monte Carlo noise
    p = -0.4
    coarse = simulate_lfsm(_cfg(n=8000, seed=15, m=256))
    fine = simulate_lfsm(_cfg(n=8000, seed=15, m=512))
    groups = 20
    g = coarse.n // groups
    reps = [
        power_variation(SamplePath(values=coarse.values[i * g:(i + 1) * g]), p, 1, 1)
        for i in range(groups)
    ]
    se = np.std(reps, ddof=1) / math.sqrt(groups)
    a = power_variation(coarse, p, 1, 1)
    b = power_variation(fine, p, 1, 1)
    assert abs(a - b) <= 3.0 * se


def test_self_similarity_report():
    report = self_similarity_check(_cfg(n=16_000, seed=5), a=2)
    assert report["target"] == pytest.approx(2.0 ** (-0.4 * 0.8))
    assert report["ok"]
    assert isinstance(report["ok"], bool)


def test_self_similarity_a_validation():
    with pytest.raises(ParameterError):
        self_similarity_check(_cfg(), a=0)
