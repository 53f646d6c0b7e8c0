import math

import numpy as np
import pytest
from scipy.stats import norm

from wiretap_lattice.channel import (BATCH, SimConfig, batch_rng, mc_average_theta,
                                     rayleigh_from_uniform, sample_rayleigh,
                                     simulate_correct_decision, sweep)
from wiretap_lattice.coset import build_coset_code
from wiretap_lattice.criteria import FadingParams, average_fading_sum
from wiretap_lattice.errors import DimensionMismatch
from wiretap_lattice.lattice import Lattice, integer_lattice
from wiretap_lattice.oracles import rayleigh_moment


def test_rayleigh_moments():
    rng = batch_rng(0, 0)
    h = sample_rayleigh(2.0, rng, 200000)
    # E h^2 = 2 s2, E h = s sqrt(pi/2)
    assert np.mean(h ** 2) == pytest.approx(4.0, rel=0.01)
    assert np.mean(h) == pytest.approx(math.sqrt(2.0) * math.sqrt(math.pi / 2), rel=0.01)
    assert np.mean(h ** 3) == pytest.approx(rayleigh_moment(2.0, 3), rel=0.02)
    assert rayleigh_from_uniform(math.exp(-0.5), 1.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        sample_rayleigh(0.0, rng)


def test_batches_are_reproducible():
    a = batch_rng(5, 3).random(4)
    b = batch_rng(5, 3).random(4)
    c = batch_rng(5, 4).random(4)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def _code():
    return build_coset_code(integer_lattice(2), integer_lattice(2).scaled(2))


def test_simulation_deterministic_and_prefix_stable():
    params = FadingParams.from_gamma_e(3.0)
    r1 = simulate_correct_decision(SimConfig(_code(), params, 5000, seed=9))
    r2 = simulate_correct_decision(SimConfig(_code(), params, 5000, seed=9))
    assert r1 == r2
    # trials beyond one batch only append new batches
    big = simulate_correct_decision(SimConfig(_code(), params, BATCH + 10, seed=9))
    one = simulate_correct_decision(SimConfig(_code(), params, BATCH, seed=9))
    assert big.successes >= one.successes


def test_bob_without_noise_always_correct():
    cfg = SimConfig(_code(), FadingParams(sigma_b2=1e-8), 2000, who="bob")
    assert simulate_correct_decision(cfg).p_correct == 1.0


def test_gaussian_rounding_probability_1d():
    code = build_coset_code(integer_lattice(1), integer_lattice(1).scaled(64))
    res = simulate_correct_decision(SimConfig(code, FadingParams(sigma_b2=0.25), 100000,
                                              seed=2, who="bob", fading="none"))
    expected = norm.cdf(1.0) - norm.cdf(-1.0)
    assert abs(res.p_correct - expected) <= 4 * res.std_err


def test_exact_decoder_not_worse_than_rounding():
    fine = Lattice.from_rows([[1, 0], [0.9, 0.3]])
    code = build_coset_code(fine, Lattice(fine.generator * 8))
    params = FadingParams(sigma_b2=0.01)
    rnd = simulate_correct_decision(SimConfig(code, params, 3000, seed=4, who="bob"))
    ex = simulate_correct_decision(SimConfig(code, params, 3000, seed=4, who="bob",
                                             decoder="exact"))
    assert ex.successes >= rnd.successes


def test_block_fading_simulation_runs():
    code = build_coset_code(integer_lattice(4), integer_lattice(4).scaled(2))
    res = simulate_correct_decision(SimConfig(code, FadingParams.from_gamma_e(10.0, L=2), 2000))
    assert 0 < res.p_correct < 1
    with pytest.raises(DimensionMismatch):
        SimConfig(code, FadingParams(L=3), 10)


def test_config_validation():
    for kw in ({"trials": 0}, {"decoder": "ml"}, {"who": "carol"}, {"fading": "rician"},
               {"randomizer_box": 0}):
        args = {"trials": 10, **kw}
        with pytest.raises(ValueError):
            SimConfig(_code(), FadingParams(), **args)


def test_mc_average_theta_agrees():
    coarse = integer_lattice(1).scaled(2)
    p = FadingParams(sigma_e2=0.7, sigma_he2=1.3)
    mc = mc_average_theta(coarse, p, 1, 8.0, 50000, seed=1)
    assert abs(mc.value - average_fading_sum(coarse, p, 8.0)) <= 4 * mc.std_err
    with pytest.raises(ValueError):
        mc_average_theta(coarse, p, 1, 8.0, 10)


def test_sweep_trend():
    out = list(sweep(_code(), [20.0, 0.0], trials=20000, seed=3))
    assert out[0][1].p_correct > out[1][1].p_correct
