"""Test module hetcache.conventional
"""

import math
import pytest
import scipy.integrate
from hetcache.conventional import *
from hetcache.exception import *
from hetcache.geometry import tier_stats
from conftest import *

C_BH = 10e6 / 20e6 * math.log(2.0)


def test_log1p_ratio():
    assert log1p_ratio(0.0) == 1.0
    assert log1p_ratio(1e-12) == pytest.approx(1.0)
    assert log1p_ratio(1.0) == pytest.approx(math.log(2.0))
    assert log1p_ratio(1e-5) == pytest.approx(math.log1p(1e-5) / 1e-5,
                                              rel=1e-12)

def test_report_units():
    r = RateReport(1.0, 0.5, math.log(2.0), Method.INTEGRAL)
    assert r.ase_bps == pytest.approx(1.0)
    assert r.standard_error is None

@pytest.mark.parametrize("method", [Method.INTEGRAL, Method.CLOSED_FORM])
def test_pico_rate_zero_backhaul(method):
    config = ref_network(backhaul_mbps=0)
    if method == Method.INTEGRAL:
        assert mean_rate_pico_integral(config) == 0.0
    else:
        assert mean_rate_pico_closed(config) == 0.0

def test_pico_rate_cap():
    config = ref_network()
    assert config.backhaul_capacity == pytest.approx(C_BH)
    r2 = mean_rate_pico_integral(config)
    assert 0 < r2 <= config.backhaul_capacity

def test_pico_rate_infinite_backhaul():
    config = ref_network(backhaul_mbps=None)
    assert math.isinf(config.backhaul_capacity)
    with pytest.raises(PreconditionError):
        mean_rate_pico_integral(config)
    with pytest.raises(PreconditionError):
        mean_rate_pico_closed(config)

def test_pico_rate_nondecreasing_in_backhaul():
    rates = [mean_rate_pico_integral(ref_network(backhaul_mbps=c))
             for c in (1, 5, 10, 20, 40)]
    assert all(b >= a for a, b in zip(rates, rates[1:]))

def test_pico_closed_concave_in_backhaul():
    caps = [2, 4, 6, 8, 10]
    rates = [mean_rate_pico_closed(ref_network(backhaul_mbps=c)) for c in caps]
    steps = [b - a for a, b in zip(rates, rates[1:])]
    assert all(s > 0 for s in steps)
    assert all(t < s for s, t in zip(steps, steps[1:]))

def test_pico_closed_all_active():
    """With all BSs active, the closed form reduces to a plain log.
    """
    config = ref_network(user_density_per_macro_cell=1e7)
    s1, s2 = tier_stats(config)
    assert s1.active_prob == pytest.approx(1.0, abs=1e-9)
    assert s2.active_prob == pytest.approx(1.0, abs=1e-9)
    a = config.tier1.alpha
    c = config.backhaul_capacity
    expected = (a - 2) / 2 * math.log1p(2 * c / (a - 2))
    assert mean_rate_pico_closed(config) == pytest.approx(expected, rel=1e-8)

def test_macro_rate_single_tier():
    """A single tier network compared with a direct quadrature of the
    coverage probability.
    """
    mpmath = pytest.importorskip("mpmath")
    config = ref_network(lambda2=0,
                    tier1={"density_per_macro_cell": 1, "power_dbm": 46,
                           "antennas": 1, "alpha": 3.7})
    p = tier_stats(config)[0].active_prob
    delta = 2 / 3.7
    def f(x):
        z = float(mpmath.hyp2f1(-delta, 1, 1 - delta, -math.expm1(x))) - 1
        return 1 / (1 + p * z)
    ref, _ = scipy.integrate.quad(f, 0, 80, limit=200)
    assert mean_rate_macro_integral(config) == pytest.approx(ref, rel=1e-6)

def test_macro_rate_exceeds_starved_pico():
    config = ref_network()
    assert config.backhaul_capacity < math.log(2.0)
    assert mean_rate_macro_integral(config) > mean_rate_pico_integral(config)

def test_integral_paths_agree():
    """The double integral, forced by a negligible noise power, agrees
    with the single integral used without noise.
    """
    config = ref_network()
    noisy = config.replace(noise_power=1e-30)
    assert mean_rate_macro_integral(noisy) == pytest.approx(
        mean_rate_macro_integral(config), rel=1e-6)
    assert mean_rate_pico_integral(noisy) == pytest.approx(
        mean_rate_pico_integral(config), rel=1e-6)

def test_noise_lowers_rate():
    config = ref_network()
    noisy = config.replace(noise_power=1e-9)
    assert mean_rate_macro_integral(noisy) < mean_rate_macro_integral(config)

def test_unequal_alpha():
    config = ref_network().with_tier(2, alpha=4.0)
    report = ase_conventional(config, Method.INTEGRAL)
    assert report.ase > 0
    assert 0 < report.mean_rate_tier2 <= config.backhaul_capacity
    with pytest.raises(PreconditionError):
        ase_conventional(config, Method.CLOSED_FORM)

def test_closed_form_needs_zero_noise():
    config = ref_network().replace(noise_power=1e-12)
    with pytest.raises(PreconditionError):
        mean_rate_macro_closed(config)

def test_macro_closed_form_gap():
    """The two piece approximation of Z underestimates the macro rate
    by about 7.5% at every density.
    """
    for lambda2 in (1, 10, 50, 100):
        config = ref_network(lambda2=lambda2)
        gap = (mean_rate_macro_closed(config)
               / mean_rate_macro_integral(config) - 1.0)
        assert -0.09 < gap < -0.06

@pytest.mark.parametrize("lambda2", [1, 10, 50, 100])
def test_pico_closed_form_close_to_integral(lambda2):
    config = ref_network(lambda2=lambda2)
    assert mean_rate_pico_closed(config) == pytest.approx(
        mean_rate_pico_integral(config), rel=0.015)

@pytest.mark.parametrize(("lambda2", "gap"), [
    (0, -0.0741),
    (1, -0.0678),
    (10, -0.0409),
    (20, -0.0309),
    (50, -0.0222),
    (100, -0.0191),
])
def test_closed_form_ase_gap(lambda2, gap):
    config = ref_network(lambda2=lambda2)
    closed = ase_conventional(config, Method.CLOSED_FORM).ase
    integral = ase_conventional(config, Method.INTEGRAL).ase
    assert closed / integral - 1.0 == pytest.approx(gap, abs=0.005)

def test_pico_rate_follows_backhaul():
    """The pico rate is capped by the backhaul, it approaches the
    capacity for a thin backhaul and the uncapped rate for a wide one.
    """
    rates = []
    for c in (0.01, 1, 10, 100):
        config = ref_network(backhaul_mbps=c)
        rate = mean_rate_pico_integral(config)
        assert rate <= config.backhaul_capacity * (1 + 1e-9)
        rates.append(rate)
    assert all(b > a for a, b in zip(rates, rates[1:]))
    thin = ref_network(backhaul_mbps=0.01)
    assert rates[0] == pytest.approx(thin.backhaul_capacity, rel=1e-2)
    wide = ref_network(backhaul_mbps=None, backhaul_nats=100)
    uncapped = ase_conventional(ref_network(backhaul_mbps=None),
                                Method.INTEGRAL).mean_rate_tier2
    assert mean_rate_pico_integral(wide) == pytest.approx(uncapped,
                                                          rel=1e-5)
    assert mean_rate_pico_closed(config) == pytest.approx(
        mean_rate_pico_integral(config), rel=0.15)

def test_ase_single_tier():
    config = ref_network(lambda2=0)
    report = ase_conventional(config)
    s1 = tier_stats(config)[0]
    assert report.mean_rate_tier2 == 0.0
    expected = (s1.active_prob * config.tier1.density
                * config.tier1.antennas * report.mean_rate_tier1)
    assert report.ase == pytest.approx(expected)

def test_ase_combination():
    config = ref_network()
    report = ase_conventional(config, Method.INTEGRAL)
    s1, s2 = tier_stats(config)
    expected = (s1.active_density * 4 * report.mean_rate_tier1
                + s2.active_density * report.mean_rate_tier2)
    assert report.ase == pytest.approx(expected)
    assert report.method == Method.INTEGRAL
    assert report.mean_rate_tier2 <= config.backhaul_capacity

def test_ase_nondecreasing_in_backhaul():
    values = [ase_conventional(ref_network(backhaul_mbps=c)).ase
              for c in (1, 10, 100, 1000)]
    assert all(b >= a for a, b in zip(values, values[1:]))

def test_ase_large_backhaul():
    """A large backhaul capacity is as good as none.
    """
    capped = ref_network(backhaul_mbps=None, backhaul_nats=100)
    uncapped = ref_network(backhaul_mbps=None)
    assert ase_conventional(capped).ase == pytest.approx(
        ase_conventional(uncapped).ase, rel=1e-5)

def test_ase_nondecreasing_in_density():
    values = [ase_conventional(ref_network(lambda2=l), Method.CLOSED_FORM).ase
              for l in (1, 3, 10, 30, 100)]
    assert all(b >= a for a, b in zip(values, values[1:]))

def test_ase_invalid_config():
    config = ref_network().with_tier(1, alpha=1.5)
    with pytest.raises(PreconditionError):
        ase_conventional(config)
