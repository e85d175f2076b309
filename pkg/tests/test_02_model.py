"""Test module hetcache.model
"""

import math
import warnings
import numpy as np
import pytest
from hetcache.exception import *
from hetcache.model import *
from conftest import *


@pytest.mark.parametrize(("value", "from_unit", "to_unit", "bw", "expected"), [
    (1.0, "nats/s/Hz", "bps/Hz", None, 1.0 / math.log(2.0)),
    (1.0, "bps/Hz", "nats/s/Hz", None, math.log(2.0)),
    (10.0, "Mbps", "bps/Hz", 20e6, 0.5),
    (0.5, "bps/Hz", "kbps", 20e6, 1.0e4),
    (10.0, "Mbps", "nats/s/Hz", 20e6, 0.5 * math.log(2.0)),
    (2.0, "Gbps", "Mbps", 1.0e6, 2000.0),
])
def test_convert_rate_units(value, from_unit, to_unit, bw, expected):
    v = convert_rate_units(value, from_unit, to_unit, bw)
    assert v == pytest.approx(expected, rel=1e-12)

def test_convert_rate_units_errors():
    with pytest.raises(ArgError):
        convert_rate_units(1.0, "furlongs", "bps/Hz")
    with pytest.raises(ArgError):
        convert_rate_units(1.0, "Mbps", "bps/Hz")

def test_power_conversion():
    assert dbm_to_watt(30.0) == pytest.approx(1.0)
    assert dbm_to_watt(46.0) == pytest.approx(39.81071705534972)
    assert watt_to_dbm(dbm_to_watt(21.0)) == pytest.approx(21.0)
    # -174 dBm/Hz + 73 dB (20 MHz) + 9 dB noise figure
    assert watt_to_dbm(thermal_noise(20e6)) == pytest.approx(-92.0, abs=0.02)

def test_reference_values():
    """The reference network is set up as expected.
    """
    config = ref_network()
    assert config.tier1.density == pytest.approx(1 / MACRO)
    assert config.tier2.density == pytest.approx(50 / MACRO)
    assert config.user_density == pytest.approx(50 / MACRO)
    assert config.tier1.power_dbm == pytest.approx(46.0)
    assert config.tier2.power_dbm == pytest.approx(21.0)
    assert config.tier1.antennas == 4
    assert config.tier2.antennas == 1
    assert isinstance(config.tier1.antennas, int)
    assert config.equal_alpha
    assert config.noise_power == 0.0
    assert config.mode == Mode.CONVENTIONAL
    assert not config.cached
    assert config.backhaul_capacity == pytest.approx(0.5 * math.log(2.0))
    assert config.catalog.size == 100000
    assert config.catalog.cache_files == pytest.approx(1000.0)
    assert config.catalog.eta == pytest.approx(0.01)
    assert validate(config).ok

def test_load_config(tmpdir):
    path = write_network(tmpdir / "net.json",
                         tier2={"density_per_m2": 1.0e-4, "power_dbm": 30,
                                "antennas": 1, "alpha": 4.0},
                         mode="cached")
    config = load_config(path)
    assert config.tier2.density == pytest.approx(1.0e-4)
    assert config.tier2.alpha == 4.0
    assert not config.equal_alpha
    assert config.cached
    assert config == load_config(path)

def test_load_config_from_datafile():
    config = load_config(gettestdata("reference.json"))
    assert config == ref_network()

def test_load_config_expression(tmpdir):
    path = write_network(tmpdir / "expr.json",
                         user_density_per_macro_cell="2*50")
    config = load_config(path)
    assert config.user_density == pytest.approx(100 / MACRO)

def test_load_config_noise(tmpdir):
    path = write_network(tmpdir / "noise.json", noise={"enabled": True})
    config = load_config(path)
    assert config.noise_power == pytest.approx(thermal_noise(20e6))
    path = write_network(tmpdir / "noise-dbm.json",
                         noise={"enabled": True, "power_dbm": -100})
    config = load_config(path)
    assert config.noise_power == pytest.approx(1e-13)

@pytest.mark.parametrize(("changes", "fname"), [
    ({"tier1": {"power_dbm": 46, "antennas": 4, "alpha": 3.7}}, "nodens"),
    ({"mode": "telepathic"}, "mode"),
    ({"tier2": None}, "notier"),
])
def test_load_config_invalid(tmpdir, changes, fname):
    path = write_network(tmpdir / ("%s.json" % fname), **changes)
    with pytest.raises(ConfigError):
        load_config(path)

def test_load_config_missing(tmpdir):
    with pytest.raises(ConfigError):
        load_config(tmpdir / "no-such-file.json")

def test_as_dict_roundtrip_stable():
    a = ref_network().as_dict()
    b = ref_network().as_dict()
    assert a == b
    assert a['mode'] == "conventional"
    assert a['catalog']['cache_files'] == pytest.approx(1000.0)

@pytest.mark.parametrize(("changes", "message"), [
    (dict(tier1={"density_per_macro_cell": 1, "power_dbm": 46,
                 "antennas": 4, "alpha": 2.0}),
     "tier-1 pathloss exponent must exceed 2"),
    (dict(tier2={"density_per_macro_cell": 50, "power_dbm": 21,
                 "antennas": 2, "alpha": 3.7}),
     "tier-2 antennas must equal 1"),
    (dict(tier1={"density_per_macro_cell": 0, "power_dbm": 46,
                 "antennas": 4, "alpha": 3.7}),
     "tier-1 density must be positive"),
    (dict(tier1={"density_per_macro_cell": 1, "power_dbm": 46,
                 "antennas": 2.7, "alpha": 3.7}),
     "tier-1 antennas must be a positive integer"),
    (dict(mode="cached", catalog=None),
     "cached mode requires a catalog"),
])
def test_validate_violations(changes, message):
    config = ref_network(**changes)
    report = validate(config)
    assert not report.ok
    assert not report
    assert message in report.violations
    with pytest.raises(PreconditionError):
        report.check()

def test_antennas_integral_float():
    tier1 = {"density_per_macro_cell": 1, "power_dbm": 46,
             "antennas": 4.0, "alpha": 3.7}
    config = ref_network(tier1=tier1)
    assert config.tier1.antennas == 4
    assert isinstance(config.tier1.antennas, int)
    assert validate(config).ok

def test_validate_no_pico():
    """An empty second tier is a valid configuration.
    """
    assert validate(ref_network(lambda2=0)).ok

def test_validate_light_load_warning():
    config = ref_network(user_density_per_macro_cell=2)
    report = validate(config)
    assert report.ok
    assert len(report.warnings) == 1
    with pytest.warns(HetNetWarning):
        report.check()

def test_normalize():
    config = ref_network()
    n = normalize(config, 2)
    assert n.serving == 2
    assert n.antennas == (4.0, 1.0)
    assert n.power[1] == 1.0
    assert n.power[0] == pytest.approx(10.0 ** 2.5)
    assert n.alpha == (1.0, 1.0)
    n = normalize(config, 1)
    assert n.antennas == (1.0, 0.25)
    assert n.power[1] == pytest.approx(10.0 ** -2.5)


class TestZipfCatalog:

    def test_probabilities(self):
        c = ZipfCatalog(1000, 0.8, 10)
        p = c.probabilities()
        assert p.shape == (1000,)
        assert p.sum() == pytest.approx(1.0)
        assert np.all(np.diff(p) < 0)
        assert p[1] / p[0] == pytest.approx(2.0 ** -0.8)

    def test_hit_probability(self):
        c = ZipfCatalog(1000, 0.8, 10)
        assert c.hit_probability() == pytest.approx(c.probabilities()[:10].sum())
        assert ZipfCatalog(1000, 0.8, 0).hit_probability() == 0.0
        assert ZipfCatalog(1000, 0.8, 1000).hit_probability() == 1.0

    def test_uniform_popularity(self):
        c = ZipfCatalog(200, 0.0, 50)
        assert c.hit_probability() == pytest.approx(0.25)

    def test_fractional_cache(self):
        """Fractional cache sizes interpolate linearly.
        """
        lo = ZipfCatalog(1000, 0.8, 10).hit_probability()
        hi = ZipfCatalog(1000, 0.8, 11).hit_probability()
        mid = ZipfCatalog(1000, 0.8, 10.25).hit_probability()
        assert mid == pytest.approx(lo + 0.25 * (hi - lo))

    def test_eta(self):
        c = ZipfCatalog.from_eta(100000, 0.8, 0.01)
        assert c.cache_files == pytest.approx(1000.0)
        assert c.with_eta(0.02).eta == pytest.approx(0.02)
        assert c.hit_probability() < c.with_eta(0.02).hit_probability()

    def test_sample(self):
        c = ZipfCatalog(1000, 0.8, 10)
        rng = np.random.default_rng(12345)
        files = c.sample(rng, 200000)
        assert files.min() >= 1
        assert files.max() <= 1000
        freq = np.mean(files <= 10)
        assert freq == pytest.approx(c.hit_probability(), abs=0.01)
        hits = c.is_cached(files, rng)
        assert np.array_equal(hits, files <= 10)

    def test_is_cached_fractional(self):
        c = ZipfCatalog(100, 0.0, 0.5)
        rng = np.random.default_rng(1)
        files = np.ones(100000, dtype=int)
        assert np.mean(c.is_cached(files, rng)) == pytest.approx(0.5, abs=0.01)
