"""Physical model of the two-tier network.

This module holds the parameters of both tiers, the user population
and the content catalog, the validation of a configuration, the
normalization of tier parameters relative to the serving tier and the
conversion between rate units.  All rates are handled internally in
nats/s/Hz.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
import functools
import math
from pathlib import Path
import warnings
import numpy as np
import yaml
from .exception import ConfigError, ArgError, PreconditionError, HetNetWarning
from .expr import parse_value


MACRO_CELL_AREA = 500.0**2 * math.pi
"""Reference area in m² for densities given per macro cell."""

THERMAL_NOISE_DBM_HZ = -174.0
"""Thermal noise power spectral density."""

DEFAULT_NOISE_FIGURE_DB = 9.0


def dbm_to_watt(p_dbm):
    return 10.0 ** ((p_dbm - 30.0) / 10.0)

def watt_to_dbm(p_watt):
    return 10.0 * math.log10(p_watt) + 30.0

def thermal_noise(bandwidth, figure_db=DEFAULT_NOISE_FIGURE_DB):
    """Noise power in watts over the given bandwidth in Hz.
    """
    return dbm_to_watt(THERMAL_NOISE_DBM_HZ + 10.0 * math.log10(bandwidth)
                       + figure_db)


_rate_units = {
    # unit: (scale to bps/Hz, absolute)
    'nats/s/Hz': (1.0 / math.log(2.0), False),
    'bps/Hz': (1.0, False),
    'bps': (1.0, True),
    'kbps': (1.0e3, True),
    'Mbps': (1.0e6, True),
    'Gbps': (1.0e9, True),
}

def convert_rate_units(value, from_unit, to_unit, bandwidth=None):
    """Convert a rate between nats/s/Hz, bps/Hz and absolute bit rates.

    Absolute rates (bps, kbps, Mbps, Gbps) need the bandwidth in Hz.
    """
    try:
        f_scale, f_abs = _rate_units[from_unit]
        t_scale, t_abs = _rate_units[to_unit]
    except KeyError:
        raise ArgError("unknown unit pair %s -> %s" % (from_unit, to_unit))
    if (f_abs or t_abs) and not bandwidth:
        raise ArgError("bandwidth is required to convert %s -> %s"
                       % (from_unit, to_unit))
    bps_hz = value * f_scale
    if f_abs:
        bps_hz /= bandwidth
    if t_abs:
        bps_hz *= bandwidth
    return bps_hz / t_scale


class Mode(Enum):
    CONVENTIONAL = 'conventional'
    CACHED = 'cached'
    def __repr__(self):
        return '<%s.%s>' % (self.__class__.__name__, self.name)


@dataclass(frozen=True)
class TierParams:
    """Parameters of one tier.

    density in nodes per m², power in watts.
    """
    density: float
    power: float
    antennas: int
    alpha: float

    @classmethod
    def from_dbm(cls, density, power_dbm, antennas, alpha):
        return cls(density, dbm_to_watt(power_dbm), antennas, alpha)

    @property
    def power_dbm(self):
        return watt_to_dbm(self.power)

    @property
    def density_per_macro_cell(self):
        return self.density * MACRO_CELL_AREA


@functools.lru_cache(maxsize=4)
def _zipf_cumsum(size, skew):
    w = np.arange(1, size + 1, dtype=float) ** (-skew)
    return np.concatenate(([0.0], np.cumsum(w)))


@dataclass(frozen=True)
class ZipfCatalog:
    """Content catalog with Zipf-like popularity.

    cache_files may be fractional: the cache then holds the
    corresponding fraction of the next most popular file, which makes
    the hit probability a continuous function of the cache size.
    """
    size: int
    skew: float
    cache_files: float

    @classmethod
    def from_eta(cls, size, skew, eta):
        return cls(size, skew, eta * size)

    @property
    def eta(self):
        return self.cache_files / self.size

    def with_eta(self, eta):
        return replace(self, cache_files=eta * self.size)

    def probabilities(self):
        """Request probabilities p_f for f = 1..N_f.
        """
        cs = _zipf_cumsum(self.size, self.skew)
        return np.diff(cs) / cs[-1]

    def hit_probability(self):
        """Probability that a request is for one of the cached files.
        """
        cs = _zipf_cumsum(self.size, self.skew)
        n = min(max(self.cache_files, 0.0), float(self.size))
        i = int(math.floor(n))
        frac = n - i
        hit = cs[i]
        if frac > 0.0:
            hit += frac * (cs[i+1] - cs[i])
        return float(min(hit / cs[-1], 1.0))

    def sample(self, rng, n):
        """Draw n i.i.d. requests, files being numbered from 1.
        """
        cs = _zipf_cumsum(self.size, self.skew)
        u = rng.random(n) * cs[-1]
        return np.minimum(np.searchsorted(cs, u, side='right'), self.size)

    def is_cached(self, files, rng):
        """Cache hit mask for the requested files.
        """
        n = min(max(self.cache_files, 0.0), float(self.size))
        i = int(math.floor(n))
        hit = files <= i
        frac = n - i
        if frac > 0.0:
            hit |= (files == i + 1) & (rng.random(len(files)) < frac)
        return hit


@dataclass(frozen=True)
class NetworkConfig:
    tier1: TierParams
    tier2: TierParams
    user_density: float
    noise_power: float = 0.0
    backhaul_capacity: float = math.inf
    mode: Mode = Mode.CONVENTIONAL
    catalog: ZipfCatalog = None
    bandwidth: float = 20.0e6

    def tier(self, k):
        if k == 1:
            return self.tier1
        elif k == 2:
            return self.tier2
        else:
            raise ValueError("invalid tier %r" % k)

    @property
    def tiers(self):
        return (self.tier1, self.tier2)

    def replace(self, **kwargs):
        return replace(self, **kwargs)

    def with_tier(self, k, **kwargs):
        """Return a copy with some parameters of tier k replaced.
        """
        key = 'tier%d' % k
        return replace(self, **{key: replace(self.tier(k), **kwargs)})

    def with_eta(self, eta):
        if self.catalog is None:
            raise PreconditionError("configuration has no catalog")
        return replace(self, catalog=self.catalog.with_eta(eta))

    @property
    def equal_alpha(self):
        return self.tier1.alpha == self.tier2.alpha

    @property
    def cached(self):
        return self.mode == Mode.CACHED

    @classmethod
    def from_dict(cls, d):
        """Create a configuration from a dict as read from JSON.
        """
        try:
            tier1 = _tier_from_dict(d['tier1'], 'tier1')
            tier2 = _tier_from_dict(d['tier2'], 'tier2')
            user_density = _density(d, 'user_density', 'user_density')
            bandwidth = float(d.get('bandwidth_mhz', 20.0)) * 1.0e6
            noise = d.get('noise') or {}
            if noise.get('enabled', False):
                if 'power_dbm' in noise:
                    noise_power = dbm_to_watt(float(noise['power_dbm']))
                else:
                    figure = float(noise.get('figure_db',
                                             DEFAULT_NOISE_FIGURE_DB))
                    noise_power = thermal_noise(bandwidth, figure)
            else:
                noise_power = 0.0
            if d.get('backhaul_mbps') is not None:
                backhaul = convert_rate_units(float(d['backhaul_mbps']),
                                              'Mbps', 'nats/s/Hz', bandwidth)
            elif d.get('backhaul_nats') is not None:
                backhaul = float(d['backhaul_nats'])
            else:
                backhaul = math.inf
            mode = Mode(d.get('mode', 'conventional'))
            catalog = None
            if d.get('catalog') is not None:
                c = d['catalog']
                size = int(c['size'])
                skew = float(c['skew'])
                if 'cache_files' in c:
                    catalog = ZipfCatalog(size, skew, float(c['cache_files']))
                else:
                    catalog = ZipfCatalog.from_eta(size, skew,
                                                   parse_value(c['eta']))
        except KeyError as e:
            raise ConfigError("missing configuration key %s" % e)
        except (AttributeError, TypeError, ValueError, ArgError) as e:
            raise ConfigError("invalid configuration: %s" % e)
        return cls(tier1, tier2, user_density, noise_power, backhaul, mode,
                   catalog, bandwidth)

    def as_dict(self):
        """A dict representation with SI units, suitable for hashing.
        """
        d = {
            'tier1': _tier_as_dict(self.tier1),
            'tier2': _tier_as_dict(self.tier2),
            'user_density_per_m2': self.user_density,
            'noise_power_w': self.noise_power,
            'backhaul_nats': (None if math.isinf(self.backhaul_capacity)
                              else self.backhaul_capacity),
            'bandwidth_hz': self.bandwidth,
            'mode': self.mode.value,
        }
        if self.catalog is not None:
            d['catalog'] = {
                'size': self.catalog.size,
                'skew': self.catalog.skew,
                'cache_files': self.catalog.cache_files,
            }
        return d


def _density(d, prefix, what):
    if isinstance(d.get(prefix), dict):
        d = d[prefix]
        prefix = 'density'
    if d.get(prefix + '_per_macro_cell') is not None:
        return parse_value(d[prefix + '_per_macro_cell']) / MACRO_CELL_AREA
    elif d.get(prefix + '_per_m2') is not None:
        return parse_value(d[prefix + '_per_m2'])
    else:
        raise ConfigError("%s: need %s_per_macro_cell or %s_per_m2"
                          % (what, prefix, prefix))

def _antennas(value):
    # non-integral values are left for validate() to reject
    m = float(value)
    return int(m) if m.is_integer() else m

def _tier_from_dict(d, what):
    return TierParams.from_dbm(_density(d, 'density', what),
                               float(d['power_dbm']),
                               _antennas(d.get('antennas', 1)),
                               float(d['alpha']))

def _tier_as_dict(t):
    return {
        'density_per_m2': t.density,
        'power_w': t.power,
        'antennas': t.antennas,
        'alpha': t.alpha,
    }


def load_config(path):
    """Read a network configuration from a JSON (or YAML) file.
    """
    path = Path(path)
    try:
        with path.open("rt") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError("%s: %s" % (path, e.strerror))
    except yaml.YAMLError as e:
        raise ConfigError("%s: parse error: %s" % (path, e))
    if not isinstance(data, dict):
        raise ConfigError("%s: not a configuration mapping" % path)
    return NetworkConfig.from_dict(data)


def reference_config(**kwargs):
    """The reference parameter set of the two tier network.

    Densities: one macro BS and 50 users per macro cell area, the pico
    or helper density is given per macro cell as keyword argument
    lambda2 (default 50).
    """
    lambda2 = kwargs.pop('lambda2', 50.0)
    d = {
        'tier1': {'density_per_macro_cell': 1, 'power_dbm': 46,
                  'antennas': 4, 'alpha': 3.7},
        'tier2': {'density_per_macro_cell': lambda2, 'power_dbm': 21,
                  'antennas': 1, 'alpha': 3.7},
        'user_density_per_macro_cell': 50,
        'bandwidth_mhz': 20,
        'backhaul_mbps': 10,
        'noise': {'enabled': False},
        'catalog': {'size': 100000, 'skew': 0.8, 'eta': 0.01},
        'mode': 'conventional',
    }
    d.update(kwargs)
    return NetworkConfig.from_dict(d)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()
    warnings: tuple = ()

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def check(self):
        """Raise PreconditionError on violations, emit the warnings.
        """
        if self.violations:
            raise PreconditionError("invalid configuration: %s"
                                    % "; ".join(self.violations))
        for w in self.warnings:
            warnings.warn(HetNetWarning(w))


def validate(config):
    """Check a configuration against the model assumptions.
    """
    violations = []
    warns = []
    for k, t in ((1, config.tier1), (2, config.tier2)):
        if k == 1 and not t.density > 0:
            violations.append("tier-1 density must be positive")
        if k == 2 and not t.density >= 0:
            violations.append("tier-2 density must not be negative")
        if not t.power > 0:
            violations.append("tier-%d transmit power must be positive" % k)
        if int(t.antennas) != t.antennas or t.antennas < 1:
            violations.append("tier-%d antennas must be a positive integer"
                              % k)
        if not t.alpha > 2:
            violations.append("tier-%d pathloss exponent must exceed 2" % k)
    if config.tier2.antennas != 1:
        violations.append("tier-2 antennas must equal 1")
    if not config.user_density >= 0:
        violations.append("user density must not be negative")
    if not config.noise_power >= 0:
        violations.append("noise power must not be negative")
    if not config.bandwidth > 0:
        violations.append("bandwidth must be positive")
    if config.mode == Mode.CONVENTIONAL:
        if not config.backhaul_capacity >= 0:
            violations.append("backhaul capacity must not be negative")
    else:
        c = config.catalog
        if c is None:
            violations.append("cached mode requires a catalog")
        else:
            if c.size < 1:
                violations.append("catalog size must be positive")
            if not c.skew >= 0:
                violations.append("Zipf skew must not be negative")
            if not 0 <= c.cache_files <= c.size:
                violations.append("cache size must be within [0, %d]"
                                  % c.size)
    if (config.tier1.density > 0 and
        config.user_density < config.tier1.antennas * config.tier1.density):
        warns.append("user density below M_1 users per macro BS, "
                      "the model assumes fully loaded macro BSs")
    return ValidationReport(tuple(violations), tuple(warns))


@dataclass(frozen=True)
class NormalizedParams:
    """Tier parameters normalized to the serving tier.

    The tuples are indexed by tier j - 1.
    """
    serving: int
    antennas: tuple
    power: tuple
    alpha: tuple


def normalize(config, k):
    """Normalize antennas, power and pathloss exponent to tier k.
    """
    s = config.tier(k)
    return NormalizedParams(
        k,
        tuple(t.antennas / s.antennas for t in config.tiers),
        tuple(t.power / s.power for t in config.tiers),
        tuple(t.alpha / s.alpha for t in config.tiers),
    )
