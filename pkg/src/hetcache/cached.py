"""Mean user rates and ASE of the cache enabled two tier network.

Helper nodes replace the pico BSs.  They cache the N_c most popular
files and have no backhaul.  A user whose request hits the cache
associates with the strongest BS of either tier, a user whose request
misses can only be served by the macro tier.
"""

from dataclasses import dataclass
import functools
import logging
import math
import numpy as np
import scipy.stats
from .conventional import (Method, RateReport, LN2, closed_form_constants,
                           closed_rate, high_x_rate, log1p_ratio,
                           mean_rate_integral, x_window)
from .exception import PreconditionError
from .geometry import (integrate, integrate_semi_infinite, association_prob,
                       active_prob)
from .model import Mode, validate
from .specfun import gamma_fn, z_exact


log = logging.getLogger(__name__)


def hit_probability(catalog):
    """Probability that a request is for a cached file.
    """
    return catalog.hit_probability()


@dataclass(frozen=True)
class CacheSplit:
    """How users split over hit and miss and over the tiers.

    hit_assoc are the association probabilities of hit users, assoc the
    overall association probabilities, p1h the probability that a user
    served by the macro tier is a hit user.
    """
    hit_prob: float
    hit_assoc: tuple
    assoc: tuple
    p1h: float
    active_prob: tuple


def _require_cached(config, what):
    if config.mode != Mode.CACHED or config.catalog is None:
        raise PreconditionError("%s requires a cached mode configuration "
                                "with a catalog" % what)


@functools.lru_cache(maxsize=256)
def cache_split(config):
    _require_cached(config, "cache_split")
    p_h = hit_probability(config.catalog)
    h = [association_prob(config, 1), association_prob(config, 2)]
    s = h[0] + h[1]
    h = [h[0] / s, h[1] / s]
    assoc = (p_h * h[0] + 1.0 - p_h, p_h * h[1])
    p1h = p_h * h[0] / assoc[0]
    active = tuple(active_prob(config, k, min(assoc[k-1], 1.0))
                   for k in (1, 2))
    return CacheSplit(p_h, tuple(h), assoc, min(max(p1h, 0.0), 1.0), active)


def mean_rate_hit_integral(config, k):
    """Mean rate of hit users served by tier k.
    """
    split = cache_split(config)
    return mean_rate_integral(config, k, split.hit_assoc[k-1],
                              split.active_prob,
                              what="mean_rate_hit_integral(%d)" % k)


def _miss_helper_coefficient(config, active):
    # interference from helpers that may be arbitrarily close
    t1 = config.tier1
    t2 = config.tier2
    if t2.density == 0 or active[1] == 0:
        return 0.0
    d = 2.0 / t2.alpha
    return (active[1] * t2.density * gamma_fn(1.0 - d)
            * gamma_fn(t2.antennas + d) / gamma_fn(t2.antennas)
            * (t2.power / t1.power * t1.antennas / t2.antennas) ** d)


def mean_rate_miss_integral(config):
    """Mean rate of miss users, served by the nearest macro BS.
    """
    what = "mean_rate_miss_integral"
    split = cache_split(config)
    active = split.active_prob
    t1 = config.tier1
    t2 = config.tier2
    lam = t1.density
    noise = config.noise_power * t1.antennas / t1.power
    coef2 = _miss_helper_coefficient(config, active)
    e2 = t1.alpha / t2.alpha
    d2 = 2.0 / t2.alpha
    if noise == 0 and active[0] == 0 and coef2 == 0:
        raise PreconditionError("%s: rate is unbounded without noise "
                                "and interference" % what)

    def weights(x):
        z1 = z_exact(x, 1, 1, config) if active[0] > 0 else 0.0
        return lam * (1.0 + active[0] * z1), coef2 * math.expm1(x) ** d2

    if noise == 0 and config.equal_alpha:
        def f(x):
            w1, w2 = weights(x)
            return lam / (w1 + w2)
    else:
        half_alpha = t1.alpha / 2.0
        def f(x):
            w1, w2 = weights(x)
            nz = noise * math.expm1(x)
            scale = 1.0 / (math.pi * (w1 + w2))
            if nz > 0:
                scale = min(scale, nz ** (-1.0 / half_alpha))
            def g(v):
                return math.exp(-nz * v**half_alpha
                                - math.pi * (w1 * v + w2 * v**e2))
            return math.pi * lam * integrate_semi_infinite(g, scale, what)

    return integrate(f, 0.0, x_window(f, what), what)


def macro_cell_throughput(config, rate_hit1, rate_miss, p1h=None):
    """Mean throughput of an active macro BS serving M_1 users.
    """
    if p1h is None:
        p1h = cache_split(config).p1h
    if not 0.0 <= p1h <= 1.0:
        raise PreconditionError("p1h must be in [0, 1]")
    return config.tier1.antennas * (p1h * rate_hit1 + (1.0 - p1h) * rate_miss)


def macro_cell_throughput_binomial(config, rate_hit1, rate_miss, p1h=None):
    """Same as :func:`macro_cell_throughput`, summed over the number of
    hit users among the M_1 scheduled users.
    """
    if p1h is None:
        p1h = cache_split(config).p1h
    m = config.tier1.antennas
    n_h = np.arange(m + 1)
    pmf = scipy.stats.binom.pmf(n_h, m, p1h)
    return math.fsum(pmf * (n_h * rate_hit1 + (m - n_h) * rate_miss))


def mean_rate_hit_closed(config, k):
    """Closed form approximation of the mean rate of hit users of tier k.
    """
    return closed_rate(config, k, cache_split(config).active_prob)


def mean_rate_miss_closed(config):
    """Closed form approximation of the mean rate of miss users.
    """
    split = cache_split(config)
    t1 = config.tier1
    cc = closed_form_constants(config, 1, split.active_prob)
    p1 = split.active_prob[0]
    g = 2.0 * p1 * t1.antennas / (t1.alpha - 2.0)
    low = LN2 * log1p_ratio(g * LN2)
    return low + high_x_rate(cc, t1.density)


def ase_cached(config, method=Method.INTEGRAL, **sim_args):
    """ASE of the cache enabled network.
    """
    method = Method(method)
    validate(config).check()
    _require_cached(config, "ase_cached")
    if method == Method.MONTE_CARLO:
        from .simulator import estimate
        return estimate(config, **sim_args).as_report()
    split = cache_split(config)
    t1, t2 = config.tiers
    integral = method == Method.INTEGRAL
    r_h1 = r_m = r_h2 = 0.0
    if split.active_prob[0] > 0:
        if split.p1h > 0:
            r_h1 = (mean_rate_hit_integral(config, 1) if integral
                    else mean_rate_hit_closed(config, 1))
        if split.p1h < 1:
            r_m = (mean_rate_miss_integral(config) if integral
                   else mean_rate_miss_closed(config))
    if split.active_prob[1] > 0:
        r_h2 = (mean_rate_hit_integral(config, 2) if integral
                else mean_rate_hit_closed(config, 2))
    r_1 = macro_cell_throughput(config, r_h1, r_m, split.p1h)
    ase = math.fsum([split.active_prob[0] * t1.density * r_1,
                     split.active_prob[1] * t2.density * t2.antennas * r_h2])
    log.debug("cached ASE (%s): p_h=%g, Rh1=%g, Rm=%g, Rh2=%g, ASE=%g",
              method.value, split.hit_prob, r_h1, r_m, r_h2, ase)
    return RateReport(r_1 / t1.antennas, r_h2, ase, method,
                      mean_rate_hit1=r_h1, mean_rate_miss=r_m)
