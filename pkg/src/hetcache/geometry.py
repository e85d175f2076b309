"""Tier association, serving distance, BS activity and interference.

All functions take a :class:`hetcache.model.NetworkConfig` and a
serving tier k in {1, 2}.  Semi-infinite integrals over the serving
distance are taken in v = r², mapped onto [0, 1).
"""

from dataclasses import dataclass
import functools
import logging
import math
import scipy.integrate
from .exception import PreconditionError, QuadratureError
from .model import NormalizedParams, normalize
from .specfun import gamma_fn, hyp2f1


log = logging.getLogger(__name__)

QUAD_EPSREL = 1.0e-8
QUAD_EPSABS = 1.0e-14
QUAD_LIMIT = 200
ACTIVITY_SHAPE = 3.5


def integrate(f, a, b, what):
    """Adaptive quadrature of f over the finite interval [a, b].
    """
    y, err, info, *msg = scipy.integrate.quad(f, a, b, epsabs=QUAD_EPSABS,
                                              epsrel=QUAD_EPSREL,
                                              limit=QUAD_LIMIT,
                                              full_output=1)
    if not math.isfinite(y):
        raise QuadratureError(what, "non-finite result")
    if msg and err > 1.0e-6 * abs(y) and err > 1.0e3 * QUAD_EPSABS:
        raise QuadratureError(what, str(msg[0]).strip().splitlines()[0])
    return y


def integrate_semi_infinite(f, scale, what):
    """Integrate f over [0, ∞) with the substitution v = scale t/(1-t).

    scale should be the characteristic decay length of f.
    """
    def g(t):
        if t >= 1.0:
            return 0.0
        u = 1.0 - t
        return f(scale * t / u) * scale / (u * u)
    return integrate(g, 0.0, 1.0, what)


def exclusion_radius(config, j, k, r):
    """Distance within which a tier j BS would outshine the tier k BS
    at distance r.
    """
    tj = config.tier(j)
    tk = config.tier(k)
    return (tj.power / tk.power) ** (1.0 / tj.alpha) * r ** (tk.alpha/tj.alpha)


def void_terms(config, k):
    """Coefficients c_j and exponents e_j of the void probability.

    No BS of tier j is closer than its exclusion radius with probability
    exp(-π c_j v^(e_j)), with v = r² the squared serving distance.
    """
    n = normalize(config, k)
    terms = []
    for j, t in ((1, config.tier1), (2, config.tier2)):
        c = t.density * n.power[j-1] ** (2.0 / t.alpha)
        terms.append((c, 1.0 / n.alpha[j-1]))
    return terms


@functools.lru_cache(maxsize=256)
def association_prob(config, k):
    """Probability that the typical user associates with tier k.
    """
    lam = config.tier(k).density
    if lam == 0:
        return 0.0
    terms = void_terms(config, k)
    scale = 1.0 / (math.pi * sum(c for c, _ in terms))
    def f(v):
        return math.exp(-math.pi * sum(c * v**e for c, e in terms))
    p = math.pi * lam * integrate_semi_infinite(f, scale,
                                                "association_prob(%d)" % k)
    return min(max(p, 0.0), 1.0)


def association_prob_closed(config, k):
    """Association probability in closed form, for equal pathloss exponents.
    """
    if not config.equal_alpha:
        raise PreconditionError("association_prob_closed requires "
                                "equal pathloss exponents")
    terms = void_terms(config, k)
    return config.tier(k).density / sum(c for c, _ in terms)


def serving_distance_pdf(config, k, r, assoc=None):
    """Density of the distance to the serving BS, given tier k serves.
    """
    if r < 0:
        raise PreconditionError("serving_distance_pdf: negative distance")
    if assoc is None:
        assoc = association_prob(config, k)
    if assoc == 0:
        return 0.0
    lam = config.tier(k).density
    v = r * r
    expo = sum(c * v**e for c, e in void_terms(config, k))
    return 2.0 * math.pi * lam / assoc * r * math.exp(-math.pi * expo)


def active_prob(config, k, assoc):
    """Probability that a tier k BS has at least one user.
    """
    if not 0.0 <= assoc <= 1.0:
        raise PreconditionError("active_prob: association probability "
                                "must be in [0, 1], got %r" % assoc)
    lam = config.tier(k).density
    if lam == 0 or assoc == 0 or config.user_density == 0:
        return 0.0
    load = assoc * config.user_density / (ACTIVITY_SHAPE * lam)
    p = 1.0 - (1.0 + load) ** (-ACTIVITY_SHAPE)
    return min(max(p, 0.0), 1.0)


@dataclass(frozen=True)
class TierStats:
    association_prob: float
    active_prob: float
    density: float
    normalized: NormalizedParams

    @property
    def active_density(self):
        return self.active_prob * self.density


@functools.lru_cache(maxsize=256)
def tier_stats(config):
    """Association and activity of both tiers under max-power association.
    """
    stats = []
    for k in (1, 2):
        p = association_prob(config, k)
        stats.append(TierStats(p, active_prob(config, k, p),
                               config.tier(k).density, normalize(config, k)))
    return tuple(stats)


@dataclass(frozen=True)
class LaplaceQuery:
    """Parameters of one evaluation of the interference Laplace transform.

    r0 is the exclusion radius of the interfering tier; if it is None,
    the max-power association radius for serving distance r is used.
    """
    s: float
    serving: int
    interfering: int
    r: float
    r0: float = None


def laplace_kernel(s, j, r0, active_density, config):
    """E[exp(-sI)] for interferers of tier j outside the radius r0.

    The interferers form a PPP of the given density with Gamma(M_j,
    1/M_j) fading and transmit power P_j/M_j per beam.
    """
    if s < 0:
        raise PreconditionError("Laplace variable must not be negative")
    t = config.tier(j)
    if s == 0 or active_density == 0:
        return 1.0
    delta = 2.0 / t.alpha
    if r0 == 0:
        expo = (gamma_fn(1.0 - delta) * gamma_fn(t.antennas + delta)
                / gamma_fn(t.antennas) * (s * t.power / t.antennas) ** delta)
    else:
        z = -s * t.power * r0 ** (-t.alpha) / t.antennas
        h = hyp2f1(-delta, t.antennas, 1.0 - delta, z) - 1.0
        if -1.0e-14 < h < 0.0:
            h = 0.0
        expo = r0 * r0 * h
    return math.exp(-math.pi * active_density * expo)


def laplace_interference(query, config, active=None):
    """Laplace transform of the interference from one tier.

    active is the active probability of the interfering tier; it is
    derived from the configuration if omitted.
    """
    j = query.interfering
    if active is None:
        active = tier_stats(config)[j-1].active_prob
    r0 = query.r0
    if r0 is None:
        r0 = exclusion_radius(config, j, query.serving, query.r)
    return laplace_kernel(query.s, j, r0,
                          active * config.tier(j).density, config)


def laplace_interference_cachemiss(s, j, r, config, active=None):
    """Laplace transform of the interference seen by a cache miss user.

    The miss user is served by its nearest macro BS at distance r, so
    macro interferers lie beyond r while helpers may be arbitrarily
    close.
    """
    if active is None:
        from .cached import cache_split
        active = cache_split(config).active_prob[j-1]
    r0 = r if j == 1 else 0.0
    return laplace_kernel(s, j, r0, active * config.tier(j).density, config)
