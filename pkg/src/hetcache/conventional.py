"""Mean user rates and ASE of the conventional two tier network.

Pico BSs are connected to the core network by a backhaul of limited
capacity C_bh, so the rate of pico users is capped at C_bh.  Rates are
in nats/s/Hz, the ASE in nats/s/Hz/m².
"""

from dataclasses import dataclass
from enum import Enum
import logging
import math
from .exception import PreconditionError
from .geometry import (integrate, integrate_semi_infinite, void_terms,
                       tier_stats)
from .model import validate
from .specfun import z_exact, z_high_coefficient


log = logging.getLogger(__name__)

LN2 = math.log(2.0)
X_WINDOW_START = 8.0
X_WINDOW_MAX = 700.0
X_TAIL_RATIO = 1.0e-12


class Method(Enum):
    INTEGRAL = 'integral'
    CLOSED_FORM = 'closed_form'
    MONTE_CARLO = 'monte_carlo'
    def __repr__(self):
        return '<%s.%s>' % (self.__class__.__name__, self.name)


@dataclass(frozen=True)
class RateReport:
    """Mean user rates per tier and the resulting ASE.

    In cached mode, mean_rate_tier1 is the mean rate of macro users,
    averaged over hit and miss users, and the class rates are set.
    """
    mean_rate_tier1: float
    mean_rate_tier2: float
    ase: float
    method: Method
    standard_error: float = None
    mean_rate_hit1: float = None
    mean_rate_miss: float = None

    @property
    def ase_bps(self):
        """The ASE in bps/Hz/m².
        """
        return self.ase / LN2


def log1p_ratio(y):
    """log(1 + y)/y, continued by 1 at y = 0.
    """
    if abs(y) < 1.0e-8:
        return 1.0 - y / 2.0
    return math.log1p(y) / y


def x_window(f, what):
    f0 = f(0.0)
    x = X_WINDOW_START
    while f(x) > X_TAIL_RATIO * f0 and x < X_WINDOW_MAX:
        x = min(2.0 * x, X_WINDOW_MAX)
        log.debug("%s: extending x window to %g", what, x)
    return x


def mean_rate_integral(config, k, assoc, active, upper=math.inf,
                       what="mean_rate"):
    """Mean rate of users served by tier k, capped at upper.

    assoc is the probability of the considered users to associate with
    tier k, active the pair of active probabilities of both tiers.
    """
    if not assoc > 0:
        raise PreconditionError("%s: association probability of tier %d "
                                "is zero" % (what, k))
    if upper <= 0:
        return 0.0
    tk = config.tier(k)
    lam = tk.density
    terms = void_terms(config, k)
    noise = config.noise_power * tk.antennas / tk.power
    interferers = [ (j, c, e, p) for j, ((c, e), p)
                    in enumerate(zip(terms, active), start=1) ]
    if noise == 0 and not any(c * p > 0 for _, c, _, p in interferers):
        raise PreconditionError("%s: rate is unbounded without noise "
                                "and interference" % what)

    def weights(x):
        w = []
        for j, c, e, p in interferers:
            if c == 0:
                continue
            z = z_exact(x, j, k, config) if p > 0 else 0.0
            w.append((c * (1.0 + p * z), e))
        return w

    if noise == 0 and config.equal_alpha:
        # the inner integral over the serving distance is exact here
        def f(x):
            return lam / (assoc * sum(c for c, _ in weights(x)))
    else:
        half_alpha = tk.alpha / 2.0
        def f(x):
            w = weights(x)
            nz = noise * math.expm1(x)
            scale = 1.0 / (math.pi * sum(c for c, _ in w))
            if nz > 0:
                scale = min(scale, nz ** (-1.0 / half_alpha))
            def g(v):
                return math.exp(-nz * v**half_alpha
                                - math.pi * sum(c * v**e for c, e in w))
            return (math.pi * lam / assoc
                    * integrate_semi_infinite(g, scale, what))

    if math.isinf(upper):
        upper = x_window(f, what)
    return integrate(f, 0.0, upper, what)


def mean_rate_pico_integral(config):
    """Mean rate of pico users, capped by the backhaul capacity.
    """
    cap = config.backhaul_capacity
    if math.isinf(cap):
        raise PreconditionError("mean_rate_pico_integral: backhaul capacity "
                                "must be finite")
    if cap == 0:
        return 0.0
    stats = tier_stats(config)
    active = (stats[0].active_prob, stats[1].active_prob)
    return mean_rate_integral(config, 2, stats[1].association_prob, active,
                              upper=cap, what="mean_rate_pico_integral")


def mean_rate_macro_integral(config):
    """Mean rate of macro users.
    """
    stats = tier_stats(config)
    active = (stats[0].active_prob, stats[1].active_prob)
    return mean_rate_integral(config, 1, stats[0].association_prob, active,
                              what="mean_rate_macro_integral")


@dataclass(frozen=True)
class ClosedFormConstants:
    """Sums over tiers entering the closed form rate approximations.

    With w_j = λ_j P^_j^(2/α): total = Σ w_j, active = Σ p_j w_j,
    idle = Σ (1 - p_j) w_j and high = Σ p_j w_j M_j, where M_j is the
    coefficient of the large x approximation of Z_j.
    """
    alpha: float
    antennas: int
    total: float
    active: float
    idle: float
    high: float


def closed_form_constants(config, k, active):
    if config.noise_power != 0:
        raise PreconditionError("closed forms require zero noise power")
    if not config.equal_alpha:
        raise PreconditionError("closed forms require equal pathloss "
                                "exponents")
    total = act = idle = high = 0.0
    for j, ((c, _), p) in enumerate(zip(void_terms(config, k), active),
                                     start=1):
        if c == 0:
            continue
        total += c
        act += p * c
        idle += (1.0 - p) * c
        high += p * c * z_high_coefficient(j, k, config)
    return ClosedFormConstants(config.tier1.alpha, config.tier(k).antennas,
                               total, act, idle, high)


def low_x_rate(cc, upper):
    """The rate integral over [0, upper] with Z replaced by Z_low.

    This is ((α-2)/(2M)) C1 ln(1 + (2M/(α-2)) upper/C1) with C1 the
    ratio of total and active weights.
    """
    g = 2.0 * cc.antennas / (cc.alpha - 2.0)
    return upper * log1p_ratio(g * upper * cc.active / cc.total)


def high_x_rate(cc, numerator):
    """The rate integral over [ln 2, ∞) with Z replaced by Z_high.

    This is (α/2) (numerator/idle) ln(1 + idle/high 4^(-1/α)).  The
    idle weight vanishes when all BSs are active and the limit is taken.
    """
    if not cc.high > 0:
        raise PreconditionError("rate is unbounded without interference")
    q = 4.0 ** (-1.0 / cc.alpha) / cc.high
    return cc.alpha / 2.0 * numerator * q * log1p_ratio(cc.idle * q)


def mean_rate_pico_closed(config):
    cap = config.backhaul_capacity
    if math.isinf(cap):
        raise PreconditionError("mean_rate_pico_closed: backhaul capacity "
                                "must be finite")
    stats = tier_stats(config)
    cc = closed_form_constants(config, 2, (stats[0].active_prob,
                                           stats[1].active_prob))
    return low_x_rate(cc, cap)


def closed_rate(config, k, active):
    """Two piece approximation of the uncapped mean rate of tier k.
    """
    cc = closed_form_constants(config, k, active)
    return low_x_rate(cc, LN2) + high_x_rate(cc, cc.total)


def mean_rate_macro_closed(config):
    stats = tier_stats(config)
    return closed_rate(config, 1, (stats[0].active_prob,
                                   stats[1].active_prob))


def ase_conventional(config, method=Method.INTEGRAL, **sim_args):
    """ASE of the conventional network.

    The configuration is evaluated as a conventional network regardless
    of its mode.  sim_args are passed to
    :func:`hetcache.simulator.estimate` for the Monte Carlo method.
    """
    method = Method(method)
    validate(config).check()
    if method == Method.MONTE_CARLO:
        from .simulator import estimate
        return estimate(config, **sim_args).as_report(conventional=True)
    stats = tier_stats(config)
    active = (stats[0].active_prob, stats[1].active_prob)
    rates = [0.0, 0.0]
    for k, st in ((1, stats[0]), (2, stats[1])):
        if st.active_prob == 0:
            continue
        if method == Method.INTEGRAL:
            if k == 1:
                rates[0] = mean_rate_macro_integral(config)
            elif math.isinf(config.backhaul_capacity):
                rates[1] = mean_rate_integral(config, 2, st.association_prob,
                                              active, what="pico_uncapped")
            else:
                rates[1] = mean_rate_pico_integral(config)
        else:
            if k == 1:
                rates[0] = mean_rate_macro_closed(config)
            elif math.isinf(config.backhaul_capacity):
                rates[1] = closed_rate(config, 2, active)
            else:
                rates[1] = mean_rate_pico_closed(config)
    ase = math.fsum(st.active_prob * st.density * t.antennas * r
                    for st, t, r in zip(stats, config.tiers, rates))
    log.debug("conventional ASE (%s): R1=%g, R2=%g, ASE=%g",
              method.value, rates[0], rates[1], ase)
    return RateReport(rates[0], rates[1], ase, method)
