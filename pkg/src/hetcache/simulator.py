"""Monte Carlo simulation of the two tier network.

BSs of both tiers and the users are realized as independent PPPs in a
square window with wrap-around distances.  Users associate with the BS
of strongest average received power, miss users in cached mode with the
strongest macro BS.  A BS without users is idle, so BS activity
emerges from the association rather than being assumed.

Each drop draws from its own random stream, derived from the seed and
the drop index, so that results do not depend on the number of worker
processes.
"""

from dataclasses import dataclass, replace
import functools
import logging
import math
import numpy as np
from scipy.spatial import cKDTree
from .conventional import Method, RateReport
from .exception import PreconditionError, SimulationError
from .tools import parallel_map


log = logging.getLogger(__name__)

MIN_MACROS = 50.0
DEFAULT_WINDOW_MACROS = 100.0
USER_CHUNK = 512
MIN_DIST2 = 1.0e-9


def window_side(config, window_macros=DEFAULT_WINDOW_MACROS):
    """Side of the square window holding window_macros macro BSs on average.
    """
    return math.sqrt(window_macros / config.tier1.density)


def drop_rng(seed, drop):
    """Random generator for one drop.
    """
    ss = np.random.SeedSequence(seed, spawn_key=(drop,))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class DropSample:
    """One realization of the network.

    Positions are (n, 2) arrays within [0, side).  serving_tier is 0 for
    unserved users.  The association and scheduling fields are None
    before :func:`associate` has been applied.
    """
    side: float
    bs: tuple
    users: np.ndarray
    hit: np.ndarray = None
    serving_tier: np.ndarray = None
    serving_bs: np.ndarray = None
    distance: np.ndarray = None
    scheduled: np.ndarray = None
    active: tuple = None

    @property
    def area(self):
        return self.side * self.side

    def translate(self, shift):
        """Shift all points by the vector shift, wrapping around.
        """
        shift = np.asarray(shift, dtype=float)
        return replace(self, bs=tuple((b + shift) % self.side
                                      for b in self.bs),
                       users=(self.users + shift) % self.side)


def _uniform_points(rng, n, side):
    return rng.random((n, 2)) * side


def interferer_fading(rng, shape, size=None):
    """Power gain Gamma(M, 1/M) of an interfering M beam BS.
    """
    return rng.gamma(shape, 1.0 / np.asarray(shape, dtype=float), size=size)


def sample_drop(config, side, rng):
    """Realize BS and user positions and, in cached mode, requests.
    """
    if config.tier1.density * side * side < MIN_MACROS:
        raise SimulationError("window too small: %.1f macro BSs expected, "
                              "need at least %d"
                              % (config.tier1.density * side * side,
                                 MIN_MACROS))
    area = side * side
    bs = []
    for t in config.tiers:
        bs.append(_uniform_points(rng, rng.poisson(t.density * area), side))
    users = _uniform_points(rng, rng.poisson(config.user_density * area),
                            side)
    hit = None
    if config.cached:
        files = config.catalog.sample(rng, len(users))
        hit = config.catalog.is_cached(files, rng)
    return DropSample(side, tuple(bs), users, hit=hit)


def _schedule(rng, tier, bs_index, n_bs, cap):
    """Select up to cap random users per BS among those attached.
    """
    n = len(tier)
    scheduled = np.zeros(n, dtype=bool)
    active = np.zeros(n_bs, dtype=bool)
    priority = rng.random(n)
    idx = np.flatnonzero(tier)
    if len(idx) == 0:
        return scheduled, active
    b = bs_index[idx]
    order = np.lexsort((priority[idx], b))
    b_sorted = b[order]
    first = np.flatnonzero(np.r_[True, b_sorted[1:] != b_sorted[:-1]])
    starts = np.repeat(first, np.diff(np.r_[first, len(b_sorted)]))
    rank = np.arange(len(b_sorted)) - starts
    scheduled[idx[order[rank < cap]]] = True
    active[b_sorted] = True
    return scheduled, active


def associate(drop, config, rng):
    """Attach users to BSs and select the scheduled users.

    Macro BSs serve up to M_1 users, pico BSs and helpers one user.
    """
    n_users = len(drop.users)
    best = np.full(n_users, -np.inf)
    tier = np.zeros(n_users, dtype=int)
    index = np.zeros(n_users, dtype=int)
    dist = np.full(n_users, np.inf)
    for k, (t, pos) in enumerate(zip(config.tiers, drop.bs), start=1):
        if len(pos) == 0 or n_users == 0:
            continue
        tree = cKDTree(pos, boxsize=drop.side)
        d, i = tree.query(drop.users, k=1)
        d = np.maximum(d, math.sqrt(MIN_DIST2))
        rx = math.log(t.power) - t.alpha * np.log(d)
        better = rx > best
        if k == 2 and drop.hit is not None:
            better &= drop.hit
        best = np.where(better, rx, best)
        tier = np.where(better, k, tier)
        index = np.where(better, i, index)
        dist = np.where(better, d, dist)
    scheduled = np.zeros(n_users, dtype=bool)
    active = []
    for k, (t, pos) in enumerate(zip(config.tiers, drop.bs), start=1):
        cap = t.antennas if k == 1 else 1
        s, a = _schedule(rng, tier == k, index, len(pos), cap)
        scheduled |= s
        active.append(a)
    return replace(drop, serving_tier=tier, serving_bs=index, distance=dist,
                   scheduled=scheduled, active=tuple(active))


def realize_rates(drop, config, rng):
    """Rates of the scheduled users in nats/s/Hz.

    Returns the indices of the scheduled users and their rates.
    """
    if drop.scheduled is None:
        raise PreconditionError("realize_rates: drop is not associated")
    users = np.flatnonzero(drop.scheduled)
    tiers = config.tiers
    bs_pos = np.concatenate(drop.bs)
    offset = np.r_[0, np.cumsum([len(b) for b in drop.bs])]
    power = np.concatenate([np.full(len(b), t.power)
                            for b, t in zip(drop.bs, tiers)])
    alpha = np.concatenate([np.full(len(b), t.alpha)
                            for b, t in zip(drop.bs, tiers)])
    shape = np.concatenate([np.full(len(b), float(t.antennas))
                            for b, t in zip(drop.bs, tiers)])
    active = np.concatenate(drop.active)
    act = np.flatnonzero(active)
    bs_pos, power, alpha, shape = (bs_pos[act], power[act],
                                   alpha[act], shape[act])
    # column of each user's serving BS among the active BSs
    col = np.searchsorted(act, offset[drop.serving_tier[users] - 1]
                          + drop.serving_bs[users])
    k_users = drop.serving_tier[users]
    p_k = np.array([t.power for t in tiers])[k_users - 1]
    m_k = np.array([t.antennas for t in tiers])[k_users - 1]
    a_k = np.array([t.alpha for t in tiers])[k_users - 1]
    h = rng.exponential(1.0, len(users))
    signal = p_k / m_k * h * drop.distance[users] ** (-a_k)
    interference = np.empty(len(users))
    for start in range(0, len(users), USER_CHUNK):
        sl = slice(start, start + USER_CHUNK)
        delta = drop.users[users[sl], None, :] - bs_pos[None, :, :]
        delta -= drop.side * np.round(delta / drop.side)
        d2 = np.maximum(np.sum(delta * delta, axis=2), MIN_DIST2)
        g = interferer_fading(rng, shape[None, :], size=d2.shape)
        g[np.arange(d2.shape[0]), col[sl]] = 0.0
        interference[sl] = np.sum(power * g * d2 ** (-alpha / 2.0), axis=1)
    rate = np.log1p(signal / (interference + config.noise_power))
    if not config.cached and math.isfinite(config.backhaul_capacity):
        rate = np.where(k_users == 2,
                        np.minimum(rate, config.backhaul_capacity), rate)
    return users, rate


@dataclass(frozen=True)
class DropResult:
    """Per drop totals, as plain numbers for the reduction.
    """
    area: float
    rate_sum: dict
    count: dict
    users: int
    users_tier1: int
    bs: tuple
    active: tuple


def run_drop(config, side, seed, drop):
    rng = drop_rng(seed, drop)
    d = sample_drop(config, side, rng)
    d = associate(d, config, rng)
    users, rate = realize_rates(d, config, rng)
    tier = d.serving_tier[users]
    classes = {
        'tier1': tier == 1,
        'tier2': tier == 2,
    }
    if d.hit is not None:
        hit = d.hit[users]
        classes['hit1'] = (tier == 1) & hit
        classes['miss'] = (tier == 1) & ~hit
    rate_sum = { c: math.fsum(rate[m]) for c, m in classes.items() }
    rate_sum['all'] = math.fsum(rate)
    count = { c: int(np.count_nonzero(m)) for c, m in classes.items() }
    count['all'] = len(users)
    return DropResult(d.area, rate_sum, count, len(d.users),
                      int(np.count_nonzero(d.serving_tier == 1)),
                      tuple(len(b) for b in d.bs),
                      tuple(int(np.count_nonzero(a)) for a in d.active))


def _ratio(num, den):
    """Ratio estimate and its standard error from per drop totals.
    """
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    n = len(num)
    total = math.fsum(den)
    if total == 0:
        return math.nan, math.nan
    r = math.fsum(num) / total
    resid = num - r * den
    se = math.sqrt(math.fsum(resid * resid) / (n - 1) / n) / (total / n)
    return r, se


@dataclass(frozen=True)
class SimEstimate:
    """Monte Carlo estimates with standard errors.

    mean_rate and mean_rate_se map the user classes tier1, tier2 and,
    in cached mode, hit1 and miss to the mean rate of scheduled users.
    """
    mean_rate: dict
    mean_rate_se: dict
    ase: float
    ase_se: float
    association_tier1: float
    association_tier1_se: float
    active_fraction: tuple
    active_fraction_se: tuple
    drops: int
    seed: int

    def as_report(self, conventional=False):
        mr = self.mean_rate
        rates = [0.0 if math.isnan(mr[c]) else mr[c]
                 for c in ('tier1', 'tier2')]
        if conventional or 'miss' not in mr:
            return RateReport(rates[0], rates[1], self.ase,
                              Method.MONTE_CARLO, self.ase_se)
        return RateReport(rates[0], rates[1], self.ase, Method.MONTE_CARLO,
                          self.ase_se, mean_rate_hit1=mr['hit1'],
                          mean_rate_miss=mr['miss'])


def estimate(config, drops=200, seed=1, workers=None,
             window_macros=DEFAULT_WINDOW_MACROS):
    """Estimate mean rates and the ASE from independent drops.
    """
    if drops < 2:
        raise PreconditionError("estimate needs at least 2 drops")
    side = window_side(config, window_macros)
    log.debug("simulating %d drops, window side %.0f m", drops, side)
    func = functools.partial(run_drop, config, side, seed)
    results = parallel_map(func, range(drops), workers)
    if sum(r.count['all'] for r in results) == 0:
        raise SimulationError("no scheduled users in any drop")
    mean_rate = {}
    mean_rate_se = {}
    for c in results[0].count:
        if c == 'all':
            continue
        mean_rate[c], mean_rate_se[c] = _ratio(
            [r.rate_sum[c] for r in results], [r.count[c] for r in results])
    ase, ase_se = _ratio([r.rate_sum['all'] for r in results],
                         [r.area for r in results])
    assoc, assoc_se = _ratio([r.users_tier1 for r in results],
                             [r.users for r in results])
    act = [_ratio([r.active[k] for r in results], [r.bs[k] for r in results])
           for k in (0, 1)]
    log.debug("simulated ASE %g ± %g", ase, ase_se)
    return SimEstimate(mean_rate, mean_rate_se, ase, ase_se, assoc, assoc_se,
                       tuple(a[0] for a in act), tuple(a[1] for a in act),
                       drops, seed)


def empirical_laplace(s, j, r0, active_density, config, samples=10000,
                      seed=1, tail=1.0e-4):
    """Monte Carlo estimate of E[exp(-sI)] for interferers of tier j.

    Interferers form a PPP of the given density outside the radius r0,
    truncated at a radius where the neglected interference changes the
    exponent by less than tail.  Returns the mean and its standard
    error.
    """
    t = config.tier(j)
    rng = drop_rng(seed, 0)
    if s == 0 or active_density == 0:
        return 1.0, 0.0
    # far field: 1 - (1 + x)^-M <= M x with x = s P y^-α / M
    r_max = ((2.0 * math.pi * active_density * s * t.power)
             / ((t.alpha - 2.0) * tail)) ** (1.0 / (t.alpha - 2.0))
    r_max = max(r_max, 10.0 * r0, 1.0)
    ring = math.pi * (r_max**2 - r0**2)
    n = rng.poisson(active_density * ring, samples)
    total = int(n.sum())
    y2 = rng.random(total) * (r_max**2 - r0**2) + r0**2
    y2 = np.maximum(y2, MIN_DIST2)
    g = interferer_fading(rng, t.antennas, total)
    contrib = t.power * g * y2 ** (-t.alpha / 2.0)
    owner = np.repeat(np.arange(samples), n)
    interference = np.bincount(owner, weights=contrib, minlength=samples)
    v = np.exp(-s * interference)
    return float(v.mean()), float(v.std(ddof=1) / math.sqrt(samples))
