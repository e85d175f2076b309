"""Parameter sweeps and the density versus cache capacity tradeoff.
"""

from dataclasses import dataclass, replace
import functools
import logging
import math
import warnings
import numpy as np
import scipy.optimize
from .cached import ase_cached
from .conventional import Method, ase_conventional
from .exception import (ConvergenceError, HetNetError, HetNetWarning,
                        NoSolutionError, PreconditionError)
from .model import Mode, convert_rate_units
from .tools import parallel_map


log = logging.getLogger(__name__)

SWEEP_VARS = ('lambda2', 'eta', 'backhaul_mbps', 'skew')
SOLVER_RTOL = 1.0e-4
ROOT_XTOL = 1.0e-10
ROOT_RTOL = 1.0e-10
VERIFY_RTOL = 0.08
ETA_PRESCAN = (0.0, 1.0e-4, 1.0e-3, 1.0e-2, 0.05, 0.2, 0.5, 1.0)


def evaluate_ase(config, method=Method.CLOSED_FORM, **sim_args):
    """ASE of the network, according to its mode.
    """
    if config.mode == Mode.CACHED:
        return ase_cached(config, method, **sim_args)
    else:
        return ase_conventional(config, method, **sim_args)


def set_variable(config, var, value):
    """Return a copy of config with the swept variable set to value.
    """
    if var == 'lambda2':
        return config.with_tier(2, density=value)
    elif var == 'eta':
        return config.with_eta(value)
    elif var == 'backhaul_mbps':
        c_bh = convert_rate_units(value, 'Mbps', 'nats/s/Hz',
                                  config.bandwidth)
        return config.replace(backhaul_capacity=c_bh)
    elif var == 'skew':
        if config.catalog is None:
            raise PreconditionError("configuration has no catalog")
        return config.replace(catalog=replace(config.catalog, skew=value))
    else:
        raise PreconditionError("invalid sweep variable '%s'" % var)


@dataclass(frozen=True)
class SweepSpec:
    var: str
    grid: tuple
    config: object
    method: Method = Method.CLOSED_FORM

    def __post_init__(self):
        if self.var not in SWEEP_VARS:
            raise PreconditionError("invalid sweep variable '%s'" % self.var)
        if len(self.grid) < 1:
            raise PreconditionError("empty sweep grid")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise PreconditionError("sweep grid must be strictly increasing")

    @classmethod
    def from_range(cls, var, lo, hi, points, config, method=Method.CLOSED_FORM,
                   log=False):
        if points == 1:
            grid = (float(lo),)
        elif log:
            if not lo > 0:
                raise PreconditionError("log sweep needs a positive "
                                        "lower bound")
            grid = tuple(np.geomspace(lo, hi, points))
        else:
            grid = tuple(np.linspace(lo, hi, points))
        return cls(var, grid, config, Method(method))


@dataclass(frozen=True)
class SweepRow:
    value: float
    report: object = None
    error: str = None

    @property
    def ok(self):
        return self.report is not None


def _sweep_point(spec, sim_args, value):
    try:
        config = set_variable(spec.config, spec.var, value)
        return SweepRow(value, evaluate_ase(config, spec.method, **sim_args))
    except HetNetError as e:
        return SweepRow(value, error=str(e))


def sweep(spec, workers=None, **sim_args):
    """Evaluate the ASE at every grid point.

    A point that fails is logged and returned with its error, the
    remaining points are still evaluated.
    """
    if spec.method == Method.MONTE_CARLO:
        sim_args.setdefault('workers', workers)
        rows = [_sweep_point(spec, sim_args, v) for v in spec.grid]
    else:
        func = functools.partial(_sweep_point, spec, sim_args)
        rows = parallel_map(func, spec.grid, workers)
    for r in rows:
        if not r.ok:
            log.warning("sweep %s=%g failed: %s", spec.var, r.value, r.error)
    return rows


@dataclass(frozen=True)
class TradeoffResult:
    lambda2: float
    eta: float
    ase: float
    target: float
    iterations: int
    residual: float
    bracket: tuple
    status: str = 'ok'


def _find_root(f, lo, hi, f_lo, f_hi, target, logscale=False):
    """Find x in [lo, hi] with f(x) = target, f(lo) and f(hi) lying on
    either side of target.

    Returns (x, f(x), iterations).
    """
    if abs(f_hi - target) <= SOLVER_RTOL * abs(target):
        return hi, f_hi, 0
    if abs(f_lo - target) <= SOLVER_RTOL * abs(target):
        return lo, f_lo, 0
    if logscale:
        def g(u):
            return f(math.exp(u)) - target
        a, b = math.log(lo), math.log(hi)
    else:
        def g(x):
            return f(x) - target
        a, b = lo, hi
    u, res = scipy.optimize.brentq(g, a, b, xtol=ROOT_XTOL * abs(b - a),
                                   rtol=ROOT_RTOL, full_output=True,
                                   disp=False)
    if not res.converged:
        raise ConvergenceError("root finding", res.iterations, u)
    x = math.exp(u) if logscale else u
    fx = f(x)
    log.debug("root x=%g after %d iterations: f=%g, target %g",
              x, res.iterations, fx, target)
    return x, fx, res.iterations


def _verify(config, method, value, what):
    if method != Method.CLOSED_FORM:
        return 'ok'
    ref = evaluate_ase(config, Method.INTEGRAL).ase
    if abs(value - ref) > VERIFY_RTOL * abs(ref):
        warnings.warn(HetNetWarning("%s: closed form ASE %g deviates from "
                                    "integral %g by more than %d%%"
                                    % (what, value, ref, VERIFY_RTOL * 100)))
        return 'flagged'
    return 'ok'


def straddling_interval(values, target):
    """Index i of the first pair of neighbours values[i], values[i+1]
    lying on either side of target, or None.
    """
    for i, (a, b) in enumerate(zip(values, values[1:])):
        if min(a, b) <= target <= max(a, b):
            return i
    return None


def solve_eta_for_target(target, config, lambda2=None,
                         method=Method.CLOSED_FORM, verify=True,
                         grid=ETA_PRESCAN):
    """Normalized cache capacity at which the ASE reaches target.

    The ASE is scanned on a grid of cache sizes first, the solution is
    then refined within the first pair of neighbouring grid points
    enclosing the target.  If the scanned ASE is not monotone, the
    solution may not be unique and the result is flagged.
    """
    method = Method(method)
    config = config.replace(mode=Mode.CACHED)
    if lambda2 is not None:
        config = config.with_tier(2, density=lambda2)
    def f(eta):
        return evaluate_ase(config.with_eta(eta), method).ase
    scan = [ f(eta) for eta in grid ]
    status = 'ok'
    if any(b < a for a, b in zip(scan, scan[1:])):
        warnings.warn(HetNetWarning("ASE is not monotone in the cache "
                                    "size, the solution may not be unique"))
        status = 'flagged'
    i = straddling_interval(scan, target)
    if i is None:
        raise NoSolutionError(target, min(scan), max(scan))
    lo, hi = grid[i], grid[i+1]
    eta, ase, it = _find_root(f, lo, hi, scan[i], scan[i+1], target)
    if verify and status == 'ok':
        status = _verify(config.with_eta(eta), method, ase,
                         "solve_eta_for_target")
    return TradeoffResult(config.tier2.density, eta, ase, target, it,
                          abs(ase - target), (lo, hi), status)


def solve_density_for_target(target, config, lo, hi,
                             method=Method.CLOSED_FORM, verify=False):
    """Tier 2 density at which the ASE reaches target.

    The ASE is assumed to be monotone in the density over [lo, hi].
    The root is searched on the logarithm of the density.
    """
    method = Method(method)
    if not 0 < lo < hi:
        raise PreconditionError("density bracket must satisfy 0 < lo < hi")
    def f(lam):
        return evaluate_ase(config.with_tier(2, density=lam), method).ase
    f_lo = f(lo)
    f_hi = f(hi)
    if not min(f_lo, f_hi) <= target <= max(f_lo, f_hi):
        raise NoSolutionError(target, f_lo, f_hi)
    lam, ase, it = _find_root(f, lo, hi, f_lo, f_hi, target, logscale=True)
    eta = config.catalog.eta if config.catalog is not None else None
    status = 'ok'
    if verify:
        status = _verify(config.with_tier(2, density=lam), method, ase,
                         "solve_density_for_target")
    return TradeoffResult(lam, eta, ase, target, it, abs(ase - target),
                          (lo, hi), status)


@dataclass(frozen=True)
class OptimumResult:
    lambda2: float
    ase: float
    curve: tuple
    boundary: bool
    iterations: int

    @property
    def status(self):
        return 'boundary' if self.boundary else 'ok'


def budget_config(config, budget, lambda2):
    """Configuration with helper density lambda2 and cache size
    budget/lambda2, clamped to the catalog size.
    """
    if config.catalog is None:
        raise PreconditionError("configuration has no catalog")
    n_c = min(budget / lambda2, float(config.catalog.size))
    return config.replace(mode=Mode.CACHED,
                          catalog=replace(config.catalog, cache_files=n_c)
                          ).with_tier(2, density=lambda2)


def maximize_bounded(f, a, b, tol):
    """Maximize f over [a, b].

    Returns (x, f(x), iterations).
    """
    res = scipy.optimize.minimize_scalar(lambda x: -f(x), bounds=(a, b),
                                         method='bounded',
                                         options=dict(xatol=tol))
    if not res.success:
        raise ConvergenceError("bounded maximization", res.nfev, res.x)
    return float(res.x), -float(res.fun), res.nfev


def _budget_ase(config, budget, method, lambda2):
    return evaluate_ase(budget_config(config, budget, lambda2), method).ase


def optimal_density_under_budget(budget, config, lo, hi, points=25,
                                 method=Method.CLOSED_FORM, workers=None):
    """Helper density maximizing the ASE for a fixed total cache size
    per area.

    The ASE is scanned on a logarithmic grid over [lo, hi].  An interior
    maximum is refined on the logarithm of the density between the
    neighbours of the best grid point.
    """
    method = Method(method)
    if not budget > 0:
        raise PreconditionError("cache budget must be positive")
    if not 0 < lo < hi:
        raise PreconditionError("density range must satisfy 0 < lo < hi")
    base = config.replace(mode=Mode.CACHED)
    grid = np.geomspace(lo, hi, points)
    func = functools.partial(_budget_ase, base, budget, method)
    curve = parallel_map(func, grid, workers)
    i = int(np.argmax(curve))
    flat = max(curve) - min(curve) <= 1.0e-9 * abs(max(curve))
    if flat or i == 0 or i == len(grid) - 1:
        warnings.warn(HetNetWarning("ASE maximum at the boundary of the "
                                    "density range"))
        return OptimumResult(float(grid[i]), curve[i],
                             tuple(zip(grid, curve)), True, 0)
    def f(u):
        return _budget_ase(base, budget, method, math.exp(u))
    step = math.log(grid[1] / grid[0])
    u, ase, it = maximize_bounded(f, math.log(grid[i-1]),
                                  math.log(grid[i+1]), SOLVER_RTOL * step)
    if ase < curve[i]:
        u, ase = math.log(grid[i]), curve[i]
    log.debug("optimal density %g after %d iterations", math.exp(u), it)
    return OptimumResult(math.exp(u), ase, tuple(zip(grid, curve)), False, it)
