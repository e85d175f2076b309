"""Implement the validate subcommand.

Compare the ASE from the integral, the closed form and the Monte Carlo
simulation side by side.
"""

import logging
from hetcache.cli import add_config_argument, add_run_options, load_network
from hetcache.conventional import Method
from hetcache.exception import PreconditionError
from hetcache.model import convert_rate_units, validate as validate_config
from hetcache.tradeoff import evaluate_ase
from hetcache.simulator import estimate

log = logging.getLogger(__name__)


def to_bps(ase):
    return convert_rate_units(ase, "nats/s/Hz", "bps/Hz")


def validate(args, config):
    network = load_network(args)
    report = validate_config(network)
    for w in report.warnings:
        log.warning("%s", w)
    if not report.ok:
        for v in report.violations:
            print("violation: %s" % v)
        return 1
    ref = evaluate_ase(network, Method.INTEGRAL)
    try:
        closed = evaluate_ase(network, Method.CLOSED_FORM)
    except PreconditionError as e:
        log.info("closed form not applicable: %s", e)
        closed = None
    sim = estimate(network, drops=config.drops, seed=config.seed,
                   workers=config.workers, window_macros=config.window_macros)
    checks = [ ("integral", ref.ase, None, None, None) ]
    if closed is not None:
        gap = abs(closed.ase - ref.ase) / ref.ase
        checks.append(("closed_form", closed.ase, None, gap,
                       config.closed_tol))
    gap = abs(sim.ase - ref.ase) / ref.ase
    checks.append(("monte_carlo", sim.ase, sim.ase_se, gap, config.mc_tol))
    print("mode: %s" % network.mode.value)
    print("%-12s %14s %12s %9s  %s"
          % ("method", "ASE [bps/Hz/m^2]", "stderr", "gap", "result"))
    failed = False
    for name, ase, se, gap, tol in checks:
        bps = to_bps(ase)
        se_s = "%12.4e" % to_bps(se) if se is not None else ""
        if gap is None:
            print("%-12s %15.6e %12s %9s  %s" % (name, bps, se_s, "", "ref"))
            continue
        ok = gap <= tol
        failed |= not ok
        print("%-12s %15.6e %12s %8.2f%%  %s"
              % (name, bps, se_s, 100 * gap, "pass" if ok else "FAIL"))
    return 1 if failed else 0

def add_parser(subparsers):
    parser = subparsers.add_parser('validate',
                                   help=("cross check integral, closed form "
                                         "and simulation"))
    add_config_argument(parser)
    add_run_options(parser, method=False)
    parser.set_defaults(func=validate)
