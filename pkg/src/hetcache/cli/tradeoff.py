"""Implement the tradeoff subcommand.

For each helper density on a grid, find the normalized cache capacity
needed to reach a target ASE.
"""

import logging
from hetcache.cli import (add_config_argument, add_run_options, fmt,
                          load_network, new_manifest, output_path)
from hetcache.conventional import Method
from hetcache.exception import ArgError, NoSolutionError
from hetcache.expr import parse_sweep, parse_value
from hetcache.manifest import write_csv
from hetcache.model import convert_rate_units
from hetcache.tradeoff import SweepSpec, solve_eta_for_target

log = logging.getLogger(__name__)

header = ("lambda2_per_m2", "eta", "iterations", "residual", "status")


def tradeoff(args, config):
    network = load_network(args)
    method = Method(config.method)
    if method == Method.MONTE_CARLO:
        raise ArgError("the tradeoff solver needs an analytic method")
    target = convert_rate_units(parse_value(args.target_ase),
                                'bps/Hz', 'nats/s/Hz')
    s = parse_sweep(args.density_grid)
    if s.var != 'lambda2':
        raise ArgError("density grid must sweep lambda2")
    grid = SweepSpec.from_range(s.var, s.lo, s.hi, s.n, network,
                                method, log=s.log).grid
    table = []
    for lam in grid:
        try:
            res = solve_eta_for_target(target, network, lam, method,
                                       verify=not args.no_verify)
            table.append((fmt(lam), fmt(res.eta), res.iterations,
                          fmt(res.residual), res.status))
        except NoSolutionError as e:
            log.warning("lambda2=%g: %s", lam, e)
            table.append((fmt(lam), None, None, None, "no_solution"))
    path = output_path(config, args.output or "tradeoff.csv")
    write_csv(path, header, table, new_manifest(args, network, method.value))
    log.info("wrote %s", path)
    return 0

def add_parser(subparsers):
    parser = subparsers.add_parser('tradeoff',
                                   help=("cache capacity needed to reach "
                                         "a target ASE versus helper density"))
    add_config_argument(parser)
    add_run_options(parser, simulation=False)
    parser.add_argument('--target-ase', dest='target_ase', required=True,
                        help=("target ASE in bps/Hz/m², "
                              "e.g. 20/(500^2*pi)"))
    parser.add_argument('--density-grid', dest='density_grid', required=True,
                        help=("helper densities lambda2=lo:hi:n[:log] "
                              "in 1/m²"))
    parser.add_argument('--no-verify', dest='no_verify', action='store_true',
                        help=("skip the verification of closed form "
                              "solutions with the integral"))
    parser.add_argument('-o', '--output',
                        help=("name of the CSV output file"))
    parser.set_defaults(func=tradeoff)
