"""Implement the optimal-density subcommand.
"""

import logging
from hetcache.cli import (add_config_argument, add_run_options, fmt,
                          load_network, new_manifest, output_path,
                          per_macro_cell)
from hetcache.conventional import Method
from hetcache.exception import ArgError
from hetcache.expr import parse_sweep, parse_value
from hetcache.manifest import write_csv
from hetcache.model import convert_rate_units
from hetcache.tradeoff import (budget_config, optimal_density_under_budget,
                               set_variable)

log = logging.getLogger(__name__)

def to_bps(ase):
    return convert_rate_units(ase, "nats/s/Hz", "bps/Hz")

curve_header = ("lambda2_per_m2", "lambda2_per_macro_cell", "cache_files",
                "ase_bps_hz_m2", "ase_nats_hz_m2")
summary_header = ("delta", "lambda2_per_m2", "lambda2_per_macro_cell",
                  "ase_bps_hz_m2", "ase_nats_hz_m2", "status")


def optimal_density(args, config):
    network = load_network(args)
    if network.catalog is None:
        raise ArgError("the configuration needs a catalog")
    method = Method(config.method)
    if method == Method.MONTE_CARLO:
        raise ArgError("the optimal density search needs an analytic method")
    budget = parse_value(args.budget)
    try:
        deltas = [float(d) for d in args.delta_list.split(",")]
    except ValueError:
        raise ArgError("invalid delta list '%s'" % args.delta_list)
    s = parse_sweep(args.density_grid)
    if s.var != 'lambda2':
        raise ArgError("density grid must sweep lambda2")
    if s.n < 3:
        raise ArgError("density grid needs at least 3 points")
    prefix = args.output or "optimal-density"
    manifest = new_manifest(args, network, method.value)
    summary = []
    for delta in deltas:
        net = set_variable(network, "skew", delta)
        res = optimal_density_under_budget(budget, net, s.lo, s.hi, s.n,
                                           method, config.workers)
        curve = []
        for lam, ase in res.curve:
            n_c = budget_config(net, budget, lam).catalog.cache_files
            curve.append((fmt(lam), fmt(per_macro_cell(lam)), fmt(n_c),
                          fmt(to_bps(ase)), fmt(ase)))
        path = output_path(config, "%s-delta%g.csv" % (prefix, delta))
        write_csv(path, curve_header, curve, manifest)
        log.info("delta=%g: optimal density %g per macro cell (%s)",
                 delta, per_macro_cell(res.lambda2), res.status)
        summary.append((fmt(delta), fmt(res.lambda2),
                        fmt(per_macro_cell(res.lambda2)),
                        fmt(to_bps(res.ase)), fmt(res.ase),
                        res.status))
    path = output_path(config, "%s.csv" % prefix)
    write_csv(path, summary_header, summary, manifest)
    log.info("wrote %s", path)
    return 0

def add_parser(subparsers):
    parser = subparsers.add_parser('optimal-density',
                                   help=("helper density maximizing the ASE "
                                         "under a total cache budget"))
    add_config_argument(parser)
    add_run_options(parser, simulation=False)
    parser.add_argument('--budget', required=True,
                        help=("cached files per m², "
                              "e.g. 1e4/(500^2*pi)"))
    parser.add_argument('--delta-list', dest='delta_list', default="0.8",
                        help=("comma separated list of Zipf skews"))
    parser.add_argument('--density-grid', dest='density_grid', required=True,
                        help=("helper densities lambda2=lo:hi:n "
                              "in 1/m², scanned on a log grid"))
    parser.add_argument('-o', '--output',
                        help=("prefix of the CSV output files"))
    parser.set_defaults(func=optimal_density)
