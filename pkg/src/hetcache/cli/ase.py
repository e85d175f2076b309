"""Implement the ase subcommand.
"""

import logging
from hetcache.cli import (add_config_argument, add_run_options, fmt,
                          load_network, new_manifest, output_path,
                          per_macro_cell, sim_args)
from hetcache.conventional import Method
from hetcache.expr import parse_sweep
from hetcache.manifest import write_csv
from hetcache.tradeoff import SweepSpec, set_variable, sweep

log = logging.getLogger(__name__)

header = ("swept_value", "ase_bps_hz_m2", "ase_nats_hz_m2", "method",
          "stderr", "lambda2_per_m2", "lambda2_per_macro_cell", "status")


def ase(args, config):
    network = load_network(args)
    method = Method(config.method)
    if args.sweep:
        s = parse_sweep(args.sweep)
        spec = SweepSpec.from_range(s.var, s.lo, s.hi, s.n, network,
                                    method, log=s.log)
    else:
        spec = SweepSpec('lambda2', (network.tier2.density,), network, method)
    extra = sim_args(config) if method == Method.MONTE_CARLO else {}
    seed = extra.get('seed')
    log.info("evaluating ASE of the %s network at %d points (%s)",
             network.mode.value, len(spec.grid), method.value)
    rows = sweep(spec, **dict(extra, workers=config.workers))
    failed = 0
    table = []
    for r in rows:
        lam = set_variable(network, spec.var, r.value).tier2.density
        if r.ok:
            rep = r.report
            table.append((fmt(r.value), fmt(rep.ase_bps), fmt(rep.ase),
                          method.value, fmt(rep.standard_error), fmt(lam),
                          fmt(per_macro_cell(lam)), "ok"))
        else:
            failed += 1
            table.append((fmt(r.value), None, None, method.value, None,
                          fmt(lam), fmt(per_macro_cell(lam)), "failed"))
    name = args.output or "ase-%s.csv" % network.mode.value
    path = output_path(config, name)
    manifest = new_manifest(args, network, method.value, seed)
    write_csv(path, header, table, manifest)
    log.info("wrote %s", path)
    return 3 if failed else 0

def add_parser(subparsers):
    parser = subparsers.add_parser('ase',
                                   help=("compute the ASE, optionally "
                                         "over a parameter sweep"))
    add_config_argument(parser)
    add_run_options(parser)
    parser.add_argument('--sweep',
                        help=("sweep specification var=lo:hi:n[:log], "
                              "var one of lambda2, eta, backhaul_mbps, skew"))
    parser.add_argument('-o', '--output',
                        help=("name of the CSV output file"))
    parser.set_defaults(func=ase)
