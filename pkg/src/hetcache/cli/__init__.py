"""Provide the subcommands of the hetcache-tool command line tool.
"""

import argparse
import importlib
import logging
import math
from pathlib import Path
import sys
import warnings
from hetcache.config import Config
from hetcache.conventional import Method
from hetcache.exception import *
from hetcache.manifest import RunManifest
from hetcache.model import MACRO_CELL_AREA, Mode, load_config

log = logging.getLogger(__name__)
subcmds = [ "ase", "tradeoff", "optimal_density", "validate", ]

_prog = "hetcache-tool"

def showwarning(message, category, filename, lineno, file=None, line=None):
    """Display HetNetWarning in a somewhat more user friendly manner.
    All other warnings are formatted the standard way.
    """
    # This is a modified version of the function of the same name from
    # the Python standard library warnings module.
    if file is None:
        file = sys.stderr
        if file is None:
            return
    try:
        if issubclass(category, HetNetWarning):
            s = "%s: %s\n" % (_prog, message)
        else:
            s = warnings.formatwarning(message, category,
                                       filename, lineno, line)
        file.write(s)
    except OSError:
        pass

def add_config_argument(parser):
    parser.add_argument('config', type=Path,
                        help=("network configuration file (JSON)"))
    parser.add_argument('--mode', choices=[m.value for m in Mode],
                        help=("evaluate the network in this mode, "
                              "default: as set in the configuration"))

def add_run_options(parser, method=True, simulation=True):
    if method:
        parser.add_argument('--method', choices=[m.value for m in Method],
                            help=("evaluation method"))
    if simulation:
        parser.add_argument('--drops', type=int,
                            help=("number of Monte Carlo drops"))
        parser.add_argument('--seed', type=int,
                            help=("seed of the Monte Carlo simulation"))
        parser.add_argument('--window-macros', dest='window_macros',
                            type=float,
                            help=("mean number of macro BSs in the "
                                  "simulation window"))
    parser.add_argument('--workers', type=int,
                        help=("number of worker processes"))
    parser.add_argument('--outdir', type=Path,
                        help=("directory to write output files to"))

def load_network(args):
    """Read the network configuration, applying the --mode option.
    """
    network = load_config(args.config)
    if getattr(args, 'mode', None):
        network = network.replace(mode=Mode(args.mode))
    return network

def sim_args(config):
    return dict(drops=config.drops, seed=config.seed,
                workers=config.workers, window_macros=config.window_macros)

def new_manifest(args, network, method, seed=None):
    return RunManifest(command=[_prog] + args.argv, config=network,
                       seed=seed, method=method)

def output_path(config, name):
    outdir = config.outdir
    outdir.mkdir(parents=True, exist_ok=True)
    return outdir / name

def per_macro_cell(density):
    return density * MACRO_CELL_AREA

def fmt(value):
    """Format a float for CSV output, None and NaN become empty.
    """
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return None
    return repr(float(value))

def hetcache_tool(argv=None):
    global _prog
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")
    warnings.showwarning = showwarning
    if argv is None:
        argv = sys.argv[1:]
    argparser = argparse.ArgumentParser()
    _prog = argparser.prog
    argparser.add_argument('-v', '--verbose', action='store_true',
                           help=("verbose diagnostic output"))
    subparsers = argparser.add_subparsers(title='subcommands', dest='subcmd')
    for sc in subcmds:
        m = importlib.import_module('hetcache.cli.%s' % sc)
        m.add_parser(subparsers)
    args = argparser.parse_args(argv)
    args.argv = list(argv)

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    if not hasattr(args, "func"):
        argparser.error("subcommand is required")

    try:
        config = Config(args, config_section=(args.subcmd,))
    except ConfigError as e:
        print("%s: configuration error: %s" % (argparser.prog, e),
              file=sys.stderr)
        sys.exit(2)

    try:
        sys.exit(args.func(args, config))
    except ArgError as e:
        argparser.error(str(e))
    except HetNetError as e:
        if isinstance(e, (ConfigError, PreconditionError)):
            status = 2
        else:
            status = 3
        print("%s %s: error: %s" % (argparser.prog, args.subcmd, e),
              file=sys.stderr)
        sys.exit(status)
