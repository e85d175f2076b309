"""Manage tool settings.

Settings determine how the command line tool runs, not the network
that is analyzed.  Values are looked up from the command line options
first, then from the subcommand section and the DEFAULT section of the
configuration file, then from built-in defaults.

.. note::
   This module is intended as a helper for the internal use in the
   command line tool.  It is not considered to be part of the API of
   hetcache.
"""

from collections import ChainMap
import configparser
import os
from pathlib import Path
from .exception import ConfigError
from .tools import get_workers


def get_config_file():
    try:
        return os.environ['HETCACHE_CFG']
    except KeyError:
        return "/etc/hetcache.cfg"


class Config(ChainMap):

    defaults = {
        'workers': "1",
        'drops': "200",
        'seed': "1",
        'window_macros': "100",
        'closed_tol': "0.08",
        'mc_tol': "0.10",
        'method': "closed_form",
        'outdir': ".",
    }
    args_options = ('workers', 'drops', 'seed', 'window_macros', 'method',
                    'outdir')

    def __init__(self, args, config_section=None):
        args_cfg = { k:vars(args)[k]
                     for k in self.args_options
                     if vars(args).get(k) is not None }
        super().__init__({}, args_cfg)
        self.config_file = None
        self.config_section = []
        if config_section:
            cp = configparser.ConfigParser(comment_prefixes=('#', '!'),
                                           interpolation=None)
            try:
                self.config_file = cp.read(get_config_file())
            except configparser.Error as e:
                raise ConfigError("invalid configuration file: %s" % e)
            if isinstance(config_section, str):
                config_section = (config_section,)
            for section in config_section:
                if cp.has_section(section):
                    self.maps.append(cp[section])
                    self.config_section.append(section)
            self.maps.append(cp.defaults())
        self.maps.append(self.defaults)

    def get(self, key, required=False, subst=True, type=None):
        value = super().get(key)
        if value is None:
            if required:
                raise ConfigError("%s not specified" % key)
        else:
            if subst and isinstance(value, str):
                value = value % self
            if type:
                try:
                    value = type(value)
                except ValueError as e:
                    raise ConfigError("invalid value for %s: %s" % (key, e))
        return value

    @property
    def workers(self):
        return get_workers(self.get('workers', type=int))

    @property
    def drops(self):
        return self.get('drops', required=True, type=int)

    @property
    def seed(self):
        return self.get('seed', required=True, type=int)

    @property
    def window_macros(self):
        return self.get('window_macros', required=True, type=float)

    @property
    def closed_tol(self):
        return self.get('closed_tol', required=True, type=float)

    @property
    def mc_tol(self):
        return self.get('mc_tol', required=True, type=float)

    @property
    def method(self):
        return self.get('method', required=True)

    @property
    def outdir(self):
        return self.get('outdir', required=True, type=Path)
