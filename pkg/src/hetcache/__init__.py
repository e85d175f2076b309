"""Area spectral efficiency of cache enabled heterogeneous networks

This package evaluates the area spectral efficiency (ASE) of two tier
cellular networks, where the second tier either consists of pico base
stations with a capacity limited backhaul or of helper nodes caching
popular content.  The ASE is obtained from integral expressions, from
closed form approximations and by Monte Carlo simulation.
"""

try:
    from ._meta import version as __version__
except ImportError:
    __version__ = "UNKNOWN"
from .exception import *
from .model import NetworkConfig, TierParams, ZipfCatalog, Mode, load_config
from .conventional import Method, RateReport, ase_conventional
from .cached import ase_cached
