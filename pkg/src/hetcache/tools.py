"""A collection of internal helper routines.

.. note::
   This module is intended for the internal use in hetcache and is
   not considered to be part of the API.  No effort will be made to
   keep anything in here compatible between different versions.
"""

from concurrent.futures import ProcessPoolExecutor
import datetime
import hashlib
import json
import logging
import os
try:
    from dateutil.tz import gettz
except ImportError:
    gettz = None
import packaging.version


log = logging.getLogger(__name__)


class Version(packaging.version.Version):
    """A variant of packaging.version.Version.

    This version adds comparison with strings.

    >>> version = Version('1.1')
    >>> version == '1.1'
    True
    >>> version < '1.0'
    False
    >>> version = Version('2.0a1')
    >>> version > '1.1'
    True
    """
    def __lt__(self, other):
        if isinstance(other, str):
            other = type(self)(other)
        return super().__lt__(other)
    def __le__(self, other):
        if isinstance(other, str):
            other = type(self)(other)
        return super().__le__(other)
    def __eq__(self, other):
        if isinstance(other, str):
            other = type(self)(other)
        return super().__eq__(other)
    def __ge__(self, other):
        if isinstance(other, str):
            other = type(self)(other)
        return super().__ge__(other)
    def __gt__(self, other):
        if isinstance(other, str):
            other = type(self)(other)
        return super().__gt__(other)
    def __ne__(self, other):
        if isinstance(other, str):
            other = type(self)(other)
        return super().__ne__(other)
    def __hash__(self):
        return super().__hash__()


def date_str_rfc5322(dt):
    """Return a RFC 5322 string representation of a datetime.
    """
    return dt.strftime("%a, %d %b %Y %H:%M:%S %z").strip()


def now_str():
    """Return the current local date and time as a string.
    """
    if gettz:
        now = datetime.datetime.now(tz=gettz())
    else:
        now = datetime.datetime.now()
    return date_str_rfc5322(now)


def checksum(data, hashalg=("sha256",)):
    """Calculate hashes of a JSON serializable object.

    The object is serialized with sorted keys, so that equal mappings
    always yield equal hashes.
    """
    blob = json.dumps(data, sort_keys=True, separators=(",", ":")).encode()
    return { h: hashlib.new(h, blob).hexdigest() for h in hashalg }


def get_workers(default=None):
    """Number of worker processes for parallel evaluation.

    The environment variable HETCACHE_WORKERS takes precedence.
    """
    try:
        workers = int(os.environ['HETCACHE_WORKERS'])
    except (KeyError, ValueError):
        workers = default
    if workers is None:
        workers = 1
    return max(1, workers)


def parallel_map(func, items, workers=None):
    """Map func over items, in a process pool if workers > 1.

    The result order always matches the order of items.
    """
    items = list(items)
    workers = get_workers(workers)
    if workers <= 1 or len(items) <= 1:
        return [func(i) for i in items]
    log.debug("distributing %d tasks over %d workers", len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
