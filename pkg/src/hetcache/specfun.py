"""Special functions for the interference Laplace functionals.

The Gauss hypergeometric function is only ever needed for real,
non-positive arguments.  It is evaluated by its power series near the
origin, by the Pfaff transformation for moderate arguments and by the
two-term transformation in 1/z for large arguments, so that the power
series is never summed for |argument| > 2/3.
"""

import math
import numpy as np
import scipy.special
from .exception import ConvergenceError, PreconditionError


SERIES_TOL = 1.0e-16
SERIES_MAX_TERMS = 10000
Z_SERIES = 0.5
Z_PFAFF = 2.0
DEGENERATE_SHIFT = 1.0e-9


def gamma_fn(x):
    """The Gamma function for positive real arguments.
    """
    if not x > 0:
        raise PreconditionError("gamma_fn: argument must be positive, "
                                "got %r" % x)
    return float(scipy.special.gamma(x))


def pochhammer(x, n):
    """Rising factorial (x)_n = x (x+1) ... (x+n-1).

    For integer n the product is formed term by term, so integer x
    yields an exact integer result.
    """
    if isinstance(n, (int, np.integer)) and n >= 0:
        p = 1
        for i in range(n):
            p *= x + i
        return p
    return float(scipy.special.poch(x, n))


def _is_nonpositive_int(v):
    return v <= 0 and v == math.floor(v)


def _series(a, b, c, z):
    term = 1.0
    total = 1.0
    for n in range(SERIES_MAX_TERMS):
        prev = term
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        if term == 0.0:
            return total
        if abs(term) <= SERIES_TOL * abs(total) and abs(term) < abs(prev):
            return total
    raise ConvergenceError("hyp2f1(%g, %g; %g; %g)" % (a, b, c, z),
                           SERIES_MAX_TERMS, total)


def _inverse_transform(a, b, c, z):
    if (a - b) == math.floor(a - b):
        b += DEGENERATE_SHIFT
    rg = scipy.special.rgamma
    w = 1.0 / z
    t1 = (scipy.special.gamma(c) * scipy.special.gamma(b - a)
          * rg(b) * rg(c - a) * (-z) ** (-a))
    t2 = (scipy.special.gamma(c) * scipy.special.gamma(a - b)
          * rg(a) * rg(c - b) * (-z) ** (-b))
    s1 = _series(a, a - c + 1.0, a - b + 1.0, w) if t1 != 0.0 else 0.0
    s2 = _series(b, b - c + 1.0, b - a + 1.0, w) if t2 != 0.0 else 0.0
    return float(t1 * s1 + t2 * s2)


def hyp2f1(a, b, c, z):
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z <= 0.
    """
    if z > 0:
        raise PreconditionError("hyp2f1: argument must not be positive, "
                                "got %r" % z)
    if _is_nonpositive_int(c):
        raise PreconditionError("hyp2f1: c must not be a non-positive "
                                "integer, got %r" % c)
    if a == 0 or b == 0 or z == 0:
        return 1.0
    az = abs(z)
    if az <= Z_SERIES:
        return _series(a, b, c, z)
    elif az <= Z_PFAFF:
        # 2F1(a,b;c;z) = (1-z)^-a 2F1(a,c-b;c;z/(z-1))
        return (1.0 - z) ** (-a) * _series(a, c - b, c, z / (z - 1.0))
    else:
        return _inverse_transform(a, b, c, z)


def _tier_pair(config, j, k):
    tj = config.tier(j)
    tk = config.tier(k)
    return tj, tk, tj.antennas / tk.antennas


def _require_equal_alpha(config, what):
    if not config.equal_alpha:
        raise PreconditionError("%s requires equal pathloss exponents" % what)
    return config.tier1.alpha


def z_exact(x, j, k, config):
    """Z_j(x) = 2F1(-2/a_j, M_j; 1-2/a_j; (1-e^x)/M^_j) - 1.

    Here M^_j is the antenna number of tier j normalized to the
    serving tier k.
    """
    if x < 0:
        raise PreconditionError("z_exact: x must not be negative")
    if x == 0:
        return 0.0
    tj, _, m_hat = _tier_pair(config, j, k)
    delta = 2.0 / tj.alpha
    z = -math.expm1(x) / m_hat
    v = hyp2f1(-delta, tj.antennas, 1.0 - delta, z) - 1.0
    if -1.0e-14 < v < 0.0:
        v = 0.0
    return v


def z_low(x, j, k, config):
    """Linear approximation of Z_j(x) for small x.
    """
    alpha = _require_equal_alpha(config, "z_low")
    return 2.0 * config.tier(k).antennas * x / (alpha - 2.0)


def z_high_coefficient(j, k, config):
    """The coefficient of e^(2x/a) in the large x approximation of Z_j.
    """
    alpha = _require_equal_alpha(config, "z_high")
    tj, _, m_hat = _tier_pair(config, j, k)
    delta = 2.0 / alpha
    return (gamma_fn(1.0 - delta) * gamma_fn(tj.antennas + delta)
            / (gamma_fn(tj.antennas) * m_hat ** delta))


def z_high(x, j, k, config):
    """Approximation of Z_j(x) for large x.
    """
    alpha = config.tier1.alpha
    return z_high_coefficient(j, k, config) * math.exp(2.0 * x / alpha) - 1.0


def z_piecewise(x, j, k, config):
    """Z_low below ln 2, Z_high above.
    """
    if x <= math.log(2.0):
        return z_low(x, j, k, config)
    else:
        return z_high(x, j, k, config)
