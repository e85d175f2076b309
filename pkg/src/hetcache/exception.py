"""Exception handling.
"""

class _BaseException(Exception):
    """An exception that tries to suppress misleading context.

    `Exception Chaining and Embedded Tracebacks`_ has been introduced
    with Python 3.  Unfortunately the result is completely misleading
    most of the times.  This class supresses the context in
    :meth:`__init__`.

    .. _Exception Chaining and Embedded Tracebacks: https://www.python.org/dev/peps/pep-3134/

    """
    def __init__(self, *args):
        super().__init__(*args)
        if hasattr(self, '__cause__'):
            self.__cause__ = None

class HetNetError(_BaseException):
    pass

class ConfigError(HetNetError):
    pass

class PreconditionError(HetNetError):
    pass

class NumericalError(HetNetError):
    pass

class ConvergenceError(NumericalError):
    """A series failed to converge within the maximum number of terms.
    """
    def __init__(self, what, nterms, partial_sum):
        self.what = what
        self.nterms = nterms
        self.partial_sum = partial_sum
        super().__init__("%s: no convergence after %d terms "
                         "(partial sum %.16g)" % (what, nterms, partial_sum))

class QuadratureError(NumericalError):
    def __init__(self, what, detail):
        self.what = what
        self.detail = detail
        super().__init__("%s: quadrature failed: %s" % (what, detail))

class NoSolutionError(HetNetError):
    """The target value is not bracketed by the search interval.
    """
    def __init__(self, target, value_lo, value_hi, what="ASE"):
        self.target = target
        self.value_lo = value_lo
        self.value_hi = value_hi
        super().__init__("target %s %.6g not within [%.6g, %.6g]"
                         % (what, target, value_lo, value_hi))

class SimulationError(HetNetError):
    pass

class HetNetWarning(Warning):
    pass

class ArgError(_BaseException):
    pass
