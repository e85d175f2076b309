"""Parse density expressions and sweep specifications.

Densities are conventionally written relative to the macro cell area,
e.g. ``50/(500^2*pi)`` or ``50/(500²π)``.  A sweep specification has
the form ``var=lo:hi:n[:log|lin]`` where lo and hi are expressions of
the same kind.
"""

from collections import namedtuple
import math
from lark import Lark, Transformer
from lark.exceptions import LarkError
from .exception import ArgError


_expr_grammar = r"""
    value: expr

    sweep: NAME "=" expr ":" expr ":" NUMBER [":" SCALE]

    ?expr: term
         | expr "+" term        -> add
         | expr "-" term        -> sub

    ?term: factor
         | term "*" factor      -> mul
         | term "/" factor      -> div
         | term PI              -> mulpi

    ?factor: power
           | "-" factor         -> neg
           | "+" factor

    ?power: atom
          | atom "^" factor     -> pow
          | atom "**" factor    -> pow
          | atom "²"            -> square

    ?atom: NUMBER               -> number
         | PI                   -> pi
         | "(" expr ")"

    PI: "pi" | "π"
    SCALE: "log" | "lin"

    %import common.NUMBER
    %import common.CNAME -> NAME
    %import common.WS
    %ignore WS
"""

SweepArgs = namedtuple('SweepArgs', ('var', 'lo', 'hi', 'n', 'log'))

class _ExprTf(Transformer):

    def number(self, l):
        (v,) = l
        return float(v)

    def pi(self, l):
        return math.pi

    def add(self, l):
        (a, b) = l
        return a + b

    def sub(self, l):
        (a, b) = l
        return a - b

    def mul(self, l):
        (a, b) = l
        return a * b

    def div(self, l):
        (a, b) = l
        return a / b

    def mulpi(self, l):
        (a, _) = l
        return a * math.pi

    def neg(self, l):
        (a,) = l
        return -a

    def pow(self, l):
        (a, b) = l
        return a ** b

    def square(self, l):
        (a,) = l
        return a * a

    def value(self, l):
        (v,) = l
        return v

    def sweep(self, l):
        var, lo, hi, n, scale = l
        if float(n) != int(float(n)):
            raise ArgError("number of grid points must be an integer")
        return SweepArgs(str(var), lo, hi, int(float(n)),
                         scale is not None and str(scale) == "log")

_parser = Lark(_expr_grammar, start=['value', 'sweep'], parser='lalr',
               transformer=_ExprTf(), maybe_placeholders=True)


def parse_value(spec):
    """Evaluate a numeric expression such as ``50/(500^2*pi)``.

    Plain int and float values are passed through.
    """
    if isinstance(spec, (int, float)):
        return float(spec)
    try:
        return _parser.parse(str(spec), start='value')
    except ZeroDivisionError:
        raise ArgError("invalid expression '%s': division by zero" % spec)
    except LarkError as e:
        raise ArgError("invalid expression '%s': %s"
                       % (spec, str(e).splitlines()[0]))


def parse_sweep(spec):
    """Parse a sweep specification ``var=lo:hi:n[:log|lin]``.
    """
    try:
        sweep = _parser.parse(spec, start='sweep')
    except LarkError as e:
        # Errors raised in the transformer get wrapped by lark.
        orig = getattr(e, 'orig_exc', None)
        if isinstance(orig, ArgError):
            raise orig
        raise ArgError("invalid sweep '%s': %s"
                       % (spec, str(e).splitlines()[0]))
    if sweep.n < 1:
        raise ArgError("invalid sweep '%s': need at least one point" % spec)
    return sweep
