"""Interval kernel: outward-rounded intervals, boxes, dual numbers and
mode-generic elementary functions.

Python exposes no control over the FPU rounding mode, so every inexact
endpoint is pushed outward by ``OUTWARD_ULPS`` units in the last place with
``math.nextafter``.  Results known to be exact (adding zero, multiplying by
one, ``log(1)`` and the like) are left alone so that exact zeros survive.

The elementary functions at the bottom of the module (``cos``, ``power``,
``log`` ...) dispatch on their argument: plain floats go to :mod:`math`,
numpy arrays to numpy, :class:`Interval` to the rigorous enclosures and
:class:`Dual` to forward-mode differentiation whose parts may themselves be
any of the above.  Formulas are written once against this surface.
"""
from __future__ import annotations

import ast
import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DivisionByZeroInterval, DomainError, InvalidInterval

OUTWARD_ULPS = 2

_INF = math.inf
_nextafter = math.nextafter

# Two consecutive doubles bracketing pi.
PI_LO = 3.141592653589793
PI_HI = 3.1415926535897936
assert PI_LO < PI_HI and _nextafter(PI_LO, _INF) == PI_HI


def round_down(x: float) -> float:
    """Move ``x`` down by OUTWARD_ULPS ulps (no-op on -inf)."""
    for _ in range(OUTWARD_ULPS):
        x = _nextafter(x, -_INF)
    return x


def round_up(x: float) -> float:
    for _ in range(OUTWARD_ULPS):
        x = _nextafter(x, _INF)
    return x


def _add_dn(x, y):
    z = x + y
    if x == 0.0 or y == 0.0 or z == 0.0:
        # a sum that rounds to zero is exact (gradual underflow)
        return z
    return round_down(z)


def _add_up(x, y):
    z = x + y
    if x == 0.0 or y == 0.0 or z == 0.0:
        return z
    return round_up(z)


def _mul_raw(x, y):
    # interval convention: 0 * inf = 0
    if x == 0.0 or y == 0.0:
        return 0.0, True
    z = x * y
    return z, (x == 1.0 or x == -1.0 or y == 1.0 or y == -1.0)


def _mul_dn(x, y):
    z, exact = _mul_raw(x, y)
    return z if exact else round_down(z)


def _mul_up(x, y):
    z, exact = _mul_raw(x, y)
    return z if exact else round_up(z)


def _div_dn(x, y):
    if x == 0.0:
        return 0.0
    z = x / y
    if y == 1.0 or y == -1.0:
        return z
    return round_down(z)


def _div_up(x, y):
    if x == 0.0:
        return 0.0
    z = x / y
    if y == 1.0 or y == -1.0:
        return z
    return round_up(z)


def _mk(lo, hi):
    if lo != lo or hi != hi:
        raise InvalidInterval("NaN endpoint produced")
    iv = object.__new__(Interval)
    iv.lo = lo
    iv.hi = hi
    return iv


class Interval:
    """Closed interval [lo, hi] of reals.

    Endpoints are floats and may be infinite; ``is_bounded`` reports that.
    A NaN endpoint or ``lo > hi`` raises :class:`InvalidInterval`.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        if isinstance(lo, Fraction) or isinstance(hi, Fraction):
            lo_iv = Interval.from_fraction(Fraction(lo))
            hi_iv = Interval.from_fraction(Fraction(hi))
            lo, hi = lo_iv.lo, hi_iv.hi
        lo = float(lo)
        hi = float(hi)
        if lo != lo or hi != hi:
            raise InvalidInterval("NaN endpoint")
        if lo > hi:
            raise InvalidInterval(f"lo > hi: [{lo!r}, {hi!r}]")
        self.lo = lo
        self.hi = hi

    # --- constructors -------------------------------------------------
    @staticmethod
    def point(x: float) -> "Interval":
        return Interval(x, x)

    @staticmethod
    def from_fraction(fr: Fraction) -> "Interval":
        """Tightest float enclosure of an exact rational."""
        f = float(fr)
        back = Fraction(f)
        if back == fr:
            return _mk(f, f)
        if back < fr:
            return _mk(f, _nextafter(f, _INF))
        return _mk(_nextafter(f, -_INF), f)

    @staticmethod
    def hull_of(items: Iterable["Interval | float"]) -> "Interval":
        lo, hi = _INF, -_INF
        for it in items:
            it = _as_interval(it)
            lo = min(lo, it.lo)
            hi = max(hi, it.hi)
        return _mk(lo, hi)

    # --- queries -------------------------------------------------------
    def width(self) -> float:
        return self.hi - self.lo

    def mid(self) -> float:
        if self.lo == -_INF or self.hi == _INF:
            if self.lo == -_INF and self.hi == _INF:
                return 0.0
            return self.lo if self.hi == _INF else self.hi
        m = 0.5 * (self.lo + self.hi)
        return min(max(m, self.lo), self.hi)

    def is_point(self) -> bool:
        return self.lo == self.hi

    def is_bounded(self) -> bool:
        return self.lo > -_INF and self.hi < _INF

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def hull(self, other) -> "Interval":
        other = _as_interval(other)
        return _mk(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersect(self, other: "Interval") -> "Interval":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            raise InvalidInterval("empty intersection")
        return _mk(lo, hi)

    def mag(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    # --- arithmetic ----------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return _mk(_add_dn(self.lo, o.lo), _add_up(self.hi, o.hi))

    __radd__ = __add__

    def __neg__(self):
        return _mk(-self.hi, -self.lo)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return _mk(_add_dn(self.lo, -o.hi), _add_up(self.hi, -o.lo))

    def __rsub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o.__sub__(self)

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        a, b = self, o
        if a.lo >= 0.0 and b.lo >= 0.0:
            return _mk(_mul_dn(a.lo, b.lo), _mul_up(a.hi, b.hi))
        pairs = ((a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi))
        lo = min(_mul_dn(x, y) for x, y in pairs)
        hi = max(_mul_up(x, y) for x, y in pairs)
        return _mk(lo, hi)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        if o.lo <= 0.0 <= o.hi:
            raise DivisionByZeroInterval(f"division by {o!r}")
        a = self
        pairs = ((a.lo, o.lo), (a.lo, o.hi), (a.hi, o.lo), (a.hi, o.hi))
        lo = min(_div_dn(x, y) for x, y in pairs)
        hi = max(_div_up(x, y) for x, y in pairs)
        return _mk(lo, hi)

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o.__truediv__(self)

    def __pow__(self, q):
        if isinstance(q, int) and q >= 0:
            return ipow_int(self, q)
        return power(self, q)

    def __rpow__(self, base):
        return power(base, self)

    def __eq__(self, other):
        if isinstance(other, Interval):
            return self.lo == other.lo and self.hi == other.hi
        return NotImplemented

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"

    def as_list(self):
        return [self.lo, self.hi]


def _as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, Fraction):
        return Interval.from_fraction(x)
    return _mk(float(x), float(x))


def _coerce(x):
    if isinstance(x, Interval):
        return x
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        xf = float(x)
        if isinstance(x, int) and int(xf) != x:
            return Interval.from_fraction(Fraction(x))
        return _mk(xf, xf)
    if isinstance(x, Fraction):
        return Interval.from_fraction(x)
    return NotImplemented


# --- interval elementary functions -------------------------------------

def isqr(a: Interval) -> Interval:
    if a.lo >= 0.0:
        return _mk(_mul_dn(a.lo, a.lo), _mul_up(a.hi, a.hi))
    if a.hi <= 0.0:
        return _mk(_mul_dn(a.hi, a.hi), _mul_up(a.lo, a.lo))
    m = max(-a.lo, a.hi)
    return _mk(0.0, _mul_up(m, m))


def ipow_int(a: Interval, n: int) -> Interval:
    if n == 0:
        return _mk(1.0, 1.0)
    if n == 1:
        return a
    if n % 2 == 0:
        return ipow_int(isqr(a), n // 2)
    return a * ipow_int(a, n - 1)


def _safe(fn, x):
    try:
        return fn(x)
    except OverflowError:
        return _INF


def iexp(a: Interval) -> Interval:
    if a.lo == a.hi == 0.0:
        return _mk(1.0, 1.0)
    lo = 0.0 if a.lo == -_INF else max(0.0, round_down(_safe(math.exp, a.lo)))
    if a.lo == 0.0:
        lo = 1.0
    hi = _INF if a.hi == _INF else round_up(_safe(math.exp, a.hi))
    if a.hi == 0.0:
        hi = 1.0
    return _mk(lo, hi)


def ilog(a: Interval) -> Interval:
    if a.lo <= 0.0:
        raise DomainError(f"log of nonpositive interval {a!r}")
    lo = 0.0 if a.lo == 1.0 else round_down(math.log(a.lo))
    if a.hi == _INF:
        hi = _INF
    else:
        hi = 0.0 if a.hi == 1.0 else round_up(math.log(a.hi))
    return _mk(lo, hi)


def isqrt(a: Interval) -> Interval:
    if a.lo < 0.0:
        raise DomainError(f"sqrt of negative interval {a!r}")

    def s(x, rnd):
        if x == 0.0 or x == 1.0 or x == _INF:
            return math.sqrt(x)
        return rnd(math.sqrt(x))

    return _mk(max(0.0, s(a.lo, round_down)), s(a.hi, round_up))


def _pi_multiple(c: float) -> Interval:
    """Enclosure of c*pi for a float multiplier c (c a half-integer here)."""
    x, y = _mul_dn(c, PI_LO), _mul_up(c, PI_HI)
    if c < 0:
        x, y = _mul_dn(c, PI_HI), _mul_up(c, PI_LO)
    return _mk(x, y)


def _critical_hits(a: Interval, offset: float):
    """Integers k such that (k + offset)*pi may lie in ``a``."""
    k0 = math.floor(a.lo / PI_HI - offset) - 1
    k1 = math.ceil(a.hi / PI_LO - offset) + 1
    for k in range(k0, k1 + 1):
        if _pi_multiple(k + offset).overlaps(a):
            yield k


def _trig(a: Interval, fn, offset: float) -> Interval:
    if not a.is_bounded():
        return _mk(-1.0, 1.0)
    if a.hi - a.lo >= 2.0 * PI_LO:
        return _mk(-1.0, 1.0)
    v1, v2 = fn(a.lo), fn(a.hi)
    lo = round_down(min(v1, v2))
    hi = round_up(max(v1, v2))
    for k in _critical_hits(a, offset):
        if k % 2 == 0:
            hi = 1.0
        else:
            lo = -1.0
    return _mk(max(lo, -1.0), min(hi, 1.0))


def isin(a: Interval) -> Interval:
    if a.lo == a.hi == 0.0:
        return _mk(0.0, 0.0)
    # maxima of sin at (2j + 1/2)pi: even k in (k + 1/2)pi
    return _trig(a, math.sin, 0.5)


def icos(a: Interval) -> Interval:
    if a.lo == a.hi == 0.0:
        return _mk(1.0, 1.0)
    # maxima of cos at 2j*pi: even k in k*pi
    return _trig(a, math.cos, 0.0)


def itan(a: Interval) -> Interval:
    if not a.is_bounded():
        raise DomainError("tan of unbounded interval")
    for _ in _critical_hits(a, 0.5):
        raise DomainError(f"tan across a pole on {a!r}")
    if a.lo == a.hi == 0.0:
        return _mk(0.0, 0.0)
    return _mk(round_down(math.tan(a.lo)), round_up(math.tan(a.hi)))


def _pw(x: float, q: float, rnd) -> float:
    if x == 0.0:
        if q > 0:
            return 0.0
        raise DomainError("0 raised to a nonpositive power")
    if x == 1.0 or q == 0.0:
        return 1.0
    if x == _INF:
        return _INF if q > 0 else 0.0
    try:
        v = math.pow(x, q)
    except OverflowError:
        return _INF
    if q == 1.0:
        return v
    return rnd(v)


def ipower(a: Interval, q) -> Interval:
    """Enclosure of {x**q : x in a} for a >= 0 and real or interval q."""
    if isinstance(q, Interval):
        if q.lo == q.hi:
            q = q.lo
        else:
            if a.lo < 0.0:
                raise DomainError(f"power of negative base {a!r}")
            if a.lo == 0.0 and q.lo <= 0.0:
                raise DomainError("0 in base with nonpositive exponent")
            xs, qs = (a.lo, a.hi), (q.lo, q.hi)
            lo = min(_pw(x, y, round_down) for x in xs for y in qs)
            hi = max(_pw(x, y, round_up) for x in xs for y in qs)
            return _mk(max(lo, 0.0), hi)
    q = float(q)
    if q == 0.0:
        return _mk(1.0, 1.0)
    if a.lo < 0.0:
        raise DomainError(f"power of negative base {a!r}")
    if q == 1.0:
        return a
    if q == 2.0:
        return isqr(a)
    if q > 0:
        return _mk(max(_pw(a.lo, q, round_down), 0.0), _pw(a.hi, q, round_up))
    if a.lo == 0.0:
        raise DomainError("0 in base with negative exponent")
    return _mk(max(_pw(a.hi, q, round_down), 0.0), _pw(a.lo, q, round_up))


# --- boxes ----------------------------------------------------------------

class Box:
    """Cartesian product of intervals."""

    __slots__ = ("intervals",)

    def __init__(self, intervals: Sequence[Interval]):
        if len(intervals) < 1:
            raise ValueError("a box needs at least one coordinate")
        self.intervals = tuple(_as_interval(iv) for iv in intervals)

    def __len__(self):
        return len(self.intervals)

    def __getitem__(self, i):
        return self.intervals[i]

    def __iter__(self):
        return iter(self.intervals)

    def __repr__(self):
        return "Box(" + " x ".join(f"[{iv.lo:.17g}, {iv.hi:.17g}]" for iv in self.intervals) + ")"

    def __eq__(self, other):
        return isinstance(other, Box) and self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def midpoint(self) -> tuple:
        return tuple(iv.mid() for iv in self.intervals)

    def widths(self, scale: Sequence[float] | None = None) -> list:
        w = [iv.width() for iv in self.intervals]
        if scale is not None:
            w = [wi / si if si > 0 else wi for wi, si in zip(w, scale)]
        return w

    def width(self, scale=None) -> float:
        return max(self.widths(scale))

    def widest_axis(self, scale=None) -> int:
        w = self.widths(scale)
        return w.index(max(w))

    def bisect(self, axis: int | None = None, scale=None) -> tuple:
        if axis is None:
            axis = self.widest_axis(scale)
        iv = self.intervals[axis]
        m = iv.mid()
        left = list(self.intervals)
        right = list(self.intervals)
        left[axis] = _mk(iv.lo, m)
        right[axis] = _mk(m, iv.hi)
        return Box(left), Box(right)

    def replace(self, axis: int, iv: Interval) -> "Box":
        items = list(self.intervals)
        items[axis] = _as_interval(iv)
        return Box(items)

    def contains(self, point) -> bool:
        return all(iv.contains(x) for iv, x in zip(self.intervals, point))

    def as_lists(self):
        return [iv.as_list() for iv in self.intervals]


# --- endpoint expressions --------------------------------------------------

_BIN = {ast.Add: "add", ast.Sub: "sub", ast.Mult: "mul", ast.Div: "div",
        ast.Pow: "pow", ast.BitXor: "pow"}


def parse_endpoint(text, names: dict | None = None) -> Interval:
    """Enclose a small closed-form constant such as ``"4/3"``, ``"pi"`` or
    ``"2^(4/3)"``.  Rational subexpressions are kept exact until the end.
    ``names`` binds further identifiers (for instance ``p``) to Intervals."""
    names = names or {}
    if isinstance(text, (int, float)):
        return _as_interval(text)
    src = str(text).strip()
    tree = ast.parse(src, mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            seg = ast.get_source_segment(src, node)
            return Fraction(seg) if seg is not None else Fraction(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return _mk(PI_LO, PI_HI)
        if isinstance(node, ast.Name) and node.id in names:
            return _as_interval(names[node.id])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BIN:
            x, y = ev(node.left), ev(node.right)
            op = _BIN[type(node.op)]
            if op == "pow":
                if isinstance(x, Fraction) and isinstance(y, Fraction) and y.denominator == 1:
                    return x ** int(y)
                return ipower(_as_interval(x), _as_interval(y))
            if isinstance(x, Fraction) and isinstance(y, Fraction):
                return {"add": x + y, "sub": x - y, "mul": x * y, "div": x / y}[op]
            x, y = _as_interval(x), _as_interval(y)
            return {"add": x + y, "sub": x - y, "mul": x * y, "div": x / y}[op]
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and len(node.args) == 1:
            fn = {"sqrt": isqrt, "log": ilog, "exp": iexp, "sin": isin, "cos": icos}.get(node.func.id)
            if fn is not None:
                return fn(_as_interval(ev(node.args[0])))
        raise ValueError(f"unsupported endpoint expression: {src!r}")

    return _as_interval(ev(tree))


# --- forward-mode dual numbers ---------------------------------------------

class Dual:
    """Forward-mode dual number ``val + der*eps``.

    Both parts may be floats, Intervals or Duals, so nesting gives higher
    and mixed derivatives.  With Interval parts this is the DualInterval of
    the certifier.  Arguments that take part in one differentiation must all
    be wrapped at the same nesting level; plain values act as constants.
    """

    __slots__ = ("val", "der")

    def __init__(self, val, der=0.0):
        self.val = val
        self.der = der

    def __repr__(self):
        return f"Dual({self.val!r}, {self.der!r})"

    def __add__(self, o):
        if isinstance(o, Dual):
            return Dual(self.val + o.val, self.der + o.der)
        return Dual(self.val + o, self.der)

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, Dual):
            return Dual(self.val - o.val, self.der - o.der)
        return Dual(self.val - o, self.der)

    def __rsub__(self, o):
        return Dual(o - self.val, -self.der)

    def __neg__(self):
        return Dual(-self.val, -self.der)

    def __pos__(self):
        return self

    def __mul__(self, o):
        if isinstance(o, Dual):
            return Dual(self.val * o.val, self.val * o.der + self.der * o.val)
        return Dual(self.val * o, self.der * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Dual):
            q = self.val / o.val
            return Dual(q, (self.der - q * o.der) / o.val)
        return Dual(self.val / o, self.der / o)

    def __rtruediv__(self, o):
        q = o / self.val
        return Dual(q, -(q * self.der) / self.val)

    def __pow__(self, q):
        if isinstance(q, int) and q >= 0:
            out = 1.0
            for _ in range(q):
                out = self * out
            return out
        return power(self, q)

    def __rpow__(self, base):
        return power(base, self)


DualInterval = Dual


# --- mode dispatch ------------------------------------------------------------

def is_rigorous(x) -> bool:
    """True when ``x`` is an Interval or a Dual built on Intervals."""
    while isinstance(x, Dual):
        x = x.val
    return isinstance(x, Interval)


def pi_for(*args):
    """pi in the numeric mode of ``args``: the enclosure if any is rigorous."""
    if any(is_rigorous(a) for a in args):
        return _mk(PI_LO, PI_HI)
    return math.pi


def lift(v, *like):
    """Promote a float constant to a point Interval when ``like`` is rigorous."""
    if any(is_rigorous(a) for a in like):
        return _as_interval(v)
    return v


def cos(x):
    if isinstance(x, Dual):
        return Dual(cos(x.val), -sin(x.val) * x.der)
    if isinstance(x, Interval):
        return icos(x)
    if isinstance(x, np.ndarray):
        return np.cos(x)
    return math.cos(x)


def sin(x):
    if isinstance(x, Dual):
        return Dual(sin(x.val), cos(x.val) * x.der)
    if isinstance(x, Interval):
        return isin(x)
    if isinstance(x, np.ndarray):
        return np.sin(x)
    return math.sin(x)


def tan(x):
    if isinstance(x, Dual):
        t = tan(x.val)
        return Dual(t, (1.0 + sqr(t)) * x.der)
    if isinstance(x, Interval):
        return itan(x)
    if isinstance(x, np.ndarray):
        return np.tan(x)
    return math.tan(x)


def exp(x):
    if isinstance(x, Dual):
        e = exp(x.val)
        return Dual(e, e * x.der)
    if isinstance(x, Interval):
        return iexp(x)
    if isinstance(x, np.ndarray):
        return np.exp(x)
    return math.exp(x)


def log(x):
    if isinstance(x, Dual):
        return Dual(log(x.val), x.der / x.val)
    if isinstance(x, Interval):
        return ilog(x)
    if isinstance(x, np.ndarray):
        return np.log(x)
    if x <= 0:
        raise DomainError(f"log of nonpositive value {x!r}")
    return math.log(x)


def sqrt(x):
    if isinstance(x, Dual):
        r = sqrt(x.val)
        return Dual(r, x.der / (2.0 * r))
    if isinstance(x, Interval):
        return isqrt(x)
    if isinstance(x, np.ndarray):
        return np.sqrt(x)
    if x < 0:
        raise DomainError(f"sqrt of negative value {x!r}")
    return math.sqrt(x)


def sqr(x):
    if isinstance(x, Dual):
        return Dual(sqr(x.val), 2.0 * x.val * x.der)
    if isinstance(x, Interval):
        return isqr(x)
    return x * x


def power(x, q):
    """x**q for a nonnegative base, in any numeric mode."""
    if isinstance(q, Dual):
        if isinstance(x, Dual):
            y = power(x.val, q.val)
            return Dual(y, y * (q.der * log(x.val) + q.val * x.der / x.val))
        y = power(x, q.val)
        return Dual(y, y * log(x) * q.der)
    if isinstance(x, Dual):
        if not isinstance(q, Interval) and q == 0:
            return Dual(power(x.val, 0.0), 0.0 * x.der)
        return Dual(power(x.val, q), q * power(x.val, q - 1.0) * x.der)
    if isinstance(x, Interval) or isinstance(q, Interval):
        return ipower(_as_interval(x), q)
    if isinstance(x, np.ndarray) or isinstance(q, np.ndarray):
        return np.power(x, q)
    try:
        return math.pow(x, q)
    except ValueError as exc:
        raise DomainError(f"{x!r} ** {q!r}: {exc}") from None


def csc(x):
    return 1.0 / sin(x)


def cot(x):
    return cos(x) / sin(x)


def sec(x):
    return 1.0 / cos(x)


def hull(a, b) -> Interval:
    return _as_interval(a).hull(b)


def value_interval(v) -> Interval:
    """Interval view of a float, Interval, or the value part of a Dual."""
    while isinstance(v, Dual):
        v = v.val
    return _as_interval(v)
