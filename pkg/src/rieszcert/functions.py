"""Closed-form functions behind the sharp Riesz-projection estimates.

Every function here is written once against the numeric surface of
:mod:`rieszcert.interval` and therefore evaluates in three modes: floats
(or numpy arrays), Intervals, and Duals over either.  Exponent parameters
``p`` and ``s`` are passed explicitly in the same mode as the variables;
in rigorous mode ``p`` is a point interval and ``s`` an enclosure.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .interval import (
    Dual,
    Interval,
    cos,
    cot,
    csc,
    exp,
    ipower,
    is_rigorous,
    lift,
    log,
    pi_for,
    power,
    sin,
    sqr,
    sqrt,
    tan,
    value_interval,
)

CONJUGACY_TOL = 1e-12


def frac(n: int, d: int, *like):
    """The rational n/d as a float, or as its tight enclosure in rigorous mode."""
    if any(is_rigorous(x) for x in like):
        return Interval.from_fraction(Fraction(n, d))
    return n / d


def _is_plain(*xs) -> bool:
    return all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in xs)


def _check_range(name, x, lo, hi):
    if _is_plain(x) and not (lo <= x <= hi):
        raise DomainError(f"{name}: argument {x!r} outside [{lo}, {hi}]")


# --- exponents and constants --------------------------------------------------

def conjugate_exponent(p: float) -> float:
    if p <= 1:
        raise DomainError(f"conjugate exponent needs p > 1, got {p!r}")
    return p / (p - 1.0)


@dataclass(frozen=True)
class ExponentPair:
    """Lebesgue index p together with the mixing index s."""

    p: float
    s: float

    def __post_init__(self):
        if not self.p > 1:
            raise DomainError(f"p must exceed 1, got {self.p!r}")
        if not self.s > 0:
            raise DomainError(f"s must be positive, got {self.s!r}")

    @classmethod
    def conjugate(cls, p: float) -> "ExponentPair":
        return cls(p, conjugate_exponent(p))

    @property
    def is_conjugate(self) -> bool:
        return abs(self.s - self.p / (self.p - 1.0)) <= CONJUGACY_TOL

    @property
    def forward_range(self) -> bool:
        return 4.0 / 3.0 < self.p < 2.0 and 0 < self.s <= self.p / (self.p - 1.0) + CONJUGACY_TOL

    @property
    def reverse_range(self) -> bool:
        return 2.0 < self.p < 4.0 and self.s >= self.p / (self.p - 1.0) - CONJUGACY_TOL

    def interval_params(self):
        """(p, s) for rigorous evaluation: p exact, s enclosing p/(p-1) when conjugate."""
        p = Interval(self.p)
        if self.is_conjugate:
            s = p / (p - 1.0)
        else:
            s = Interval(self.s)
        return p, s


def sharp_constant_forward(pair: ExponentPair) -> float:
    p, s = pair.p, pair.s
    if not 1 < p <= 2:
        raise DomainError(f"forward constant needs p in (1, 2], got {p!r}")
    return 2.0 ** (1.0 / s) / (2.0 * math.cos(math.pi / (2.0 * p)))


def sharp_constant_reverse(pair: ExponentPair) -> float:
    p, s = pair.p, pair.s
    if not 2 <= p < 4:
        raise DomainError(f"reverse constant needs p in [2, 4), got {p!r}")
    return 2.0 ** (1.0 - 1.0 / s) * math.cos(math.pi / (2.0 * p))


def s_threshold(p: float) -> float:
    if p <= 1:
        raise DomainError("s_threshold needs p > 1")
    a = math.pi / (2.0 * p)
    return max(1.0 / math.cos(a) ** 2, 1.0 / math.sin(a) ** 2)


def _trig_consts(p, *others):
    a = pi_for(p, *others) / (2.0 * p)
    return cos(a), tan(a)


def normalizer(p, *others):
    """1 / (2^p cos^p(pi/2p))."""
    c, _ = _trig_consts(p, *others)
    return power(2.0 * c, -p)


# --- singular quotient ----------------------------------------------------------

def cleared_quotient(r, a, b, extend: bool = True):
    """(1 - r^a) / (1 - r^b) for r in (0, 1], extended to r = 1 by a/b.

    By the Cauchy mean value theorem the quotient equals (a/b) xi^(a-b) for
    some xi between r and 1, which gives an enclosure valid up to r = 1 in
    interval mode.  Float mode returns the limit at r == 1; dual mode has no
    derivative formula at r = 1 and raises DomainError there.
    """
    if isinstance(r, Dual) or isinstance(a, Dual) or isinstance(b, Dual):
        if value_interval(r).hi >= 1.0:
            raise DomainError("cleared quotient is not differentiated at r = 1")
        return (1.0 - power(r, a)) / (1.0 - power(r, b))
    if isinstance(r, Interval) or is_rigorous(a):
        r = value_interval(r)
        a_iv, b_iv = value_interval(a), value_interval(b)
        ratio = a_iv / b_iv
        if r.hi > 1.0:
            raise DomainError("cleared quotient requires r <= 1")
        if r.lo <= 0.0:
            if r.hi >= 1.0:
                raise DomainError("cleared quotient box spans [0, 1]")
            return (1.0 - ipower(r, a_iv)) / (1.0 - ipower(r, b_iv))
        mvt = ratio * ipower(Interval(r.lo, 1.0), a_iv - b_iv)
        if r.hi < 1.0:
            direct = (1.0 - ipower(r, a_iv)) / (1.0 - ipower(r, b_iv))
            lo, hi = max(direct.lo, mvt.lo), min(direct.hi, mvt.hi)
            if lo <= hi:
                return Interval(lo, hi)
            return direct
        return mvt
    if r == 1.0:
        if not extend:
            raise DomainError("quotient undefined at r = 1")
        return a / b
    return (1.0 - power(r, a)) / (1.0 - power(r, b))


# --- scalar layer of the forward inequality -----------------------------------

def phi(r, t, p, s):
    """Reduced scalar form of the main inequality, at modulus ratio r and angle t."""
    c, tn = _trig_consts(p, r, t, s)
    if _is_plain(p) and not 1 < p < 2:
        raise DomainError(f"phi needs p in (1, 2), got {p!r}")
    m1 = power((1.0 + power(r, s)) / 2.0, p / s)
    # 1 + r^2 + 2r cos t written so that it is visibly nonnegative
    base = sqr(1.0 - r) + 4.0 * r * sqr(cos(t / 2.0))
    m2 = power(base, p / 2.0) / power(2.0 * c, p)
    m3 = power(r, p / 2.0) * tn * cos(t * p / 2.0)
    return -m1 + m2 - m3


def main_minorant(z: complex, w: complex, p: float, s: float) -> float:
    """Plurisubharmonic-minorant form in complex variables (principal branch)."""
    a = math.pi / (2.0 * p)
    mean = ((abs(z) ** s + abs(w) ** s) / 2.0) ** (p / s)
    mid = abs(z + w.conjugate()) ** p / (2.0 ** p * math.cos(a) ** p)
    zw = z * w
    pw = cmath.exp(p / 2.0 * cmath.log(zw)) if zw != 0 else 0j
    return -mean + mid - math.tan(a) * pw.real


def big_F(r, p, s):
    """Phi along t = 0 divided by (1 + r)^p."""
    _, tn = _trig_consts(p, r, s)
    m1 = power((1.0 + power(r, s)) / (2.0 * power(1.0 + r, s)), p / s)
    m3 = power(r, p / 2.0) / power(1.0 + r, p) * tn
    return -m1 + normalizer(p, r, s) - m3


def _stationary_lhs(r, p, s, extend):
    q = cleared_quotient(r, s - 1.0, 1.0, extend=extend)
    return q * power((1.0 + power(r, s)) / 2.0, p / s - 1.0) * power(r, 1.0 - p / 2.0)


def stationary_residual(r, p, s):
    """Left side of the stationary equation of big_F minus tan(pi/2p)."""
    if _is_plain(r) and not 0 < r < 1:
        raise DomainError("stationary residual needs r in (0, 1)")
    _, tn = _trig_consts(p, r, s)
    return _stationary_lhs(r, p, s, extend=False) - tn


def big_F_prime(r, p, s):
    """Closed-form derivative of big_F, valid for r in (0, 1)."""
    if _is_plain(r) and not 0 < r < 1:
        raise DomainError("big_F_prime needs r in (0, 1)")
    lead = (p / 2.0) * power(r, p / 2.0 - 1.0) * (1.0 - r) / power(1.0 + r, p + 1.0)
    return lead * stationary_residual(r, p, s)


def lemma_poly(r, p, s):
    """L(r, p, s); p and s are free."""
    rs = power(r, s)
    return (p * (1.0 - r) * (rs - 1.0) * (rs - r)
            + 2.0 * s * (rs - power(r, s + 2.0))
            + 2.0 * r * (power(r, 2.0 * s) - 1.0))


def _t_enclosure(r: Interval, a: Interval) -> Interval:
    """Enclosure of T = [sinh(a u) - a sinh u] / (a (a^2 - 1)), u = -log r.

    T = u^2 g'(xi) / (a + 1) with g(x) = sinh(x)/x and xi between u and a u.
    The power series of g' has nonnegative coefficients, which gives
    x/3 <= g'(x) <= (x/3) cosh(x) for x >= 0.
    """
    if r.lo <= 0.0:
        u = Interval(0.0 if r.hi >= 1.0 else -ilog_hi(r.hi), math.inf)
    else:
        u = -log(r)
        u = Interval(max(u.lo, 0.0), max(u.hi, 0.0))
    xi_lo = Interval(u.lo) * Interval(min(1.0, a.lo))
    lo = (sqr(Interval(u.lo)) * xi_lo / 3.0 / (a.hi + 1.0)).lo
    if u.hi == math.inf:
        return Interval(max(lo, 0.0), math.inf)
    xi_hi = Interval(u.hi) * Interval(max(1.0, a.hi))
    cosh_hi = (exp(xi_hi) + exp(-xi_hi)) / 2.0
    hi = (sqr(Interval(u.hi)) * xi_hi / 3.0 * cosh_hi / (a.lo + 1.0)).hi
    return Interval(max(lo, 0.0), hi)


def ilog_hi(x: float) -> float:
    return log(Interval(x)).hi


def lemma_poly_terms(r, p, s):
    """Sign-factored form of L:

        L = (p - 2) r (1 - r)(1 - r^s)(1 - r^(s-1)) - 4 s (s-1)(s-2) r^(s+1) T

    with T >= 0 as in :func:`_t_enclosure`.  Returns the list of terms, each
    a list of factor enclosures whose product is the term.
    """
    r, p, s = value_interval(r), value_interval(p), value_interval(s)
    a_term = [p - 2.0, r, 1.0 - r, 1.0 - ipower(r, s), 1.0 - ipower(r, s - 1.0)]
    t_term = [Interval(-4.0), ipower(r, s + 1.0), s, s - 1.0, s - 2.0, _t_enclosure(r, s - 1.0)]
    return [a_term, t_term]


def lemma_poly_factored(r, p, s):
    """Evaluate the factored form of L in float mode (identity checks)."""
    u = -math.log(r)
    a = s - 1.0
    if abs(a - 1.0) < 1e-9:
        t = u * u * (u * math.cosh(u) - math.sinh(u)) / (u * u) / 2.0
    else:
        t = (math.sinh(a * u) - a * math.sinh(u)) / (a * (a * a - 1.0))
    big_a = r * (1.0 - r) * (1.0 - r ** s) * (1.0 - r ** (s - 1.0))
    return (p - 2.0) * big_a - 4.0 * s * (s - 1.0) * (s - 2.0) * r ** (s + 1.0) * t


def f1_middle_exponent(p, s):
    """p/s - 1, which equals p - 2 under conjugacy."""
    e = p / s - 1.0
    if _is_plain(p, s) and abs(s - p / (p - 1.0)) <= CONJUGACY_TOL:
        assert abs(e - (p - 2.0)) <= 1e-12, "conjugate exponents disagree"
    return e


def case_F1(r, p, s, extend: bool = True):
    q = cleared_quotient(r, s, 1.0, extend=extend)
    mean = power((1.0 + power(r, s)) / 2.0, f1_middle_exponent(p, s))
    return normalizer(p, r, s) - mean * power(1.0 + r, 1.0 - p) * q / 2.0


def case_F2(r, p, s, extend: bool = True):
    _, tn = _trig_consts(p, r, s)
    q = cleared_quotient(r, s, s - 1.0, extend=extend)
    rest = power(r, p / 2.0 - 1.0) * power(1.0 + r, 1.0 - p) * q / 2.0
    return normalizer(p, r, s) - tn * rest


def case_F1_prime(r, p, s):
    """Closed-form derivative of case_F1 for r in (0, 1)."""
    num = power(power(r, s) + 1.0, p / s - 2.0) * lemma_poly(r, p, s)
    den = power(2.0, p / s) * sqr(r - 1.0) * r * power(r + 1.0, p)
    return num / den


def case_F2_prime(r, p, s):
    _, tn = _trig_consts(p, r, s)
    num = -power(r, p / 2.0 - 1.0) * tn * lemma_poly(r, p, s)
    den = 4.0 * sqr(r - power(r, s)) * power(1.0 + r, p)
    return num / den


def _prefix_terms(prefix, r, p, s):
    return [list(prefix) + term for term in lemma_poly_terms(r, p, s)]


def case_F1_prime_terms(r, p, s):
    """Factors of F1' = (r^s+1)^(p/s-2) L / (2^(p/s) (1-r)^2 r (1+r)^p).

    Denominator factors enter with their own sign, which equals the sign of
    their reciprocal; they vanish only at r in {0, 1}, where F1 is continuous.
    """
    r, p, s = value_interval(r), value_interval(p), value_interval(s)
    prefix = [ipower(ipower(r, s) + 1.0, p / s - 2.0), ipower(Interval(2.0), p / s),
              sqr(1.0 - r), r, ipower(1.0 + r, p)]
    return _prefix_terms(prefix, r, p, s)


def case_F2_prime_terms(r, p, s):
    """Factors of F2' = -r^(p/2-1) tan(pi/2p) L / (4 (r - r^s)^2 (1+r)^p)."""
    r, p, s = value_interval(r), value_interval(p), value_interval(s)
    _, tn = _trig_consts(p)
    prefix = [-tn, ipower(r, p / 2.0 - 1.0), sqr(r - ipower(r, s)), ipower(1.0 + r, p)]
    return _prefix_terms(prefix, r, p, s)


def varphi1(s):
    """Logarithmic key form of F1(1/2) >= 0."""
    two = lift(2.0, s)
    t = power(two, s)
    return (-(s - 1.0) * log(t - 1.0) + (s - 2.0) * log(t + 1.0)
            - s * log(2.0 * sin(pi_for(s) / (2.0 * s))) + log(lift(6.0, s)))


def _log_const(v, like):
    return log(lift(v, like))


def varphi1_second(s):
    """Closed-form second derivative of varphi1."""
    pi = pi_for(s)
    l2 = _log_const(2.0, s)
    t = power(lift(2.0, s), s)
    t2 = sqr(t)
    first = sqr(pi) * sqr(csc(pi / (2.0 * s))) / (4.0 * s * s * s)
    inner = (-4.0 * t2 + 2.0 * t * l2 + s * (2.0 * t2 * l2 + 2.0 * l2)
             - 3.0 * t2 * l2 + 4.0 - 3.0 * l2)
    return first + t * l2 * inner / sqr(t2 - 1.0)


def omega1(s):
    pi = pi_for(s)
    return sqr(pi) / (4.0 * s * s) * (power(lift(2.0, s), s) + 1.0) * sqr(csc(pi / (2.0 * s)))


def omega2(s):
    """Remaining part of s (2^s + 1) varphi1''(s) after omega1."""
    l2 = _log_const(2.0, s)
    t = power(lift(2.0, s), s)
    t2 = sqr(t)
    inner = (-4.0 * t2 + 2.0 * t * l2 + s * (2.0 * t2 * l2 + 2.0 * l2)
             - 3.0 * (t2 + 1.0) * l2 + 4.0)
    return t * (t + 1.0) * s * l2 * inner / sqr(t2 - 1.0)


def log_omega1_second(s):
    """Displayed second derivative of log omega1."""
    pi = pi_for(s)
    l2 = _log_const(2.0, s)
    t = power(lift(2.0, s), s)
    a = 2.0 * s * s * (t * s * s * sqr(l2) + 2.0 * sqr(t + 1.0)) / sqr(t + 1.0)
    b = pi * (pi - 2.0 * s * sin(pi / s)) * sqr(csc(pi / (2.0 * s)))
    return (a + b) / (2.0 * power(s, 4.0))


def psi_phi1(t):
    """Numerator polynomial-log form whose sign gives convexity of varphi1 on s in [2, 4]."""
    l4, l8 = _log_const(4.0, t), _log_const(8.0, t)
    return (-2.0 * power(t, 4.0) + power(t, 3.0) * l4 - 4.0 * sqr(t) * l8
            + 8.0 * sqr(t) * log(t) + t * l4 + 2.0)


def aux_lemma_fn(s):
    """Second derivative of -2s log sin(pi/2s) - 2(s-1) log cot(pi/2s), times s^3."""
    _check_range("aux_lemma_fn", s, 2.0, 4.0)
    pi = pi_for(s)
    c = csc(pi / s)
    return pi * c * (s * (pi * c - 4.0) - pi * (s - 2.0) * cot(pi / s)) / s


def aux_omega(t):
    """Inner function of the monotonicity lemma, on t in [1/4, 1/2]."""
    pi = pi_for(t)
    return -2.0 * pi * t + sin(2.0 * pi * t) - pi * cos(pi * t) + pi


def secant_gap(p):
    """9p/14 + 3/14 - (2^s - 1)/(2^s - 2) with s = p/(p - 1)."""
    if _is_plain(p) and not 1 < p <= 2:
        raise DomainError(f"secant_gap needs p in (1, 2], got {p!r}")
    s = p / (p - 1.0)
    t = power(lift(2.0, p), s)
    if _is_plain(p) and t == 2.0:
        raise DomainError("2^s = 2")
    return 9.0 * p / 14.0 + frac(3, 14, p) - (t - 1.0) / (t - 2.0)


def _chi(s):
    pi = pi_for(s)
    a = pi / (2.0 * s)
    return (-s * _log_const(2.0, s) + log(frac(9, 4, s))
            - 2.0 * s * log(sin(a)) - 2.0 * (s - 1.0) * log(cot(a)))


def varphi2_forward(s):
    """Log form of the first subinequality on s in [2, 5/2]."""
    t = power(lift(2.0, s), s)
    return _chi(s) - 2.0 * (s - 1.0) * log((t - 1.0) / (t - 2.0))


def varphi_secant(s):
    """Log form of the sharper second subinequality on s in [5/2, 4]."""
    return _chi(s) - 2.0 * (s - 1.0) * log((12.0 * s - 3.0) / (14.0 * (s - 1.0)))


def varphi2_reverse_printed(s):
    """Reverse log form exactly as printed (leading +s log 2)."""
    return varphi2_forward(s) + 2.0 * s * _log_const(2.0, s)


def varphi2_reverse(s):
    """Reverse log form re-derived from log F2(1/2); coincides with varphi2_forward."""
    return varphi2_forward(s)


def tangent_gap(s):
    """-2(s-1) log((2^s-1)/(2^s-2)) minus its tangent line at s = 2."""
    t = power(lift(2.0, s), s)
    lhs = -2.0 * (s - 1.0) * log((t - 1.0) / (t - 2.0))
    slope = log(8.0 * power(lift(2.0, s), frac(1, 3, s)) / 9.0)
    return lhs + log(frac(9, 4, s)) - slope * (s - 2.0)


def chord_slope(like=None):
    x = frac(16, 5, like) * (7.0 - 3.0 * sqrt(lift(5.0, like)))
    return log(x)


def chord_gap(s):
    """Concave part minus its chord through s = 2 and s = 5/2."""
    return _chi(s) - (chord_slope(s) * (s - 2.0) + log(frac(9, 4, s)))


def reverse_main_scalar(r, p, s):
    _, tn = _trig_consts(p, r, s)
    return (power(1.0 + r, p) * normalizer(p, r, s) - power((1.0 + power(r, s)) / 2.0, p / s)
            - power(r, p / 2.0) * tn)


def g_fn(t):
    l8, l4 = _log_const(8.0, t), _log_const(4.0, t)
    num = sqr(t) * (4.0 + l8) - 2.0 * sqr(t) * log(t) + log(8.0 / sqr(t)) - t * l4 - 4.0
    return num / (t - 1.0)


def g_prime(t):
    """Closed-form derivative of g_fn."""
    l8 = _log_const(8.0, t)
    lt = log(t)
    num = (t * (log(sqr(t) / 2.0) - 2.0 * (t - 2.0) * t * lt)
           + t * (2.0 * (t - 3.0) * t + (t - 2.0) * t * l8 + 2.0) + 2.0)
    return num / (sqr(t - 1.0) * t)


def g_slack_upper(t):
    """1 - g'(t); nonnegative when g' <= 1."""
    return 1.0 - g_prime(t)


def g_at_five_halves_gap(t):
    """g(t) - 25/2, evaluated at t = 5/2."""
    return g_fn(t) - 12.5


def psi_g(t):
    l8 = _log_const(8.0, t)
    t2 = sqr(t)
    t3 = t2 * t
    return (t3 + t3 * l8 - 4.0 * t2 - 2.0 * t2 * l8 - 2.0 * (t - 2.0) * t2 * log(t)
            + t * log(t2 / 2.0) + t + 2.0)


def sincot_log_fn(s):
    pi = pi_for(s)
    a = pi / (2.0 * s)
    return -2.0 * s * log(2.0 * sin(a)) - 2.0 * (s - 1.0) * log(cot(a))


def sincot_log_second(s):
    pi = pi_for(s)
    c = csc(pi / s)
    return pi * c * (s * (pi * c - 4.0) - pi * (s - 2.0) * cot(pi / s)) / power(s, 4.0)


def quotient_log_fn(s):
    t = power(lift(2.0, s), s)
    return -2.0 * (s - 1.0) * log((t - 1.0) / (t - 2.0))


def psi_quotient_log(t):
    return sqr(t) * log(t / 2.0) - 2.0 * t * (t - 3.0) - 2.0 * log(t) - 4.0 + _log_const(4.0, t)


def power_mean(a: float, b: float, s: float) -> float:
    return ((a ** s + b ** s) / 2.0) ** (1.0 / s)
