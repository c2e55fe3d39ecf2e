"""Claim catalog: each scalar inequality as data (function, box, sign, citation).

A claim's ``fn_id`` resolves in :data:`FUNCTIONS`, whose entries take the
tuple of box variables plus the exponent parameters ``p`` and ``s``.
Monotonicity and convexity assertions are lowered to weak sign claims on the
first or second derivative, computed with nested dual numbers.

Boundary equalities (a claim that is tight at a domain endpoint) are handled
by *anchors*: closed-form facts that the function and, for order 2, its
gradient vanish at a known point.  *Factored forms* give a product
decomposition whose factors have individually provable signs.  The
certifier records every use of either in the certificate.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Callable

from . import functions as fx
from .functions import ExponentPair
from .interval import Box, Dual, Interval, parse_endpoint

SIGN_ASSERTIONS = ("nonnegative", "nonpositive")
DERIVED_ASSERTIONS = {
    "increasing": (1, "nonnegative"),
    "nondecreasing": (1, "nonnegative"),
    "decreasing": (1, "nonpositive"),
    "nonincreasing": (1, "nonpositive"),
    "convex": (2, "nonnegative"),
    "concave": (2, "nonpositive"),
}


@dataclass(frozen=True)
class FunctionSpec:
    arity: int
    evaluate: Callable  # (x: tuple, p, s) -> value


def _fn(arity, body):
    return FunctionSpec(arity, body)


FUNCTIONS: dict[str, FunctionSpec] = {
    "phi": _fn(2, lambda x, p, s: fx.phi(x[0], x[1], p, s)),
    "big_F": _fn(1, lambda x, p, s: fx.big_F(x[0], p, s)),
    "stationary_residual": _fn(1, lambda x, p, s: fx.stationary_residual(x[0], p, s)),
    "lemma_poly": _fn(3, lambda x, p, s: fx.lemma_poly(x[0], x[1], x[2])),
    "case_F1": _fn(1, lambda x, p, s: fx.case_F1(x[0], p, s)),
    "case_F2": _fn(1, lambda x, p, s: fx.case_F2(x[0], p, s)),
    "varphi1": _fn(1, lambda x, p, s: fx.varphi1(x[0])),
    "varphi1_second": _fn(1, lambda x, p, s: fx.varphi1_second(x[0])),
    "psi_phi1": _fn(1, lambda x, p, s: fx.psi_phi1(x[0])),
    "aux_lemma_fn": _fn(1, lambda x, p, s: fx.aux_lemma_fn(x[0])),
    "aux_omega": _fn(1, lambda x, p, s: fx.aux_omega(x[0])),
    "secant_gap": _fn(1, lambda x, p, s: fx.secant_gap(x[0])),
    "varphi2_forward": _fn(1, lambda x, p, s: fx.varphi2_forward(x[0])),
    "varphi_secant": _fn(1, lambda x, p, s: fx.varphi_secant(x[0])),
    "tangent_gap": _fn(1, lambda x, p, s: fx.tangent_gap(x[0])),
    "chord_gap": _fn(1, lambda x, p, s: fx.chord_gap(x[0])),
    "reverse_main_scalar": _fn(1, lambda x, p, s: fx.reverse_main_scalar(x[0], p, s)),
    "varphi2_reverse": _fn(1, lambda x, p, s: fx.varphi2_reverse(x[0])),
    "omega2": _fn(1, lambda x, p, s: fx.omega2(x[0])),
    "log_omega1_second": _fn(1, lambda x, p, s: fx.log_omega1_second(x[0])),
    "g_fn": _fn(1, lambda x, p, s: fx.g_fn(x[0])),
    "g_slack_upper": _fn(1, lambda x, p, s: fx.g_slack_upper(x[0])),
    "g_at_five_halves_gap": _fn(1, lambda x, p, s: fx.g_at_five_halves_gap(x[0])),
    "psi_g": _fn(1, lambda x, p, s: fx.psi_g(x[0])),
    "sincot_log_fn": _fn(1, lambda x, p, s: fx.sincot_log_fn(x[0])),
    "quotient_log_fn": _fn(1, lambda x, p, s: fx.quotient_log_fn(x[0])),
    "psi_quotient_log": _fn(1, lambda x, p, s: fx.psi_quotient_log(x[0])),
}

# Sign-factored forms, interval mode only: (x, p, s) -> list of factor lists.
FACTORED: dict[str, tuple[Callable, str]] = {
    "lemma_poly": (
        lambda x, p, s: fx.lemma_poly_terms(x[0], x[1], x[2]),
        "L = (p-2) r(1-r)(1-r^s)(1-r^(s-1)) - 4s(s-1)(s-2) r^(s+1) T with T >= 0",
    ),
    "case_F1_prime": (
        lambda x, p, s: fx.case_F1_prime_terms(x[0], p, s),
        "closed-form F1' = (r^s+1)^(p/s-2) L / (2^(p/s)(1-r)^2 r(1+r)^p), valid on 0 < r < 1, "
        "F1 continuous at the endpoints",
    ),
    "case_F2_prime": (
        lambda x, p, s: fx.case_F2_prime_terms(x[0], p, s),
        "closed-form F2' = -r^(p/2-1) tan(pi/2p) L / (4(r-r^s)^2(1+r)^p), valid on 0 < r < 1, "
        "F2 continuous at r = 1",
    ),
}


@dataclass(frozen=True)
class Anchor:
    """Closed-form zero of the certified quantity.

    ``coords`` maps axis index to an endpoint expression in p, s and pi.
    ``sides`` gives, per anchored axis, which side of the anchor the domain
    lies on ("lower": domain points x >= c, "upper": x <= c, None: both).
    Order 1 uses the vanishing value; order 2 also the vanishing gradient.
    """

    name: str
    coords: tuple  # ((axis, expr), ...)
    order: int
    sides: tuple  # (side per anchored axis)
    fact: str
    radius: float = 0.25
    requires_conjugate: bool = False

    def location(self, p_iv, s_iv) -> dict:
        names = {"p": p_iv, "s": s_iv}
        return {axis: parse_endpoint(expr, names) if _needs_names(expr) else parse_endpoint(expr)
                for axis, expr in self.coords}


def _needs_names(expr: str) -> bool:
    return bool(re.search(r"\b[ps]\b", expr))


@dataclass(frozen=True)
class Claim:
    id: str
    fn_id: str
    variables: tuple
    domain: tuple  # ((lo_expr, hi_expr), ...)
    assertion: str
    citation: str
    params: str = "none"  # none | forward | reverse | fixed
    fixed_pair: tuple | None = None
    anchors: tuple = ()
    factored: str | None = None
    expect: str = "proved"
    note: str = ""

    def __post_init__(self):
        entry = FUNCTIONS[self.fn_id]
        if entry.arity != len(self.variables) or entry.arity != len(self.domain):
            raise ValueError(f"{self.id}: arity mismatch")
        if self.assertion not in SIGN_ASSERTIONS and self.assertion not in DERIVED_ASSERTIONS:
            raise ValueError(f"{self.id}: unknown assertion {self.assertion!r}")
        if self.assertion in DERIVED_ASSERTIONS and len(self.variables) != 1:
            raise ValueError(f"{self.id}: derived assertions need one variable")

    @property
    def parameterized(self) -> bool:
        return self.params in ("forward", "reverse")

    @property
    def order(self) -> int:
        return DERIVED_ASSERTIONS.get(self.assertion, (0, self.assertion))[0]

    @property
    def sign(self) -> str:
        if self.assertion in SIGN_ASSERTIONS:
            return self.assertion
        return DERIVED_ASSERTIONS[self.assertion][1]

    def domain_box(self) -> Box:
        """Outward enclosure of the stated domain."""
        ivs = []
        for lo, hi in self.domain:
            a, b = parse_endpoint(lo), parse_endpoint(hi)
            ivs.append(Interval(a.lo, b.hi))
        return Box(ivs)

    def domain_scale(self) -> list:
        return [max(iv.width(), 1e-300) for iv in self.domain_box()]

    def target(self, x, p, s):
        """The quantity whose sign is certified: f, f' or f''."""
        f = FUNCTIONS[self.fn_id].evaluate
        k = self.order
        if k == 0:
            return f(tuple(x), p, s)
        if k == 1:
            return f((Dual(x[0], 1.0),), p, s).der
        return f((Dual(Dual(x[0], 1.0), 1.0),), p, s).der.der

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "fn_id": self.fn_id,
            "variables": list(self.variables),
            "domain": [list(d) for d in self.domain],
            "assertion": self.assertion,
            "params": self.params,
            "fixed_pair": list(self.fixed_pair) if self.fixed_pair else None,
            "citation": self.citation,
            "expect": self.expect,
            "anchors": [a.name for a in self.anchors],
            "factored": self.factored,
        }


def _a(name, coords, order, sides, fact, **kw):
    return Anchor(name, tuple(coords), order, tuple(sides), fact, **kw)


def _claims() -> list:
    A = _a
    return [
        Claim("C1", "phi", ("r", "t"), (("0", "1"), ("0", "pi")), "nonnegative",
              "reduced inequality Phi(r,t) >= 0 (t restricted to [0, pi] by evenness in t)",
              params="forward",
              anchors=(A("Phi(1, pi/p) = 0", ((0, "1"), (1, "pi/p")), 2, ("lower", None),
                         "at r = 1, t = pi/p and s = p/(p-1): (1+1)/2 = 1, cos(t/2)/cos(pi/2p) = 1 "
                         "and cos(tp/2) = 0, so Phi = -1 + 1 - 0; both partial derivatives vanish",
                         radius=0.3, requires_conjugate=True),)),
        Claim("C1x", "phi", ("r", "t"), (("0", "1"), ("0", "pi")), "nonnegative",
              "failure of the inequality at r = 1/2, t = pi/2 for p = 3/2, s = 4",
              params="fixed", fixed_pair=(1.5, 4.0), expect="refuted"),
        Claim("C2", "big_F", ("r",), (("0", "1"),), "nonnegative",
              "F(r) >= 0 on [0, 1] (t = 0 edge of Phi)", params="forward"),
        Claim("C3a", "lemma_poly", ("r", "p", "s"), (("0", "1"), ("4/3", "2"), ("2", "4")),
              "nonpositive", "polynomial bound L(r,p,s) <= 0 for p in [4/3,2], s in [2,4]",
              factored="lemma_poly"),
        Claim("C3b", "lemma_poly", ("r", "p", "s"), (("0", "1"), ("2", "4"), ("4/3", "2")),
              "nonnegative", "polynomial bound L(r,p,s) >= 0 for p in [2,4], s in [4/3,2]",
              factored="lemma_poly"),
        Claim("C4", "varphi1", ("s",), (("2", "4"),), "nonnegative",
              "varphi_1(s) >= 0 for s in [2, 4]",
              anchors=(A("varphi1(2) = 0", ((0, "2"),), 1, ("lower",),
                         "-log 3 - 2 log(2 sin(pi/4)) + log 6 = 0"),)),
        Claim("C5", "varphi1", ("s",), (("4/3", "2"),), "nonpositive",
              "varphi_1(s) <= 0 for s in [4/3, 2]",
              anchors=(A("varphi1(2) = 0", ((0, "2"),), 1, ("upper",),
                         "-log 3 - 2 log(2 sin(pi/4)) + log 6 = 0"),)),
        Claim("C6a", "aux_lemma_fn", ("s",), (("2", "4"),), "nonpositive",
              "the auxiliary function is negative on [2, 4]"),
        Claim("C6b", "aux_lemma_fn", ("s",), (("2", "4"),), "decreasing",
              "the auxiliary function is decreasing on [2, 4]",
              anchors=(A("aux'(2) = 0", ((0, "2"),), 1, ("lower",),
                         "with h(s) = s(pi csc(pi/s) - 4) - pi(s-2) cot(pi/s): at s = 2, "
                         "d/ds csc(pi/s) = 0, h = 2(pi-4), h' = pi-4, so aux' = pi(h'/2 - h/4) = 0"),)),
        Claim("C6c", "aux_omega", ("t",), (("1/4", "1/2"),), "nonnegative",
              "omega(t) >= 0 on [1/4, 1/2]",
              anchors=(A("omega(1/2) = 0", ((0, "1/2"),), 1, ("upper",),
                         "-pi + sin(pi) - pi cos(pi/2) + pi = 0"),)),
        Claim("C7", "secant_gap", ("p",), (("4/3", "2"),), "nonnegative",
              "(2^s-1)/(2^s-2) <= 9p/14 + 3/14 on p in [4/3, 2]",
              anchors=(A("gap(4/3) = 0", ((0, "4/3"),), 1, ("lower",),
                         "s = 4: 12/14 + 3/14 - 15/14 = 0"),
                       A("gap(2) = 0", ((0, "2"),), 1, ("upper",),
                         "s = 2: 18/14 + 3/14 - 3/2 = 0"))),
        Claim("C8a", "varphi2_forward", ("s",), (("2", "5/2"),), "nonnegative",
              "first subinequality on s in [2, 5/2] (p in [5/3, 2])",
              anchors=(A("varphi2(2) = 0", ((0, "2"),), 1, ("lower",),
                         "-2 log 2 + log(9/4) - 4 log sin(pi/4) - 2 log cot(pi/4) - 2 log(3/2) = 0"),)),
        Claim("C8b", "varphi_secant", ("s",), (("5/2", "4"),), "nonnegative",
              "second subinequality on s in [5/2, 4] (p in [4/3, 5/3])"),
        Claim("C8c", "tangent_gap", ("s",), (("2", "5/2"),), "nonnegative",
              "tangent-line lower bound of -2(s-1) log((2^s-1)/(2^s-2))",
              anchors=(A("tangent contact at s = 2", ((0, "2"),), 2, ("lower",),
                         "value -2 log(3/2) + log(9/4) = 0 and slope log(8 2^(1/3)/9) matches "
                         "the derivative at s = 2"),)),
        Claim("C8d", "chord_gap", ("s",), (("2", "5/2"),), "nonnegative",
              "chord lower bound of the concave part on [2, 5/2]",
              anchors=(A("chord at s = 2", ((0, "2"),), 1, ("lower",),
                         "-2 log 2 + log(9/4) - 4 log sin(pi/4) - 2 log 1 = log(9/4) - log(9/4) + 0"),
                       A("chord at s = 5/2", ((0, "5/2"),), 1, ("upper",),
                         "sin(pi/5), cot(pi/5) in radicals give value (1/2) log((81/5)(7 - 3 sqrt 5))"))),
        Claim("C9a", "varphi1", ("s",), (("2", "4"),), "convex",
              "varphi_1 is convex on [2, 4]"),
        Claim("C9b", "varphi1", ("s",), (("4/3", "2"),), "convex",
              "varphi_1 is convex on [4/3, 2]"),
        Claim("C9c", "psi_phi1", ("t",), (("4", "16"),), "nonpositive",
              "psi(t) <= 0 for t in [4, 16] (t = 2^s)"),
        Claim("C10", "reverse_main_scalar", ("r",), (("0", "1"),), "nonpositive",
              "reverse scalar inequality on [0, 1]", params="reverse"),
        Claim("C11a", "case_F1", ("r",), (("0", "1/2"),), "nonpositive",
              "F1(r) <= 0 for 0 <= r <= 1/2", params="reverse"),
        Claim("C11b", "case_F2", ("r",), (("1/2", "1"),), "nonpositive",
              "F2(r) <= 0 for 1/2 <= r <= 1", params="reverse"),
        Claim("C11c", "varphi2_reverse", ("s",), (("4/3", "2"),), "nonpositive",
              "log form of F2(1/2) <= 0 on s in [4/3, 2] (leading term -s log 2)",
              anchors=(A("varphi2(2) = 0", ((0, "2"),), 1, ("upper",),
                         "-2 log 2 + log(9/4) - 4 log sin(pi/4) - 2 log cot(pi/4) - 2 log(3/2) = 0"),)),
        Claim("C11d", "case_F1", ("r",), (("0", "1/2"),), "increasing",
              "F1 is increasing on [0, 1/2] (reverse range)", params="reverse",
              factored="case_F1_prime"),
        Claim("C11e", "case_F2", ("r",), (("1/2", "1"),), "decreasing",
              "F2 is decreasing on [1/2, 1] (reverse range)", params="reverse",
              factored="case_F2_prime"),
        Claim("C12a", "case_F1", ("r",), (("0", "1/2"),), "nonnegative",
              "case r <= 1/2: F1(r) >= 0", params="forward"),
        Claim("C12b", "case_F1", ("r",), (("0", "1/2"),), "decreasing",
              "F1 is decreasing on [0, 1/2]", params="forward",
              factored="case_F1_prime"),
        Claim("C12c", "case_F2", ("r",), (("1/2", "1"),), "nonnegative",
              "case r >= 1/2: F2(r) >= 0", params="forward"),
        Claim("C12d", "case_F2", ("r",), (("1/2", "1"),), "increasing",
              "F2 is increasing on [1/2, 1]", params="forward",
              factored="case_F2_prime"),
        Claim("C13a", "g_fn", ("t",), (("5/2", "4"),), "increasing",
              "g is increasing on [5/2, 4]"),
        Claim("C13b", "psi_g", ("t",), (("5/2", "4"),), "nonpositive",
              "psi(t) <= 0 on [5/2, 4]"),
        Claim("C13c", "g_at_five_halves_gap", ("t",), (("5/2", "5/2"),), "nonnegative",
              "g(5/2) >= 25/2"),
        Claim("C13d", "g_slack_upper", ("t",), (("5/2", "4"),), "nonnegative",
              "g'(t) <= 1 on [5/2, 4]"),
        Claim("C14", "omega2", ("s",), (("4/3", "2"),), "increasing",
              "omega_2 is increasing for s in [4/3, 2]"),
        Claim("C14b", "log_omega1_second", ("s",), (("4/3", "2"),), "nonnegative",
              "log-convexity of omega_1 on [4/3, 2]"),
        Claim("C15", "sincot_log_fn", ("s",), (("4/3", "2"),), "concave",
              "-2s log(2 sin(pi/2s)) - 2(s-1) log cot(pi/2s) is concave on [4/3, 2]"),
        Claim("C16a", "quotient_log_fn", ("s",), (("4/3", "2"),), "convex",
              "-2(s-1) log((2^s-1)/(2^s-2)) is convex for s in [4/3, 2]"),
        Claim("C16b", "psi_quotient_log", ("t",), (("2^(4/3)", "4"),), "nonpositive",
              "psi(t) <= 0 on [2^(4/3), 4]"),
    ]


def claim_catalog() -> list:
    return _claims()


def get_claim(claim_id: str) -> Claim:
    for c in _claims():
        if c.id == claim_id:
            return c
    raise KeyError(f"unknown claim id {claim_id!r}")


def claim_sort_key(claim_id: str):
    m = re.match(r"C(\d+)(.*)", claim_id)
    if not m:
        return (10**6, claim_id)
    return (int(m.group(1)), m.group(2))


DEFAULT_FORWARD_P = (1.40, 1.50, 1.75, 1.90)
DEFAULT_REVERSE_P = (2.25, 2.50, 3.00, 3.75)


def default_grid() -> list:
    return [ExponentPair.conjugate(p) for p in DEFAULT_FORWARD_P + DEFAULT_REVERSE_P]


def pair_matches(claim: Claim, pair: ExponentPair) -> bool:
    if claim.params == "forward":
        return pair.forward_range
    if claim.params == "reverse":
        return pair.reverse_range
    return False


def catalog_json(indent: int = 2) -> str:
    return json.dumps([c.to_json() for c in claim_catalog()], indent=indent)
