"""Branch-and-bound sign certification of catalog claims.

Each box goes through a fixed sequence of tests, cheapest first:

1. natural interval enclosure of the target;
2. mean-value form ``f(m) + grad(X) . (X - m)`` with an interval gradient
   from dual numbers;
3. monotonicity: an axis whose partial derivative has constant sign is
   collapsed to the face where the minimum lives, and 1-2 are repeated;
4. anchors (closed-form zeros on the domain boundary, see catalog);
5. sign-factored forms;
6. floating-point probe at the midpoint, looking for a violation;

and is bisected along its widest (domain-normalized) axis if all fail.

For parallel runs the root box is pre-split into a fixed list of units that
are searched depth-first and independently; merging is a deterministic
reduction over unit order, so results do not depend on the worker count.
"""
from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import multiprocessing as mp

from . import __version__
from .catalog import FACTORED, FUNCTIONS, Claim, claim_sort_key, get_claim, pair_matches
from .errors import NoSignChange, NumericError
from .functions import ExponentPair
from .interval import Box, Dual, Interval, value_interval

STRATEGIES = ("natural", "mean_value", "monotone_face", "anchor", "factored")


@dataclass
class CertifierConfig:
    max_depth: int = 40
    max_boxes: int = 10**7
    strictness_margin: float = 0.0
    midpoint_sampling: int = 1
    tolerance: float = 1e-12
    split_depth: int = 3
    workers: int = 1
    refine_witness: bool = True
    record_leaves: bool = False

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.strictness_margin < 0:
            raise ValueError("strictness_margin must be nonnegative")
        if self.midpoint_sampling < 1:
            raise ValueError("midpoint_sampling must be at least 1")

    def as_dict(self):
        return dict(self.__dict__)


@dataclass
class Certificate:
    claim_id: str
    verdict: str
    boxes_processed: int
    max_depth_reached: int
    counterexample: dict | None
    min_enclosure: Interval
    tolerance: float
    elapsed_ms: float
    p: float | None = None
    s: float | None = None
    domain: list = field(default_factory=list)
    assertion: str = ""
    citation: str = ""
    expect: str = "proved"
    exceptions: list = field(default_factory=list)
    strategies: dict = field(default_factory=dict)
    leaves: list | None = None

    @property
    def as_expected(self) -> bool:
        return self.verdict == self.expect

    def to_json(self, stable: bool = False) -> dict:
        out = {
            "claim_id": self.claim_id,
            "p": self.p,
            "s": self.s,
            "domain": self.domain,
            "assertion": self.assertion,
            "citation": self.citation,
            "verdict": self.verdict,
            "expect": self.expect,
            "boxes_processed": self.boxes_processed,
            "max_depth_reached": self.max_depth_reached,
            "counterexample": self.counterexample,
            "min_enclosure": [self.min_enclosure.lo, self.min_enclosure.hi],
            "tolerance": self.tolerance,
            "exceptions": list(self.exceptions),
            "strategies": dict(self.strategies),
        }
        if not stable:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
            out["tool_version"] = __version__
        return out


# --- evaluation helpers ---------------------------------------------------------

class _Problem:
    """A claim instantiated at one exponent pair, in both numeric modes."""

    def __init__(self, claim: Claim, pair: ExponentPair | None, config: CertifierConfig):
        self.claim = claim
        self.pair = pair
        self.config = config
        self.sigma = 1.0 if claim.sign == "nonnegative" else -1.0
        if pair is None:
            self.p_f = self.s_f = 0.0
            self.p_iv = self.s_iv = Interval(0.0)
        else:
            self.p_f, self.s_f = pair.p, pair.s
            self.p_iv, self.s_iv = pair.interval_params()
        self.root = claim.domain_box()
        self.scale = claim.domain_scale()
        self.dim = len(self.root)
        self.factored = FACTORED.get(claim.factored) if claim.factored else None
        self.notes: list = []
        self.anchors = self._prepare_anchors()

    # signed enclosures: sigma * target, so every claim reads "must be >= 0"
    def enclose(self, ivs) -> Interval:
        v = value_interval(self.claim.target(ivs, self.p_iv, self.s_iv))
        return v if self.sigma > 0 else -v

    def partial(self, ivs, axis) -> Interval:
        args = list(ivs)
        args[axis] = Dual(args[axis], 1.0)
        d = self.claim.target(args, self.p_iv, self.s_iv)
        g = value_interval(d.der) if isinstance(d, Dual) else Interval(0.0)
        return g if self.sigma > 0 else -g

    def second(self, ivs, i, j) -> Interval:
        args = list(ivs)
        if i == j:
            args[i] = Dual(Dual(args[i], 1.0), 1.0)
        else:
            args = [Dual(a, 0.0) for a in args]
            args[i] = Dual(ivs[i], 1.0)
            args[j] = Dual(Dual(ivs[j], 1.0), 0.0)
        d = self.claim.target(args, self.p_iv, self.s_iv)
        try:
            h = value_interval(d.der.der)
        except AttributeError:
            h = Interval(0.0)
        return h if self.sigma > 0 else -h

    def float_value(self, point) -> float:
        v = self.claim.target(tuple(float(x) for x in point), self.p_f, self.s_f)
        while isinstance(v, Dual):
            v = v.val
        return self.sigma * float(v)

    def _prepare_anchors(self):
        active = []
        for anc in self.claim.anchors:
            conj = self.pair is not None and self.pair.is_conjugate
            if anc.requires_conjugate and not conj:
                self.notes.append(f"anchor '{anc.name}' inactive: exponent pair is not conjugate")
                continue
            loc = anc.location(self.p_iv, self.s_iv)
            self._sanity_check(anc, loc)
            active.append((anc, loc))
        return active

    def _sanity_check(self, anc, loc):
        ivs = list(self.root)
        for axis, c in loc.items():
            ivs[axis] = c
        if anc.order == 1 and len(loc) < self.dim:
            return  # face anchor: checked along the face by the fact itself
        val = self.enclose(ivs)
        if not val.contains(0.0):
            raise AssertionError(f"anchor {anc.name!r}: enclosure {val!r} excludes 0")
        if anc.order >= 2:
            for axis in loc:
                g = self.partial(ivs, axis)
                if not g.contains(0.0):
                    raise AssertionError(f"anchor {anc.name!r}: gradient {g!r} excludes 0")


# --- per-box tests ----------------------------------------------------------------

def _mean_value(prob: _Problem, ivs):
    mid = [Interval(iv.mid()) for iv in ivs]
    fm = prob.enclose(mid)
    grads = [prob.partial(ivs, i) if not ivs[i].is_point() else Interval(0.0)
             for i in range(len(ivs))]
    acc = fm
    for g, iv, m in zip(grads, ivs, mid):
        if not iv.is_point():
            acc = acc + g * (iv - m)
    return acc, grads


def _bounds(prob: _Problem, ivs, strategies, use_faces=True):
    """Best rigorous lower bound of sigma*f on the box, or -inf."""
    best = -math.inf
    eps = prob.config.strictness_margin
    try:
        nat = prob.enclose(ivs)
    except NumericError:
        nat = None
    if nat is not None:
        if nat.lo >= eps:
            strategies["natural"] += 1
            return nat.lo, nat
        best = nat.lo
    if all(iv.is_point() for iv in ivs):
        return best, nat
    try:
        mv, grads = _mean_value(prob, ivs)
    except NumericError:
        return best, nat
    if nat is not None:
        mv = Interval(max(mv.lo, nat.lo), max(mv.lo, min(mv.hi, nat.hi)))
    if mv.lo >= eps:
        strategies["mean_value"] += 1
        return mv.lo, nat
    best = max(best, mv.lo)
    if not use_faces:
        return best, nat
    face = list(ivs)
    moved = False
    for i, g in enumerate(grads):
        if face[i].is_point():
            continue
        if g.lo >= 0.0:
            face[i] = Interval(ivs[i].lo)
            moved = True
        elif g.hi <= 0.0:
            face[i] = Interval(ivs[i].hi)
            moved = True
    if moved:
        sub = {k: 0 for k in STRATEGIES}
        lb, _ = _bounds(prob, face, sub, use_faces=True)
        if lb >= eps:
            strategies["monotone_face"] += 1
            return lb, nat
        best = max(best, lb)
    return best, nat


def _anchor_bound(prob: _Problem, ivs, anc, loc):
    """Lower bound of sigma*f over the domain part of the box via the anchor, or None."""
    for axis, c in loc.items():
        if ivs[axis].hull(c).width() > anc.radius:
            return None
    hull_ivs = list(ivs)
    disp = {}
    for (axis, c), side in zip(loc.items(), anc.sides):
        x = ivs[axis]
        hull_ivs[axis] = x.hull(c)
        d = x - c
        if side == "lower":
            d = Interval(max(0.0, d.lo), max(0.0, d.hi))
        elif side == "upper":
            d = Interval(min(0.0, d.lo), min(0.0, d.hi))
        disp[axis] = d
    if anc.order == 1:
        acc = Interval(0.0)
        for axis, d in disp.items():
            acc = acc + prob.partial(hull_ivs, axis) * d
        return acc.lo
    axes = list(loc)
    if len(axes) == 1:
        h = prob.second(hull_ivs, axes[0], axes[0])
        return 0.0 if h.lo >= 0.0 else None
    if len(axes) == 2:
        i, j = axes
        h11 = prob.second(hull_ivs, i, i)
        h22 = prob.second(hull_ivs, j, j)
        h12 = prob.second(hull_ivs, i, j)
        if h11.lo > 0.0 and h22.lo > 0.0:
            det = Interval(h11.lo) * Interval(h22.lo) - Interval(h12.mag()) * Interval(h12.mag())
            if det.lo > 0.0:
                return 0.0
    return None


def _factored_ok(prob: _Problem, ivs) -> bool:
    fn, _ = prob.factored
    terms = fn(list(ivs), prob.p_iv, prob.s_iv)
    for term in terms:
        sign = 1
        for f in term:
            if f.lo >= 0.0 and f.hi <= 0.0:
                sign = 0
                break
            if f.lo >= 0.0:
                continue
            if f.hi <= 0.0:
                sign = -sign
                continue
            return False
        if sign * prob.sigma < 0:
            return False
    return True


def _halton(i: int, base: int) -> float:
    f, r = 1.0, 0.0
    while i > 0:
        f /= base
        r += f * (i % base)
        i //= base
    return r


_PRIMES = (2, 3, 5, 7, 11, 13)


def _probe_points(ivs, count):
    pts = [tuple(iv.mid() for iv in ivs)]
    for k in range(1, count):
        pts.append(tuple(iv.lo + _halton(k, _PRIMES[d % len(_PRIMES)]) * iv.width()
                         for d, iv in enumerate(ivs)))
    return pts


# --- unit search ------------------------------------------------------------------

@dataclass
class _UnitResult:
    boxes: int = 0
    max_depth: int = 0
    lower: float = math.inf
    sample: float = math.inf
    witness: tuple | None = None
    witness_value: float | None = None
    inconclusive: bool = False
    budget_hit: bool = False
    strategies: dict = field(default_factory=lambda: {k: 0 for k in STRATEGIES})
    anchor_uses: dict = field(default_factory=dict)
    factored_uses: int = 0
    leaves: list = field(default_factory=list)


def _split_units(root: Box, scale, depth: int) -> list:
    units = [(root, 0)]
    for _ in range(depth):
        nxt = []
        for b, d in units:
            if b.width(scale) == 0.0:
                nxt.append((b, d))
            else:
                left, right = b.bisect(scale=scale)
                nxt.extend([(left, d + 1), (right, d + 1)])
        units = nxt
    return units


def _search_unit(prob: _Problem, box: Box, depth0: int, budget: int) -> _UnitResult:
    cfg = prob.config
    res = _UnitResult()
    eps = cfg.strictness_margin
    stack = [(box, depth0)]
    while stack:
        if res.boxes >= budget:
            res.budget_hit = True
            res.inconclusive = True
            res.lower = -math.inf  # unvisited boxes carry no bound
            break
        b, depth = stack.pop()
        res.boxes += 1
        res.max_depth = max(res.max_depth, depth)
        ivs = list(b)
        lb, nat = _bounds(prob, ivs, res.strategies)
        accepted = lb >= eps
        if not accepted and eps == 0.0:
            for anc, loc in prob.anchors:
                try:
                    ab = _anchor_bound(prob, ivs, anc, loc)
                except NumericError:
                    ab = None
                if ab is not None and ab >= 0.0:
                    res.strategies["anchor"] += 1
                    res.anchor_uses[anc.name] = res.anchor_uses.get(anc.name, 0) + 1
                    lb = max(lb, ab)
                    accepted = True
                    break
        if not accepted and prob.factored is not None and eps == 0.0:
            try:
                if _factored_ok(prob, ivs):
                    res.strategies["factored"] += 1
                    res.factored_uses += 1
                    lb = max(lb, 0.0)
                    accepted = True
            except NumericError:
                pass
        if accepted:
            res.lower = min(res.lower, max(lb, 0.0))
            if cfg.record_leaves:
                res.leaves.append(b.as_lists())
            continue
        # witness search
        for pt in _probe_points(ivs, cfg.midpoint_sampling):
            try:
                v = prob.float_value(pt)
            except (NumericError, ValueError, ZeroDivisionError, OverflowError):
                continue
            if v != v:
                continue
            res.sample = min(res.sample, v)
            if v < -cfg.tolerance:
                res.witness = pt
                res.witness_value = v
                res.lower = min(res.lower, lb)
                if cfg.record_leaves:
                    res.leaves.append(b.as_lists())
                return res
        if depth >= cfg.max_depth or b.width(prob.scale) == 0.0:
            res.inconclusive = True
            res.lower = min(res.lower, lb)
            if cfg.record_leaves:
                res.leaves.append(b.as_lists())
            continue
        left, right = b.bisect(scale=prob.scale)
        stack.append((right, depth + 1))
        stack.append((left, depth + 1))
    return res


def _instantiate(claim_id: str, pair_tuple, config_dict):
    claim = get_claim(claim_id)
    pair = ExponentPair(*pair_tuple) if pair_tuple is not None else None
    return _Problem(claim, pair, CertifierConfig(**config_dict))


def _unit_task(args):
    claim_id, pair_tuple, config_dict, index = args
    prob = _instantiate(claim_id, pair_tuple, config_dict)
    units = _split_units(prob.root, prob.scale, prob.config.split_depth)
    box, depth = units[index]
    budget = max(1, prob.config.max_boxes // len(units))
    return _search_unit(prob, box, depth, budget)


def _refine_witness(prob: _Problem, point, value):
    """Local float descent from a witness, staying inside the domain."""
    from scipy.optimize import minimize

    lo = [iv.lo for iv in prob.root]
    hi = [iv.hi for iv in prob.root]

    def clip(x):
        return tuple(min(max(float(xi), a), b) for xi, a, b in zip(x, lo, hi))

    def obj(x):
        try:
            v = prob.float_value(clip(x))
        except (NumericError, ValueError, ZeroDivisionError, OverflowError):
            return math.inf
        return v if v == v else math.inf

    out = minimize(obj, list(point), method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 400 * len(point)})
    cand = clip(out.x)
    cv = obj(cand)
    if cv < value:
        return cand, cv
    return tuple(point), value


def _resolve_pair(claim: Claim, pair):
    if claim.params == "fixed":
        return ExponentPair(*claim.fixed_pair)
    if claim.parameterized:
        if pair is None:
            raise ValueError(f"claim {claim.id} needs an exponent pair")
        return pair
    return None


def certify_sign(claim: Claim, config: CertifierConfig | None = None,
                 pair: ExponentPair | None = None) -> Certificate:
    """Certify a claim (sign or lowered derivative-sign) at one exponent pair."""
    config = config or CertifierConfig()
    t0 = time.perf_counter()
    pair = _resolve_pair(claim, pair)
    prob = _Problem(claim, pair, config)
    units = _split_units(prob.root, prob.scale, config.split_depth)
    budget = max(1, config.max_boxes // len(units))
    pair_tuple = (pair.p, pair.s) if pair is not None else None
    if config.workers > 1 and len(units) > 1:
        jobs = [(claim.id, pair_tuple, config.as_dict(), i) for i in range(len(units))]
        ctx = mp.get_context("fork")
        with ProcessPoolExecutor(max_workers=config.workers, mp_context=ctx) as pool:
            results = list(pool.map(_unit_task, jobs))
    else:
        results = [_search_unit(prob, box, depth, budget) for box, depth in units]

    strategies = {k: 0 for k in STRATEGIES}
    anchor_uses: dict = {}
    factored_uses = 0
    boxes = 0
    max_depth = 0
    lower = math.inf
    sample = math.inf
    witness = None
    inconclusive = False
    leaves = [] if config.record_leaves else None
    for r in results:
        boxes += r.boxes
        max_depth = max(max_depth, r.max_depth)
        lower = min(lower, r.lower)
        sample = min(sample, r.sample)
        inconclusive = inconclusive or r.inconclusive
        for k, v in r.strategies.items():
            strategies[k] += v
        for k, v in r.anchor_uses.items():
            anchor_uses[k] = anchor_uses.get(k, 0) + v
        factored_uses += r.factored_uses
        if witness is None and r.witness is not None:
            witness = (r.witness, r.witness_value)
        if leaves is not None:
            leaves.extend(r.leaves)

    exceptions = list(prob.notes)
    for anc, _ in prob.anchors:
        if anc.name in anchor_uses:
            exceptions.append(f"anchor '{anc.name}' (order {anc.order}) on {anchor_uses[anc.name]} "
                              f"box(es); closed-form fact: {anc.fact}")
    if factored_uses:
        exceptions.append(f"sign-factored form on {factored_uses} box(es): {prob.factored[1]}")

    counterexample = None
    if witness is not None:
        verdict = "refuted"
        pt, val = witness
        if config.refine_witness:
            pt, val = _refine_witness(prob, pt, val)
        sample = min(sample, val)
        counterexample = {"point": [float(x) for x in pt], "value": prob.sigma * val}
    elif inconclusive:
        verdict = "inconclusive"
    else:
        verdict = "proved"

    if sample == math.inf:
        try:
            sample = prob.float_value(prob.root.midpoint())
        except (NumericError, ValueError, ZeroDivisionError):
            sample = lower if lower < math.inf else 0.0
    if lower == math.inf:
        lower = -math.inf
    lo = min(lower, sample)
    if prob.sigma > 0:
        enclosure = Interval(lo, sample)
    else:
        enclosure = Interval(-sample, -lo)

    elapsed = (time.perf_counter() - t0) * 1000.0
    return Certificate(
        claim_id=claim.id,
        verdict=verdict,
        boxes_processed=boxes,
        max_depth_reached=max_depth,
        counterexample=counterexample,
        min_enclosure=enclosure,
        tolerance=config.tolerance,
        elapsed_ms=elapsed,
        p=pair.p if pair is not None else None,
        s=pair.s if pair is not None else None,
        domain=[list(d) for d in claim.domain],
        assertion=claim.assertion,
        citation=claim.citation,
        expect=claim.expect,
        exceptions=exceptions,
        strategies=strategies,
        leaves=leaves,
    )


def certify_derived(claim: Claim, config: CertifierConfig | None = None,
                    pair: ExponentPair | None = None) -> Certificate:
    """Monotonicity/convexity claims: weak sign of the first or second derivative."""
    if claim.order == 0:
        raise ValueError(f"claim {claim.id} asserts a sign, not a derived property")
    return certify_sign(claim, config, pair)


def certify(claim: Claim, config: CertifierConfig | None = None,
            pair: ExponentPair | None = None) -> Certificate:
    if claim.order:
        return certify_derived(claim, config, pair)
    return certify_sign(claim, config, pair)


def verify_all(catalog, grid, config: CertifierConfig | None = None) -> list:
    """Run every claim; parameterized claims at each matching grid pair."""
    config = config or CertifierConfig()
    jobs = []
    for claim in catalog:
        if claim.parameterized:
            for pair in grid:
                if pair_matches(claim, pair):
                    jobs.append((claim, pair))
        else:
            jobs.append((claim, None))
    jobs.sort(key=lambda j: (claim_sort_key(j[0].id),
                             j[1].p if j[1] else -1.0, j[1].s if j[1] else -1.0))
    certs = []
    for claim, pair in jobs:
        try:
            certs.append(certify(claim, config, pair))
        except NumericError as exc:
            certs.append(Certificate(
                claim_id=claim.id, verdict="inconclusive", boxes_processed=0,
                max_depth_reached=0, counterexample=None,
                min_enclosure=Interval(-math.inf, math.inf), tolerance=config.tolerance,
                elapsed_ms=0.0, p=pair.p if pair else None, s=pair.s if pair else None,
                domain=[list(d) for d in claim.domain], assertion=claim.assertion,
                citation=claim.citation, expect=claim.expect,
                exceptions=[f"evaluation error: {exc}"]))
    return certs


def exit_status(certs) -> int:
    """0 when every verdict is the expected one, 1 on unexpected refutation, 2 if inconclusive."""
    if any(c.verdict == "refuted" and c.expect != "refuted" for c in certs):
        return 1
    if any(c.verdict == "inconclusive" for c in certs):
        return 2
    if any(c.verdict != c.expect for c in certs):
        return 1
    return 0


def certificates_json(certs, stable=False) -> str:
    return json.dumps([c.to_json(stable) for c in certs], indent=2)


# --- stationary points -----------------------------------------------------------

def _scalar_fn(fn_id_or_callable):
    if callable(fn_id_or_callable):
        return fn_id_or_callable
    entry = FUNCTIONS[fn_id_or_callable]
    if entry.arity != 1:
        raise ValueError("bracket_root needs a one-variable function")
    return lambda x, p, s: entry.evaluate((x,), p, s)


def bracket_root(fn_id, interval: Interval, pair: ExponentPair | None, tol: float) -> Interval:
    """Bisection to a root enclosure of width <= tol, confirmed in interval mode.

    The returned [a, b] has rigorous opposite signs of fn at a and b, so it
    contains a root by continuity.
    """
    fn = _scalar_fn(fn_id)
    if pair is not None:
        p_f, s_f = pair.p, pair.s
        p_iv, s_iv = pair.interval_params()
    else:
        p_f = s_f = 0.0
        p_iv = s_iv = Interval(0.0)
    a, b = interval.lo, interval.hi
    fa, fb = fn(a, p_f, s_f), fn(b, p_f, s_f)
    if fa == 0.0:
        return Interval(a)
    if fb == 0.0:
        return Interval(b)
    if (fa > 0) == (fb > 0):
        raise NoSignChange(f"no sign change on [{a}, {b}]: f(a)={fa}, f(b)={fb}")
    neg_left = fa < 0
    while b - a > tol:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = fn(m, p_f, s_f)
        if fm == 0.0:
            a = b = m
            break
        if (fm < 0) == neg_left:
            a = m
        else:
            b = m

    def rig(x):
        return value_interval(fn(Interval(x), p_iv, s_iv))

    # widen until the interval-mode signs at both ends are certain
    step = max(tol / 8.0, 4 * math.ulp(max(abs(a), abs(b), 1e-300)))
    for _ in range(60):
        ra, rb = rig(a), rig(b)
        if a < b and ((ra.hi < 0 < rb.lo) or (rb.hi < 0 < ra.lo)):
            break
        if a == b and ra.contains(0.0):
            break
        a, b = max(interval.lo, a - step), min(interval.hi, b + step)
        step *= 2.0
    return Interval(a, b)


def stationary_points(pair: ExponentPair, lo: float = 1e-6, hi: float = 1 - 1e-6,
                      samples: int = 400, tol: float = 1e-12) -> list:
    """Root enclosures of the stationary residual and big_F there."""
    from .functions import big_F, stationary_residual

    xs = [lo + (hi - lo) * k / samples for k in range(samples + 1)]
    vals = [stationary_residual(x, pair.p, pair.s) for x in xs]
    out = []
    for x0, x1, v0, v1 in zip(xs, xs[1:], vals, vals[1:]):
        if (v0 < 0) != (v1 < 0):
            enc = bracket_root("stationary_residual", Interval(x0, x1), pair, tol)
            p_iv, s_iv = pair.interval_params()
            f_iv = big_F(enc, p_iv, s_iv)
            out.append({"root": enc, "big_F": big_F(enc.mid(), pair.p, pair.s), "big_F_enclosure": f_iv})
    return out
