"""Derivative-free search for polynomials with a large norm ratio.

The parameters are the real and imaginary parts of the 2N+1 coefficients.
Every evaluated candidate is checked against the sharp constant, so a run
doubles as a randomized test of the inequalities themselves.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import CeilingViolation, DomainError
from .functions import ExponentPair, sharp_constant_forward, sharp_constant_reverse
from .torus import TorusFunction, default_grid, random_polynomial

CEILING_SLACK = 1e-9
DEFAULT_RESTARTS = 8


@dataclass
class SearchState:
    best: TorusFunction
    best_ratio: float
    iterations: int = 0
    history: list = field(default_factory=list)
    constant: float = float("nan")
    direction: str = "forward"

    @property
    def fraction(self) -> float:
        return self.best_ratio / self.constant


class _Objective:
    """Ratio evaluation through a cached synthesis matrix."""

    def __init__(self, pair: ExponentPair, degree: int, direction: str, m: int | None):
        self.pair = pair
        self.degree = degree
        self.direction = direction
        m = default_grid(degree) if m is None else m
        t = 2 * np.pi * np.arange(m) / m
        n = np.arange(-degree, degree + 1)
        self.synth = np.exp(1j * np.outer(t, n))
        if direction == "forward":
            self.constant = sharp_constant_forward(pair)
        elif direction == "reverse":
            self.constant = sharp_constant_reverse(pair)
        else:
            raise ValueError(f"direction must be 'forward' or 'reverse', got {direction!r}")
        self.evaluations = 0

    def coeffs(self, x) -> np.ndarray:
        k = 2 * self.degree + 1
        return np.asarray(x[:k]) + 1j * np.asarray(x[k:])

    def ratio(self, x) -> float:
        c = self.coeffs(x)
        if not np.any(c):
            return -np.inf
        d = self.degree
        vp = self.synth[:, d:] @ c[d:]
        vm = self.synth[:, :d] @ c[:d]
        p, s = self.pair.p, self.pair.s
        a, b = np.abs(vp), np.abs(vm)
        lp = np.mean(np.abs(vp + vm) ** p) ** (1.0 / p)
        mixed = np.mean((a ** s + b ** s) ** (p / s)) ** (1.0 / p)
        r = mixed / lp if self.direction == "forward" else lp / mixed
        self.evaluations += 1
        if r > self.constant + CEILING_SLACK:
            raise CeilingViolation(
                f"ratio {r!r} exceeds constant {self.constant!r} at p={p}, s={s}")
        return float(r)


def _to_params(f: TorusFunction) -> np.ndarray:
    return np.concatenate([f.coeffs.real, f.coeffs.imag])


def degree_stages(degree: int) -> list:
    """Degrees 1, 2, 4, ... below `degree`, then `degree` itself."""
    stages = []
    d = 1
    while d < degree:
        stages.append(d)
        d *= 2
    stages.append(degree)
    return stages


def maximize_ratio(pair: ExponentPair, degree: int, direction: str = "forward",
                   budget: int = 20000, seed: int = 0, restarts: int = DEFAULT_RESTARTS,
                   grid: int | None = None, init: TorusFunction | None = None) -> SearchState:
    """Nelder-Mead ascent of the forward or reverse ratio.

    The search climbs the degrees of degree_stages(degree).  At the first
    stage it runs `restarts` simplex searches from random_polynomial(d1,
    seed * 1000 + r), r = 0, 1, ...; every later stage runs one simplex search
    started from the best polynomial so far, zero-padded.  Low-dimensional
    searches find good shapes cheaply and padding keeps them.  When `init`
    is given it joins the first stage as an extra start (and that stage is
    the first one of degree >= init.degree).

    `budget` counts ratio evaluations and is split across stages in
    proportion to 2d+1; the first stage's share is split over its starts.
    Ties between starts keep the earlier one.
    """
    if direction == "forward" and not (1 < pair.p <= 2):
        raise DomainError(f"forward search needs p in (1, 2], got {pair.p}")
    if direction == "reverse" and not (2 <= pair.p < 4):
        raise DomainError(f"reverse search needs p in [2, 4), got {pair.p}")
    if init is not None and init.degree > degree:
        raise ValueError("init has larger degree than the search")
    m = default_grid(degree) if grid is None else grid
    objectives = {}
    counter = [0]

    def objective(d):
        if d not in objectives:
            objectives[d] = _Objective(pair, d, direction, m)
        return objectives[d]

    stages = degree_stages(degree)
    if init is not None:
        stages = [d for d in stages if d >= init.degree]
    d0 = stages[0]
    starts = [random_polynomial(d0, seed * 1000 + r) for r in range(max(1, restarts))]
    if init is not None:
        starts.insert(0, init.padded(d0))

    obj_n = objective(degree)
    first = starts[0].padded(degree)
    state = SearchState(best=first, best_ratio=obj_n.ratio(_to_params(first)),
                        constant=obj_n.constant, direction=direction)
    counter[0] += 1
    state.history.append((counter[0], state.best_ratio))
    leader = [starts[0]]  # best so far at its own degree

    def consider(d, x, r):
        if r > state.best_ratio:
            leader[0] = TorusFunction(d, objective(d).coeffs(x))
            state.best_ratio = r
            state.best = leader[0].padded(degree)
            state.history.append((counter[0], r))

    def simplex(d, start, share):
        if share < 2:
            return
        obj = objective(d)
        used = [0]

        def neg(x):
            if used[0] >= share:
                return np.inf
            used[0] += 1
            counter[0] += 1
            r = obj.ratio(x)
            consider(d, x, r)
            return -r

        minimize(neg, _to_params(start.padded(d)), method="Nelder-Mead",
                 options={"maxfev": share, "maxiter": share, "adaptive": True,
                          "xatol": 1e-10, "fatol": 1e-14})

    weights = [2 * d + 1 for d in stages]
    total = max(0, budget - 1)
    shares = [total * w // sum(weights) for w in weights]
    for start in starts:
        simplex(d0, start, shares[0] // len(starts))
    for d, share in zip(stages[1:], shares[1:]):
        simplex(d, leader[0], share)
    state.iterations = counter[0]
    return state


def sweep(p_values, degree: int, budget: int, seed: int = 0, restarts: int = DEFAULT_RESTARTS) -> list:
    """One search per p at the conjugate s; forward for p <= 2, reverse above."""
    if not p_values:
        raise ValueError("sweep needs at least one p value")
    rows = []
    for p in p_values:
        row = {"p": p, "s": None, "direction": None, "C": None, "best_ratio": None,
               "fraction": None, "evaluations": 0, "error": None}
        try:
            pair = ExponentPair.conjugate(p)
            direction = "forward" if p <= 2 else "reverse"
            st = maximize_ratio(pair, degree, direction, budget, seed, restarts)
            row.update(s=pair.s, direction=direction, C=st.constant, best_ratio=st.best_ratio,
                       fraction=st.fraction, evaluations=st.iterations)
        except (DomainError, CeilingViolation, ValueError) as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows


SWEEP_COLUMNS = ("p", "s", "direction", "C", "best_ratio", "fraction", "evaluations", "error")
