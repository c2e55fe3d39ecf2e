"""Trigonometric polynomials on the unit circle.

A TorusFunction stores Fourier coefficients c_n for n in [-N, N].  Grid
values f(2 pi k / M) are produced by a radix-2 transform; L^p norms are
uniform-grid means of |f|^p, which is exact for even integer p once M is
large enough and converges fast for fractional p (|f|^p is smooth away
from zeros of f).  Near-zeros of f on the circle slow that convergence
down, so norms computed without an explicit grid keep doubling it until
two successive grids agree.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ZeroFunction
from .functions import ExponentPair, sharp_constant_forward, sharp_constant_reverse

DEFAULT_MIN_GRID = 4096
REFINE_TOL = 1e-10      # successive-grid agreement for reported norms
MAX_GRID = 1 << 20
CHUNK_POINTS = 1 << 22  # grid values held in memory at once


# --- transforms -----------------------------------------------------------------

def _is_pow2(m: int) -> bool:
    return m >= 1 and (m & (m - 1)) == 0


def _bit_reverse(m: int) -> np.ndarray:
    bits = m.bit_length() - 1
    idx = np.arange(m)
    rev = np.zeros(m, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def fft(x, inverse: bool = False) -> np.ndarray:
    """Unnormalized radix-2 DIT transform along the last axis.

    forward: X_k = sum_j x_j exp(-2 pi i jk/M); inverse flips the sign of the
    exponent (no 1/M factor).  M must be a power of two.
    """
    x = np.asarray(x, dtype=complex)
    m = x.shape[-1]
    if not _is_pow2(m):
        raise ValueError(f"transform length must be a power of two, got {m}")
    lead = x.shape[:-1]
    y = x[..., _bit_reverse(m)]
    sign = 1.0 if inverse else -1.0
    size = 2
    while size <= m:
        half = size // 2
        w = np.exp(sign * 2j * np.pi * np.arange(half) / size)
        y = y.reshape(*lead, m // size, size)
        even = y[..., :half]
        odd = y[..., half:] * w
        y = np.concatenate([even + odd, even - odd], axis=-1).reshape(*lead, m)
        size *= 2
    return y


def naive_dft(x, inverse: bool = False) -> np.ndarray:
    """O(M^2) reference transform, same conventions as fft."""
    x = np.asarray(x, dtype=complex)
    m = x.shape[-1]
    k = np.arange(m)
    sign = 1.0 if inverse else -1.0
    kernel = np.exp(sign * 2j * np.pi * np.outer(k, k) / m)
    return x @ kernel.T


def default_grid(degree: int) -> int:
    m = max(DEFAULT_MIN_GRID, 8 * degree)
    return 1 << (m - 1).bit_length()


def _check_grid(degree: int, m: int):
    if not _is_pow2(m):
        raise ValueError(f"grid size must be a power of two, got {m}")
    if m < 2 * degree + 2:
        raise ValueError(f"grid size {m} too small for degree {degree}")


def _values(coeffs: np.ndarray, degree: int, m: int) -> np.ndarray:
    """Grid values for coefficient rows of length 2N+1 (last axis)."""
    lead = coeffs.shape[:-1]
    buf = np.zeros(lead + (m,), dtype=complex)
    n = np.arange(-degree, degree + 1)
    buf[..., n % m] = coeffs
    return fft(buf, inverse=True)


# --- functions on the circle ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class TorusFunction:
    """Trigonometric polynomial sum_{|n| <= N} c_n e^{int}."""

    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.shape[0] != 2 * self.degree + 1:
            raise ValueError(f"expected {2 * self.degree + 1} coefficients, got {c.shape[0]}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_dict(cls, mapping, degree=None) -> "TorusFunction":
        if degree is None:
            degree = max((abs(int(n)) for n in mapping), default=0)
        c = np.zeros(2 * degree + 1, dtype=complex)
        for n, v in mapping.items():
            n = int(n)
            if abs(n) > degree:
                raise ValueError(f"frequency {n} exceeds degree {degree}")
            c[n + degree] = v
        return cls(degree, c)

    @classmethod
    def from_samples(cls, values, degree: int) -> "TorusFunction":
        """Recover coefficients of a degree-N polynomial from M uniform samples."""
        values = np.asarray(values, dtype=complex)
        m = values.shape[-1]
        _check_grid(degree, m)
        spectrum = fft(values) / m
        n = np.arange(-degree, degree + 1)
        return cls(degree, spectrum[n % m])

    def coefficient(self, n: int) -> complex:
        if abs(n) > self.degree:
            return 0j
        return complex(self.coeffs[n + self.degree])

    def as_dict(self) -> dict:
        return {n: self.coefficient(n) for n in range(-self.degree, self.degree + 1)}

    def padded(self, degree: int) -> "TorusFunction":
        if degree < self.degree:
            raise ValueError("cannot pad to a smaller degree")
        c = np.zeros(2 * degree + 1, dtype=complex)
        c[degree - self.degree: degree + self.degree + 1] = self.coeffs
        return TorusFunction(degree, c)

    def values(self, m: int | None = None) -> np.ndarray:
        m = default_grid(self.degree) if m is None else m
        _check_grid(self.degree, m)
        return _values(self.coeffs, self.degree, m)

    def l2_coefficients(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def __add__(self, other: "TorusFunction") -> "TorusFunction":
        d = max(self.degree, other.degree)
        return TorusFunction(d, self.padded(d).coeffs + other.padded(d).coeffs)

    def __eq__(self, other):
        if not isinstance(other, TorusFunction):
            return NotImplemented
        d = max(self.degree, other.degree)
        return bool(np.array_equal(self.padded(d).coeffs, other.padded(d).coeffs))

    def __hash__(self):
        return hash((self.degree, self.coeffs.tobytes()))


def _split(coeffs: np.ndarray, degree: int):
    plus = coeffs.copy()
    minus = coeffs.copy()
    plus[..., :degree] = 0
    minus[..., degree:] = 0
    return plus, minus


def project(f: TorusFunction, part: str) -> TorusFunction:
    """Riesz projections: 'plus' keeps n >= 0, 'minus' keeps n < 0."""
    plus, minus = _split(np.array(f.coeffs), f.degree)
    if part == "plus":
        return TorusFunction(f.degree, plus)
    if part == "minus":
        return TorusFunction(f.degree, minus)
    raise ValueError(f"part must be 'plus' or 'minus', got {part!r}")


def _pnorm(absvals: np.ndarray, p: float) -> np.ndarray:
    return np.mean(absvals ** p, axis=-1) ** (1.0 / p)


def _check_p(p: float):
    if not p >= 1:
        raise DomainError(f"p must be at least 1, got {p!r}")


def _mixed(vp: np.ndarray, vm: np.ndarray, s: float) -> np.ndarray:
    a, b = np.abs(vp), np.abs(vm)
    big = np.maximum(a, b)
    safe = np.where(big > 0, big, 1.0)
    return np.where(big > 0, big * ((a / safe) ** s + (b / safe) ** s) ** (1.0 / s), 0.0)


def _chunks(rows: np.ndarray, m: int):
    step = max(1, CHUNK_POINTS // m)
    for i in range(0, rows.size, step):
        yield rows[i:i + step]


def _refined(evaluate, n_rows: int, degree: int, m: int | None):
    """Quadrature with grid refinement.

    evaluate(rows, m) returns an array of shape (k, len(rows)).  With an
    explicit m the grid is used as given.  Otherwise the grid starts at
    default_grid(degree) and is doubled, for the rows that have not settled,
    until two successive grids agree to REFINE_TOL (or MAX_GRID is reached).
    Returns the values and the grid each row was reported on.
    """
    rows = np.arange(n_rows)
    if m is not None:
        _check_grid(degree, m)
        return evaluate(rows, m), np.full(n_rows, m)
    m = default_grid(degree)
    out = evaluate(rows, m)
    grids = np.full(n_rows, m)
    todo = rows
    while todo.size and m < MAX_GRID:
        m *= 2
        fine = evaluate(todo, m)
        settled = np.max(np.abs(fine - out[:, todo]), axis=0) <= REFINE_TOL
        out[:, todo] = fine
        grids[todo] = m
        todo = todo[~settled]
    return out, grids


def lp_norm(f: TorusFunction, p: float, m: int | None = None) -> float:
    _check_p(p)

    def evaluate(rows, mm):
        return np.array([[_pnorm(np.abs(f.values(mm)), p)]])

    return float(_refined(evaluate, 1, f.degree, m)[0][0, 0])


def mixed_norm(f: TorusFunction, s: float, p: float, m: int | None = None) -> float:
    """L^p norm of (|P+ f|^s + |P- f|^s)^(1/s)."""
    _check_p(p)
    if not s > 0:
        raise DomainError(f"s must be positive, got {s!r}")
    plus, minus = _split(np.array(f.coeffs), f.degree)

    def evaluate(rows, mm):
        vp = _values(plus, f.degree, mm)
        vm = _values(minus, f.degree, mm)
        return np.array([[_pnorm(_mixed(vp, vm, s), p)]])

    return float(_refined(evaluate, 1, f.degree, m)[0][0, 0])


def ratio_forward(f: TorusFunction, pair: ExponentPair, m: int | None = None) -> float:
    if f.is_zero():
        raise ZeroFunction("ratio undefined for the zero function")
    lp, mx, _ = batch_norms(f.coeffs, f.degree, [pair], m, with_grid=True)
    return float(mx[0, 0] / lp[0, 0])


def ratio_reverse(f: TorusFunction, pair: ExponentPair, m: int | None = None) -> float:
    if f.is_zero():
        raise ZeroFunction("ratio undefined for the zero function")
    lp, mx, _ = batch_norms(f.coeffs, f.degree, [pair], m, with_grid=True)
    return float(lp[0, 0] / mx[0, 0])


def batch_norms(coeffs: np.ndarray, degree: int, pairs, m: int | None = None,
                with_grid: bool = False):
    """lp and mixed norms for many coefficient rows at several pairs.

    Grid values do not depend on (p, s), so each grid is evaluated once for
    all pairs.  Returns arrays of shape (len(pairs), rows) for the lp norms
    and mixed norms, plus the grid used per row when with_grid is set.
    """
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    for pair in pairs:
        _check_p(pair.p)
    k = len(pairs)

    def evaluate(rows, mm):
        out = np.empty((2 * k, rows.size))
        at = 0
        for chunk in _chunks(rows, mm):
            plus, minus = _split(coeffs[chunk], degree)
            vp = _values(plus, degree, mm)
            vm = _values(minus, degree, mm)
            af = np.abs(vp + vm)
            for i, pair in enumerate(pairs):
                out[i, at:at + chunk.size] = _pnorm(af, pair.p)
                out[k + i, at:at + chunk.size] = _pnorm(_mixed(vp, vm, pair.s), pair.p)
            at += chunk.size
        return out

    vals, grids = _refined(evaluate, coeffs.shape[0], degree, m)
    lp, mx = vals[:k], vals[k:]
    return (lp, mx, grids) if with_grid else (lp, mx)


def random_polynomial(degree: int, seed: int) -> TorusFunction:
    """Complex Gaussian coefficients from numpy's default_rng(seed), scaled to unit L^2 norm."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(2 * degree + 1) + 1j * rng.standard_normal(2 * degree + 1)
    c /= np.sqrt(np.sum(np.abs(c) ** 2))
    return TorusFunction(degree, c)


def _constant_or_none(fn, pair):
    try:
        return fn(pair)
    except DomainError:
        return None


@dataclass
class NormReport:
    p: float
    s: float
    lp_norm_f: float
    mixed_norm: float
    ratio_forward: float
    ratio_reverse: float
    grid_size: int
    c_forward: float | None = None
    c_reverse: float | None = None

    @property
    def margin(self) -> float | None:
        """Distance below the applicable sharp constant (forward when p <= 2)."""
        if self.p <= 2 and self.c_forward is not None:
            return self.c_forward - self.ratio_forward
        if self.c_reverse is not None:
            return self.c_reverse - self.ratio_reverse
        return None

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["margin"] = self.margin
        return d


def norm_report(f: TorusFunction, pair: ExponentPair, m: int | None = None) -> NormReport:
    if f.is_zero():
        raise ZeroFunction("norm report undefined for the zero function")
    lp, mx, grid = batch_norms(f.coeffs[None, :], f.degree, [pair], m, with_grid=True)
    a, b = float(lp[0, 0]), float(mx[0, 0])
    return NormReport(pair.p, pair.s, a, b, b / a, a / b, int(grid[0]),
                      _constant_or_none(sharp_constant_forward, pair),
                      _constant_or_none(sharp_constant_reverse, pair))


# --- validation scan ------------------------------------------------------------

SCAN_COLUMNS = ("seed", "N", "p", "s", "lp_norm", "mixed_norm", "ratio_forward",
                "ratio_reverse", "C_forward", "C_reverse", "margin")


def scan_ratios(p_values, trials: int, degree: int, seed: int, m: int | None = None) -> list:
    """Ratios of `trials` random polynomials (seeds seed, seed+1, ...) at conjugate pairs."""
    pairs = [ExponentPair.conjugate(p) for p in p_values]
    seeds = [seed + i for i in range(trials)]
    coeffs = np.array([random_polynomial(degree, sd).coeffs for sd in seeds]).reshape(trials, -1)
    lp, mx = batch_norms(coeffs, degree, pairs, m)
    rows = []
    for i, pair in enumerate(pairs):
        cf = _constant_or_none(sharp_constant_forward, pair)
        cr = _constant_or_none(sharp_constant_reverse, pair)
        for j, sd in enumerate(seeds):
            rf = mx[i, j] / lp[i, j]
            rr = lp[i, j] / mx[i, j]
            margin = (cf - rf) if (pair.p <= 2 and cf is not None) else (cr - rr if cr is not None else None)
            rows.append({"seed": sd, "N": degree, "p": pair.p, "s": pair.s,
                         "lp_norm": float(lp[i, j]), "mixed_norm": float(mx[i, j]),
                         "ratio_forward": float(rf), "ratio_reverse": float(rr),
                         "C_forward": cf, "C_reverse": cr, "margin": margin})
    return rows


def write_csv(rows, path, columns=SCAN_COLUMNS):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(columns), extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in columns})


# --- coefficient files ----------------------------------------------------------

def to_json(f: TorusFunction) -> dict:
    return {"degree": f.degree,
            "coefficients": [[n, float(c.real), float(c.imag)]
                             for n, c in zip(range(-f.degree, f.degree + 1), f.coeffs) if c != 0]}


def from_json(obj) -> TorusFunction:
    degree = int(obj["degree"])
    mapping = {}
    for n, re, im in obj["coefficients"]:
        mapping[int(n)] = complex(re, im)
    return TorusFunction.from_dict(mapping, degree)


def save(f: TorusFunction, path):
    with open(path, "w") as fh:
        json.dump(to_json(f), fh, indent=2)


def load(path) -> TorusFunction:
    with open(path) as fh:
        return from_json(json.load(fh))
