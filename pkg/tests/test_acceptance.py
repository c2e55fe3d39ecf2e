"""Acceptance criteria 1-10, one PASS/FAIL line each."""
import math
import time
import zlib

import mpmath
import numpy as np

from rieszcert import functions as fx
from rieszcert import torus
from rieszcert.catalog import claim_catalog, get_claim, pair_matches
from rieszcert.certifier import CertifierConfig, bracket_root, certify
from rieszcert.extremal import maximize_ratio
from rieszcert.functions import ExponentPair
from rieszcert.interval import Dual, Interval, PI_HI, PI_LO
from rieszcert.torus import TorusFunction

from test_functions import mp_big_F, mp_varphi1
from test_interval import SOUNDNESS_CASES, _check, _pow_make

FORWARD_P = (1.40, 1.50, 1.75, 1.90)
REVERSE_P = (2.25, 2.50, 3.00, 3.75)


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def test_criterion_1_counterexample(acceptance):
    cert, dt = timed(certify, get_claim("C1"), CertifierConfig(), ExponentPair(1.5, 4.0))
    value = cert.counterexample["value"] if cert.counterexample else math.nan
    point = fx.phi(Interval(0.5), Interval(PI_LO, PI_HI) / 2.0, Interval(1.5), Interval(4.0))
    ok = cert.verdict == "refuted" and value <= -5e-4 and point.hi < 0 and dt < 5
    acceptance(1, ok, f"witness {cert.counterexample and cert.counterexample['point']}, "
                      f"value {value:.3e}, Phi(1/2, pi/2) <= {point.hi:.3e}, {dt:.1f} s")
    assert ok


def test_criterion_2_forward_scalar(acceptance):
    details, ok = [], True
    for p in FORWARD_P:
        pair = ExponentPair.conjugate(p)
        for cid in ("C1", "C2"):
            cert, dt = timed(certify, get_claim(cid), CertifierConfig(max_depth=40), pair)
            good = cert.verdict == "proved" or (
                cert.verdict == "inconclusive" and cert.min_enclosure.lo >= -1e-9)
            ok &= good and dt < 60
            details.append(f"{cid}@{p:g}:{cert.verdict[0]}/{dt:.1f}s")
    acceptance(2, ok, " ".join(details))
    assert ok


def test_criterion_3_reverse_scalar(acceptance):
    claims = [c for c in claim_catalog() if c.id == "C10" or c.id.startswith("C11")]
    details, ok = [], True
    for p in REVERSE_P:
        pair = ExponentPair.conjugate(p)
        for claim in claims:
            if claim.params == "none":
                continue
            cert, dt = timed(certify, claim, CertifierConfig(), pair)
            ok &= cert.verdict == "proved" and dt < 60
            details.append(f"{claim.id}@{p:g}:{cert.verdict[0]}/{dt:.1f}s")
    for claim in claims:
        if claim.params == "none":
            cert, dt = timed(certify, claim)
            ok &= cert.verdict == "proved" and dt < 60
            details.append(f"{claim.id}:{cert.verdict[0]}/{dt:.1f}s")
    acceptance(3, ok, " ".join(details))
    assert ok


def _in_lemma_suite(cid):
    if cid in ("C3a", "C3b"):
        return True
    n = int("".join(ch for ch in cid[1:] if ch.isdigit()))
    return 4 <= n <= 9 or 12 <= n <= 16


def test_criterion_4_lemma_suite(acceptance):
    t0 = time.perf_counter()
    results, exceptions = [], 0
    for claim in claim_catalog():
        if not _in_lemma_suite(claim.id):
            continue
        pairs = [None]
        if claim.parameterized:
            pairs = [ExponentPair.conjugate(p) for p in FORWARD_P + REVERSE_P]
            pairs = [q for q in pairs if pair_matches(claim, q)]
        for pair in pairs:
            cert = certify(claim, CertifierConfig(), pair)
            results.append((claim.id, cert.verdict))
            exceptions += bool(cert.exceptions)
    dt = time.perf_counter() - t0
    failed = [r for r in results if r[1] != "proved"]
    ok = not failed and dt < 600
    acceptance(4, ok, f"{len(results)} certificates, {len(failed)} not proved {failed}, "
                      f"{exceptions} with documented boundary exceptions, {dt:.0f} s")
    assert ok


def test_criterion_5_exact_values(acceptance):
    mpmath.mp.dps = 40
    pi = mpmath.pi
    d_closed = pi / 4 - mpmath.mpf(11) / 6 * mpmath.log(2) - mpmath.log(3) + mpmath.log(5)
    d_pkg = fx.varphi1(Dual(2.0, 1.0)).der
    psi_d = fx.psi_phi1(Dual(4.0, 1.0)).der
    omega = fx.aux_omega(0.25)
    checks = {
        "phi1(2)=0": abs(fx.varphi1(2.0)) <= 1e-12,
        "phi1'(2) closed form": abs(d_pkg - float(d_closed)) <= 1e-12 and d_closed > 0,
        "phi1'(2) oracle": abs(mpmath.diff(mp_varphi1, 2) - d_closed) < 1e-30,
        "psi'(4)": abs(psi_d - (65 * math.log(4) - 480)) <= 1e-9 and psi_d < 0,
        "omega(1/4)": abs(omega - float(-pi / mpmath.sqrt(2) + pi / 2 + 1)) <= 1e-12 and omega >= 0,
        "aux(2)": abs(fx.aux_lemma_fn(2.0) - math.pi * (math.pi - 4)) <= 1e-12,
        "g(5/2)": fx.g_fn(Interval(2.5)).lo >= 12.5,
    }
    ok = all(checks.values())
    acceptance(5, ok, f"phi1'(2)={d_pkg:.12f} psi'(4)={psi_d:.4f} omega(1/4)={omega:.6f} "
                      f"g(5/2)={fx.g_fn(2.5):.6f} failed={[k for k, v in checks.items() if not v]}")
    assert ok


def test_criterion_6_operator_norms(acceptance):
    t0 = time.perf_counter()
    fwd = [1.40, 1.5, 1.6, 1.75, 1.9]
    rev = [2.25, 2.5, 3.0, 3.5, 3.75]
    rows = torus.scan_ratios(fwd + [2.0] + rev, trials=1000, degree=16, seed=0)
    worst_f = worst_r = -math.inf
    flat = 0.0
    for r in rows:
        p, s = r["p"], r["s"]
        if p == 2.0:
            flat = max(flat, abs(r["ratio_forward"] - 1.0))
        elif p < 2:
            c = 2 ** (1 / s) / (2 * math.cos(math.pi / (2 * p)))
            worst_f = max(worst_f, r["ratio_forward"] - c)
        else:
            c = 2 ** (1 - 1 / s) * math.cos(math.pi / (2 * p))
            worst_r = max(worst_r, r["ratio_reverse"] - c)
    dt = time.perf_counter() - t0
    ok = worst_f <= 1e-9 and worst_r <= 1e-9 and flat <= 1e-10 and dt < 120
    acceptance(6, ok, f"{len(rows)} ratios; max excess forward {worst_f:.3e}, reverse {worst_r:.3e}; "
                      f"|ratio-1| at p=2 <= {flat:.1e}; {dt:.1f} s")
    assert ok


def test_criterion_7_quadrature(acceptance):
    two_cos = TorusFunction.from_dict({1: 1.0, -1: 1.0})
    e2 = abs(torus.lp_norm(two_cos, 2) - math.sqrt(2))
    e4 = abs(torus.lp_norm(two_cos, 4) - 6 ** 0.25)
    trip = 0.0
    for seed in range(20):
        f = torus.random_polynomial(64, seed)
        g = TorusFunction.from_samples(f.values(), 64)
        trip = max(trip, np.max(np.abs(g.coeffs - f.coeffs)) / np.max(np.abs(f.coeffs)))
    ok = e2 <= 1e-12 and e4 <= 1e-10 and trip <= 1e-10
    acceptance(7, ok, f"||2cos||_2 err {e2:.1e}, ||2cos||_4 err {e4:.1e}, round trip {trip:.1e}")
    assert ok


def test_criterion_8_stationary(acceptance):
    pair = ExponentPair(1.5, 3.0)
    enc = bracket_root("stationary_residual", Interval(0.1, 0.99), pair, 1e-10)
    mid = enc.mid()
    value = fx.big_F(mid, 1.5, 3.0)
    mpmath.mp.dps = 40
    root = mpmath.findroot(lambda r: mpmath.diff(lambda x: mp_big_F(x, 1.5, 3), r), 0.54)
    ok = (0.53 <= enc.lo and enc.hi <= 0.54 and enc.width() <= 1e-10 and value >= 0.03
          and enc.lo - 1e-12 <= root <= enc.hi + 1e-12)
    acceptance(8, ok, f"r* in [{enc.lo:.12f}, {enc.hi:.12f}] (width {enc.width():.1e}), "
                      f"F(mid) = {value:.6f}, independent root {float(root):.12f}")
    assert ok


def test_criterion_9_interval_soundness(acceptance):
    violations = {}
    for name, iv_fn, mp_fn, np_fn, make, args in SOUNDNESS_CASES:
        make = make or _pow_make()
        violations[name] = len(_check(name, iv_fn, mp_fn, np_fn, make, zlib.crc32(name.encode()), args))
    ok = not any(violations.values())
    acceptance(9, ok, f"10^4 trials x {len(violations)} operations, violations {violations}")
    assert ok


def test_criterion_10_extremal(acceptance):
    pair = ExponentPair(1.5, 3.0)
    t0 = time.perf_counter()
    a = maximize_ratio(pair, 16, "forward", budget=20000, seed=0)
    b = maximize_ratio(pair, 16, "forward", budget=20000, seed=0)
    dt = time.perf_counter() - t0
    ratios = [h[1] for h in a.history]
    monotone = all(x <= y for x, y in zip(ratios, ratios[1:]))
    same = a.best == b.best and a.history == b.history
    ok = 1.02 < a.best_ratio <= 2 ** (1 / 3) + 1e-9 and monotone and same and dt < 180
    acceptance(10, ok, f"best ratio {a.best_ratio:.6f} of {2 ** (1 / 3):.6f}, "
                       f"{len(ratios)} improvements, deterministic={same}, {dt:.1f} s for two runs")
    assert ok
