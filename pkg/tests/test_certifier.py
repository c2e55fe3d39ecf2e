"""Catalog structure and the branch-and-bound certifier."""
import json
import math

import mpmath
import numpy as np
import pytest

from rieszcert import catalog as cat
from rieszcert.catalog import (FUNCTIONS, Claim, FunctionSpec, claim_catalog, default_grid,
                               get_claim, pair_matches)
from rieszcert.certifier import (CertifierConfig, _Problem, bracket_root, certify, certify_derived,
                                 certify_sign, exit_status, verify_all)
from rieszcert.errors import DomainError, NoSignChange
from rieszcert.functions import ExponentPair, big_F
from rieszcert.interval import Interval


@pytest.fixture
def toy(monkeypatch):
    """Register throwaway functions for smoke tests."""
    monkeypatch.setitem(FUNCTIONS, "toy_square", FunctionSpec(1, lambda x, p, s: x[0] * x[0]))
    monkeypatch.setitem(FUNCTIONS, "toy_const", FunctionSpec(1, lambda x, p, s: 0.0 * x[0] + 1.5))
    monkeypatch.setitem(FUNCTIONS, "toy_shift", FunctionSpec(1, lambda x, p, s: x[0] - 0.25))


class TestCatalog:
    def test_structure(self):
        claims = claim_catalog()
        assert len(claims) >= 16
        ids = [c.id for c in claims]
        assert len(set(ids)) == len(ids)
        for c in claims:
            assert c.citation
            assert len(c.domain_box()) == FUNCTIONS[c.fn_id].arity

    def test_c1_shape(self):
        c = get_claim("C1")
        assert len(c.domain_box()) == 2 and c.parameterized

    def test_required_ids(self):
        for cid in ("C1", "C2", "C3a", "C3b", "C4", "C5", "C6a", "C6b", "C7", "C8a", "C8b",
                    "C9a", "C9b", "C10", "C11a", "C11b", "C12a", "C12b", "C12c", "C12d",
                    "C13a", "C14", "C15", "C16a"):
            get_claim(cid)

    def test_unknown(self):
        with pytest.raises(KeyError):
            get_claim("C99")

    def test_json_export(self):
        data = json.loads(cat.catalog_json())
        assert {d["id"] for d in data} == {c.id for c in claim_catalog()}

    def test_anchor_locations_contain_value(self):
        pr = ExponentPair.conjugate(1.5)
        loc = get_claim("C1").anchors[0].location(*pr.interval_params())
        assert loc[0] == Interval(1.0)
        assert loc[1].contains(2 * math.pi / 3)


class TestSmoke:
    def test_square_nonnegative(self, toy):
        c = Claim("T1", "toy_square", ("x",), (("-1", "1"),), "nonnegative", "toy")
        cert = certify_sign(c, CertifierConfig(split_depth=0))
        assert cert.verdict == "proved"
        assert cert.max_depth_reached <= 3

    def test_constant_is_nondecreasing(self, toy):
        c = Claim("T2", "toy_const", ("x",), (("0", "1"),), "nondecreasing", "toy")
        cert = certify_derived(c)
        assert cert.verdict == "proved"

    def test_derived_requires_derived_assertion(self, toy):
        c = Claim("T3", "toy_square", ("x",), (("0", "1"),), "nonnegative", "toy")
        with pytest.raises(ValueError):
            certify_derived(c)

    def test_refutation(self, toy):
        c = Claim("T4", "toy_shift", ("x",), (("0", "1"),), "nonnegative", "toy")
        cert = certify(c)
        assert cert.verdict == "refuted"
        assert cert.counterexample["value"] < -cert.tolerance

    def test_config_validation(self):
        with pytest.raises(ValueError):
            CertifierConfig(max_depth=0)
        with pytest.raises(ValueError):
            CertifierConfig(strictness_margin=-1.0)


class TestVerdicts:
    def test_counterexample(self):
        cert = certify(get_claim("C1"), pair=ExponentPair(1.5, 4.0))
        assert cert.verdict == "refuted"
        x = cert.counterexample["point"]
        assert cert.counterexample["value"] <= -5e-4
        assert abs(x[0] - 0.5) < 0.15 and abs(x[1] - math.pi / 2) < 0.25
        assert any("not conjugate" in e for e in cert.exceptions)

    def test_boundary_zero_claim(self):
        cert = certify(get_claim("C4"))
        assert cert.verdict == "proved"
        assert any("anchor" in e for e in cert.exceptions)

    def test_factored_claim(self):
        cert = certify(get_claim("C3a"))
        assert cert.verdict == "proved"
        assert cert.strategies["factored"] > 0

    def test_budget_gives_inconclusive(self):
        pr = ExponentPair.conjugate(1.5)
        cert = certify(get_claim("C1"), CertifierConfig(max_depth=5), pr)
        assert cert.verdict == "inconclusive"
        assert cert.counterexample is None

    def test_monotone_budget(self):
        pr = ExponentPair.conjugate(1.75)
        seen = [certify(get_claim("C1"), CertifierConfig(max_depth=d), pr).verdict for d in (4, 8, 16, 40)]
        assert "refuted" not in seen and seen[-1] == "proved"
        seen = [certify(get_claim("C1x"), CertifierConfig(max_depth=d)).verdict for d in (10, 20, 40)]
        assert "proved" not in seen

    def test_strictness_margin_disables_boundary_tools(self):
        cert = certify(get_claim("C4"), CertifierConfig(strictness_margin=1e-6, max_depth=12))
        assert cert.verdict != "proved"

    def test_workers_do_not_change_result(self):
        pr = ExponentPair.conjugate(1.4)
        a = certify(get_claim("C1"), CertifierConfig(workers=1), pr).to_json(stable=True)
        b = certify(get_claim("C1"), CertifierConfig(workers=2), pr).to_json(stable=True)
        assert a == b

    def test_leaves_tile_the_domain(self):
        pr = ExponentPair.conjugate(1.5)
        c = get_claim("C1")
        cert = certify(c, CertifierConfig(record_leaves=True), pr)
        assert cert.verdict == "proved"
        leaves = np.array(cert.leaves)  # (n, 2, 2)
        box = c.domain_box()
        area = (box[0].hi - box[0].lo) * (box[1].hi - box[1].lo)
        widths = leaves[:, :, 1] - leaves[:, :, 0]
        assert np.prod(widths, axis=1).sum() == pytest.approx(area, rel=1e-12)
        lo, hi = leaves[:, :, 0], leaves[:, :, 1]
        for i in range(len(leaves)):
            inter = np.minimum(hi[i], hi) - np.maximum(lo[i], lo)
            overlap = np.all(inter > 0, axis=1)
            overlap[i] = False
            assert not overlap.any()


class TestBracketRoot:
    def test_stationary_root(self):
        pr = ExponentPair(1.5, 3.0)
        enc = bracket_root("stationary_residual", Interval(0.1, 0.99), pr, 1e-10)
        assert 0.53 <= enc.lo and enc.hi <= 0.54
        assert enc.width() <= 1e-10
        assert big_F(enc.mid(), 1.5, 3.0) == pytest.approx(0.0310, abs=1e-4)

    def test_linear(self):
        enc = bracket_root(lambda x, p, s: x - 0.5, Interval(0.0, 1.0), None, 1e-10)
        assert enc.lo >= 0.5 - 1e-10 and enc.hi <= 0.5 + 1e-10 and enc.contains(0.5)

    def test_irrational_root_has_certified_signs(self):
        enc = bracket_root(lambda x, p, s: x * x - 2.0, Interval(1.0, 2.0), None, 1e-12)
        assert enc.contains(math.sqrt(2)) and enc.width() <= 1e-12

    def test_no_sign_change(self):
        with pytest.raises(NoSignChange):
            bracket_root(lambda x, p, s: x * x + 1.0, Interval(-1.0, 1.0), None, 1e-10)


# --- batch runs ----------------------------------------------------------------------

@pytest.fixture(scope="module")
def full_run():
    return verify_all(claim_catalog(), default_grid(), CertifierConfig())


def _float_target(claim, pair, points):
    p, s = (pair.p, pair.s) if pair else (0.0, 0.0)
    try:
        v = claim.target(tuple(points), p, s)
        while hasattr(v, "val"):
            v = v.val
        v = np.asarray(v, dtype=float)
        if v.shape == points[0].shape:
            return v
    except (TypeError, ValueError, DomainError):
        pass
    out = np.empty(points[0].shape)
    for k in range(points[0].size):
        try:
            out[k] = float(claim.target(tuple(float(a[k]) for a in points), p, s))
        except DomainError:
            out[k] = np.nan  # removable endpoint singularity; covered by closed forms
    return out


class TestBatch:
    def test_default_grid_outcomes(self, full_run):
        assert len(full_run) >= 16
        for c in full_run:
            assert c.verdict == c.expect, (c.claim_id, c.p, c.verdict)
        assert exit_status(full_run) == 0

    def test_order(self, full_run):
        keys = [(cat.claim_sort_key(c.claim_id), c.p or -1, c.s or -1) for c in full_run]
        assert keys == sorted(keys)

    def test_dense_grid_soundness(self, full_run):
        grid = {(pr.p, pr.s): pr for pr in default_grid()}
        for cert in full_run:
            if cert.verdict != "proved":
                continue
            claim = get_claim(cert.claim_id)
            pair = grid.get((cert.p, cert.s)) if cert.p is not None else None
            box = claim.domain_box()
            k = int(round(1e5 ** (1 / len(box))))
            axes = [np.linspace(max(iv.lo, float(a)), min(iv.hi, float(b)), k)
                    for iv, (a, b) in zip(box, [(-np.inf, np.inf)] * len(box))]
            pts = [m.ravel() for m in np.meshgrid(*axes, indexing="ij")]
            v = _float_target(claim, pair, pts)
            sigma = 1.0 if claim.sign == "nonnegative" else -1.0
            bad = np.flatnonzero(sigma * v < -1e-12)
            # Float derivatives of the cleared quotient cancel badly next to
            # r = 1, so low float values are rechecked with a point enclosure:
            # a genuine counterexample has an enclosure strictly below zero.
            assert bad.size <= 1e-3 * v.size, (cert.claim_id, cert.p, bad.size)
            prob = _Problem(claim, pair, CertifierConfig())
            for k in bad:
                enc = prob.enclose([Interval(float(a[k])) for a in pts])
                assert enc.hi >= -1e-12, (cert.claim_id, cert.p, [a[k] for a in pts], enc)

    @pytest.mark.parametrize("p", [1.4, 1.75, 1.9])
    def test_f2_slope_next_to_one(self, p):
        """High-precision slope of F2 where float derivatives cancel."""
        mpmath.mp.dps = 50
        p = mpmath.mpf(p)
        s = p / (p - 1)
        tn = mpmath.tan(mpmath.pi / (2 * p))

        def f2(r):
            q = (1 - r ** s) / (1 - r ** (s - 1))
            return (2 * mpmath.cos(mpmath.pi / (2 * p))) ** -p - tn * r ** (p / 2 - 1) * (1 + r) ** (1 - p) * q / 2

        for r in ("0.99", "0.99999", "0.999995", "0.9999999"):
            assert mpmath.diff(f2, mpmath.mpf(r)) > 0

    def test_refuted_witnesses_violate(self, full_run):
        for cert in full_run:
            if cert.verdict == "refuted":
                claim = get_claim(cert.claim_id)
                pair = ExponentPair(*claim.fixed_pair) if claim.fixed_pair else ExponentPair(cert.p, cert.s)
                v = claim.target(tuple(cert.counterexample["point"]), pair.p, pair.s)
                sigma = 1.0 if claim.sign == "nonnegative" else -1.0
                assert sigma * v < -cert.tolerance

    def test_empty_grid_and_repeatability(self):
        a = verify_all(claim_catalog(), [], CertifierConfig())
        ids = {c.claim_id for c in a}
        assert not any(get_claim(i).parameterized for i in ids)
        assert {"C4", "C5", "C9a", "C13a", "C16a"} <= ids
        b = verify_all(claim_catalog(), [], CertifierConfig())
        assert [c.to_json(stable=True) for c in a] == [c.to_json(stable=True) for c in b]

    def test_pair_matching(self):
        fwd = ExponentPair.conjugate(1.5)
        rev = ExponentPair.conjugate(3.0)
        assert pair_matches(get_claim("C1"), fwd) and not pair_matches(get_claim("C1"), rev)
        assert pair_matches(get_claim("C10"), rev)
