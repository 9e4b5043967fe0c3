import json
import random

import pytest

from looplab import (
    GROUP_RES_SL2,
    GROUP_SL2,
    GROUP_SU3,
    ConstraintViolation,
    IndeterminatePrecision,
    LaurentSeries,
    LoopLabError,
    NotAUnit,
    QuadExtElement,
    alg_make,
    certificate_from_document,
    factor_loop_element,
    factor_res_sl2_torus,
    factor_sl2_torus,
    factor_su3_torus_artinian,
    identity,
    lift_factorization,
    mat_mul,
    mat_word,
    sl2_torus,
    sl2_uplus,
    square_zero_filtration,
    squarezero_target,
    su3_a,
    su3_b_factor,
    su3_n,
    su3_n_factor,
    su3_squarezero_torus_factor,
    su3_torus,
    verify_certificate,
)
from looplab.factorization import certificate_digest, su3_a_factor
from looplab.literals import parse_quad, parse_ring, parse_series
from looplab.randgen import random_quad, random_quad_unit, random_word


@pytest.fixture
def Q():
    return alg_make(0, [])


class TestSl2Identity:
    def test_six_matrices_for_t(self, Q):
        t = parse_series("t", Q, "t")
        mats = factor_sl2_torus(t)
        shown = [
            ("t", (0, 1)), ("-t^-1", (1, 0)), ("-1", (0, 1)),
            ("1", (1, 0)), ("-1", (0, 1)), ("-t", (1, 0)),
        ]
        for m, (text, pos) in zip(mats, shown):
            assert repr(m.entries[pos[0]][pos[1]]) == text
        ok, _ = mat_word(mats).eq_window(sl2_torus(t))
        assert ok

    def test_a_equals_one(self, Q):
        one = LaurentSeries.one(Q, "t")
        prod = mat_word(factor_sl2_torus(one))
        assert prod.eq_window(identity(GROUP_SL2, Q, "t"))[0]

    def test_exact_over_dual_numbers(self):
        R = alg_make(0, [("e", 2)])
        a = parse_series("1 + e", R, "t")
        prod = mat_word(factor_sl2_torus(a))
        assert prod.entries == sl2_torus(a).entries
        assert all(x.exact for row in prod.entries for x in row)

    def test_rejects_nonunit(self):
        R = alg_make(0, [("e", 2)])
        with pytest.raises(NotAUnit):
            factor_sl2_torus(parse_series("e", R, "t"))

    def test_tags_alternate(self, Q):
        mats = factor_sl2_torus(parse_series("t", Q, "t"))
        assert [m.subgroup for m in mats] == ["U+", "U-", "U+", "U-", "U+", "U-"]


class TestResSl2:
    def test_same_identity_over_u(self, Q):
        a = parse_series("u", Q, "u")
        mats = factor_res_sl2_torus(a, 3)
        ok, _ = mat_word(mats).eq_window(sl2_torus(a))
        assert ok
        assert "u^3 = t" in mats[0].note

    def test_exact_recomposition_with_nilpotents(self):
        R = alg_make(0, [("e", 2)])
        a = parse_series("1 + e*u", R, "u")
        prod = mat_word(factor_res_sl2_torus(a, 2))
        assert prod.entries == sl2_torus(a).entries

    def test_wild_degree_rejected(self):
        R = alg_make(5, [("e", 2)])
        a = parse_series("1 + u", R, "u")
        with pytest.raises(LoopLabError):
            factor_res_sl2_torus(a, 10)
        factor_res_sl2_torus(a, 3)  # tame is fine


class TestSu3NFactor:
    def test_trace_zero_pi(self, Q):
        pi = QuadExtElement.pi(Q, "t")
        zero = QuadExtElement.zero(Q, "t")
        mats = su3_n_factor(pi, zero)
        assert [m.subgroup for m in mats] == ["U+", "U-", "U+"]
        # the degenerate display has zero u-entries in the outer factors
        assert mats[0].entries[0][1].is_zero()
        ok, _ = mat_word(mats).eq_window(su3_n(pi))
        assert ok

    def test_defect_reported(self, Q):
        y = QuadExtElement.one(Q, "t") + QuadExtElement.pi(Q, "t")
        two = QuadExtElement.one(Q, "t") + QuadExtElement.one(Q, "t")
        with pytest.raises(ConstraintViolation) as exc:
            su3_n_factor(y, two)  # trace(y) = 2 but x*sigma(x) = 4
        assert exc.value.defect is not None

    def test_any_trace_zero_unit(self, Q):
        rng = random.Random(2)
        from looplab.randgen import random_trace_zero_quad_unit

        for _ in range(10):
            y = random_trace_zero_quad_unit(rng, Q, "t", -1, 1)
            mats = su3_n_factor(y, QuadExtElement.zero(Q, "t"), 48)
            ok, w = mat_word(mats).eq_window(su3_n(y, 48))
            assert ok and w >= 32


class TestSu3AB:
    def test_a_of_t(self, Q):
        t = parse_series("t", Q, "t")
        mats = su3_a_factor(t)
        ok, _ = mat_word(mats).eq_window(su3_a(t))
        assert ok

    def test_a_of_one_is_identity(self, Q):
        mats = su3_a_factor(LaurentSeries.one(Q, "t"))
        assert mat_word(mats).eq_window(identity(GROUP_SU3, Q, "t"))[0]

    def test_a_exact_over_dual_numbers(self):
        R = alg_make(0, [("e", 2)])
        lam = parse_series("1 + e", R, "t")
        prod = mat_word(su3_a_factor(lam))
        assert prod.entries == su3_a(lam).entries

    def test_b_of_one_is_identity(self, Q):
        mats = su3_b_factor(QuadExtElement.one(Q, "t"))
        assert mat_word(mats).eq_window(identity(GROUP_SU3, Q, "t"))[0]

    def test_b_of_pi_trace_zero_path(self, Q):
        pi = QuadExtElement.pi(Q, "t")
        mats = su3_b_factor(pi)
        assert len(mats) == 12  # 3 for n_y, 9 for the closing n_1
        ok, _ = mat_word(mats).eq_window(su3_torus(pi))
        assert ok

    def test_b_trace_unit_path(self, Q):
        y = QuadExtElement.one(Q, "t") + QuadExtElement.pi(Q, "t")
        mats = su3_b_factor(y, 48)
        assert len(mats) == 18
        ok, w = mat_word(mats).eq_window(su3_torus(y, 48))
        assert ok and w >= 32

    def test_b_rejects_nilpotent_trace(self):
        R = alg_make(0, [("e", 2)])
        y = parse_quad("1 + e | 0", R, "t")
        # trace = 2 + 2e is a unit: fine
        su3_b_factor(y, 16)
        bad = parse_quad("e | 1", R, "t")  # trace 2e nilpotent nonzero
        with pytest.raises(ConstraintViolation):
            su3_b_factor(bad, 16)


class TestSquareZero:
    def test_zero_gives_identity(self):
        R = alg_make(0, [("e", 2)])
        mats = su3_squarezero_torus_factor(QuadExtElement.zero(R, "t"))
        assert len(mats) == 4
        assert mat_word(mats).eq_window(identity(GROUP_SU3, R, "t"))[0]

    def test_e_pi(self):
        R = alg_make(0, [("e", 2)])
        x = parse_quad("0 | e", R, "t")
        prod = mat_word(su3_squarezero_torus_factor(x))
        assert prod.entries == squarezero_target(x).entries

    def test_sigma_fixed_parameter(self):
        R = alg_make(0, [("e", 2)])
        x = parse_quad("e*t | 0", R, "t")
        target = squarezero_target(x)
        assert repr(target.entries[1][1]) == "1 | 0"  # sigma(x) = x cancels
        prod = mat_word(su3_squarezero_torus_factor(x))
        assert prod.entries == target.entries

    def test_rejects_non_square_zero(self):
        R = alg_make(0, [("e", 3)])
        x = parse_quad("e | 0", R, "t")  # e^2 != 0 in k[e]/e^3
        with pytest.raises(ConstraintViolation):
            su3_squarezero_torus_factor(x)

    def test_all_factors_unipotent_with_corrective_last(self):
        R = alg_make(5, [("e", 2), ("d", 2)], ["e*d"])
        rng = random.Random(8)
        for _ in range(10):
            x = random_quad(rng, R, "t", -2, 2, in_max_ideal=True)
            mats = su3_squarezero_torus_factor(x)
            assert [m.subgroup for m in mats] == ["U+", "U-", "U+", "U-"]
            prod = mat_word(mats)
            assert prod.entries == squarezero_target(x).entries


class TestLifting:
    def test_canonical_representatives_reduce_back(self):
        R = alg_make(7, [("e", 2)])
        q = R.residue_map()
        rng = random.Random(31)
        k_pi = QuadExtElement.pi(q.target, "t")
        factors = su3_n_factor(k_pi, QuadExtElement.zero(q.target, "t"), 24)
        lifted = lift_factorization(factors, q, 24)
        for f, g in zip(lifted, factors):
            ok, _ = f.reduce(q).eq_window(g)
            assert ok
            assert f.subgroup == g.subgroup and f.note == g.note

    def test_field_fixed_point(self, Q):
        # lifting along the identity quotient of a field changes nothing
        q = Q.residue_map()
        pi = QuadExtElement.pi(Q, "t")
        factors = su3_n_factor(pi, QuadExtElement.zero(Q, "t"), 16)
        lifted = lift_factorization(factors, q, 16)
        for f, g in zip(lifted, factors):
            assert f.entries == g.entries

    def test_lifted_constraint_holds_exactly(self):
        R = alg_make(7, [("e", 3)])
        chain = square_zero_filtration(R)
        rng = random.Random(5)
        y = random_quad_unit(rng, chain.rings[-1], "t", -1, 1)
        factors = su3_b_factor(y, 48)
        for q in reversed(chain.maps):
            factors = lift_factorization(factors, q, 48)
        from looplab.groups import su3_uminus_params, su3_uplus_params

        for f in factors:
            u, w = (su3_uplus_params(f) if f.subgroup == "U+"
                    else su3_uminus_params(f))
            assert (w + w.sigma() - u * u.sigma()).is_zero()

    def test_untagged_factor_rejected(self, Q):
        q = Q.residue_map()
        with pytest.raises(LoopLabError):
            lift_factorization([identity(GROUP_SU3, Q, "t").with_tag("G")], q)


class TestArtinianInduction:
    def test_field_base_case(self, Q):
        pi = QuadExtElement.pi(Q, "t")
        assert len(factor_su3_torus_artinian(pi, 32)) == len(su3_b_factor(pi, 32))

    def test_dual_numbers(self):
        R = alg_make(0, [("e", 2)])
        y = parse_quad("1 | e", R, "t")  # 1 + e*pi
        factors = factor_su3_torus_artinian(y, 32)
        ok, w = mat_word(factors).eq_window(su3_torus(y, 32))
        assert ok
        blocks = {f.note.split(":")[0] for f in factors
                  if f.note.startswith("square-zero step")}
        assert len(blocks) == 1

    def test_cubic_two_blocks(self):
        R = alg_make(0, [("e", 3)])
        y = parse_quad("0 | 1 + e", R, "t")  # (1+e)*pi
        factors = factor_su3_torus_artinian(y, 64)
        ok, w = mat_word(factors).eq_window(su3_torus(y, 64))
        assert ok and w >= 32
        blocks = {f.note.split(":")[0] for f in factors
                  if f.note.startswith("square-zero step")}
        assert len(blocks) == 2

    def test_functoriality_reduce_factors(self):
        # reducing the factor list along the chain yields a factorization
        # of the reduced torus element
        R = alg_make(7, [("e", 3)])
        q = square_zero_filtration(R).maps[0]
        rng = random.Random(77)
        y = random_quad_unit(rng, R, "t", -1, 1)
        factors = factor_su3_torus_artinian(y, 96)
        reduced = [f.reduce(q) for f in factors]
        ok, w = mat_word(reduced).eq_window(su3_torus(y.reduce(q), 96))
        assert ok and w >= 32


class TestPipeline:
    def test_identity_certificate_is_empty(self, Q):
        cert = factor_loop_element(identity(GROUP_SL2, Q, "t"), "sl2")
        assert cert.factors == ()
        assert cert.translate.is_exact_identity()
        assert verify_certificate(cert).accepted

    def test_sl2_spec_example(self):
        R = alg_make(0, [("e", 2)])
        t = parse_series("t", R, "t")
        e = parse_series("e", R, "t")
        x = mat_mul(sl2_torus(t, 96), sl2_uplus(e))
        cert = factor_loop_element(x, "sl2", prec=32)
        assert cert.translate.is_exact_identity()
        assert len(cert.factors) == 8  # L, six torus factors, U
        assert cert.factors[0].element.is_exact_identity()
        assert repr(cert.factors[-1].element.entries[0][1]) == "e"
        assert verify_certificate(cert).accepted

    def test_res_sl2_certificate(self):
        R = alg_make(7, [("e", 2)])
        rng = random.Random(12)
        x = random_word(rng, GROUP_SL2, R, "u", 4, prec=96)
        cert = factor_loop_element(x, GROUP_RES_SL2, prec=32, ext_degree=3)
        assert cert.ext_degree == 3 and cert.variable == "u"
        assert verify_certificate(cert).accepted

    def test_su3_random_word_certificate(self):
        R = alg_make(7, [("e", 2)])
        rng = random.Random(3)
        x = random_word(rng, GROUP_SU3, R, "t", 6, prec=96)
        cert = factor_loop_element(x, "su3", prec=32)
        report = verify_certificate(cert)
        assert report.accepted

    def test_determinism(self):
        R = alg_make(7, [("e", 2)])
        rng1, rng2 = random.Random(5), random.Random(5)
        x1 = random_word(rng1, GROUP_SU3, R, "t", 4, prec=96)
        x2 = random_word(rng2, GROUP_SU3, R, "t", 4, prec=96)
        c1 = factor_loop_element(x1, "su3", prec=32)
        c2 = factor_loop_element(x2, "su3", prec=32)
        assert json.dumps(c1.document(), sort_keys=True) == \
            json.dumps(c2.document(), sort_keys=True)

    def test_translate_used_for_weyl_stratum(self, Q):
        from looplab import sl2_weyl

        cert = factor_loop_element(sl2_weyl(Q, "t"), "sl2", prec=16)
        assert not cert.translate.is_exact_identity()
        assert verify_certificate(cert).accepted

    def test_membership_enforced(self, Q):
        t = parse_series("t", Q, "t")
        zero = LaurentSeries.zero(Q, "t")
        from looplab.groups import GroupElement

        bad = GroupElement(GROUP_SL2, [[t, zero], [zero, t]])  # det t^2
        with pytest.raises(ConstraintViolation):
            factor_loop_element(bad, "sl2")


class TestVerification:
    def _cert(self):
        R = alg_make(7, [("e", 2)])
        rng = random.Random(21)
        x = random_word(rng, GROUP_SU3, R, "t", 5, prec=96)
        return factor_loop_element(x, "su3", prec=32)

    def test_round_trip_accepts(self):
        cert = self._cert()
        doc = json.loads(json.dumps(cert.document()))
        report = verify_certificate(doc)
        assert report.accepted
        # byte-exact document round trip
        again = certificate_from_document(doc).document()
        assert json.dumps(again, sort_keys=True) == json.dumps(doc, sort_keys=True)

    def test_mutation_near_precision_boundary_rejected(self):
        cert = self._cert()
        doc = json.loads(json.dumps(cert.document()))
        k = cert.precision - 2
        cell = doc["factors"][2]["matrix"][0][2]
        even, odd = cell.split(" | ")
        doc["factors"][2]["matrix"][0][2] = f"{even} + t^{k} | {odd}"
        doc["digest"] = certificate_digest(doc)  # force the math to catch it
        report = verify_certificate(doc)
        assert not report.accepted
        assert any("recomposition" in c.name or "sigma" in c.name or "w +" in c.name
                   for c in report.failures())

    def test_predicate_violation_located(self):
        cert = self._cert()
        doc = json.loads(json.dumps(cert.document()))
        # break the unipotent constraint of a factor: perturb w only
        for f in doc["factors"]:
            if f["tag"] == "U+":
                even, odd = f["matrix"][0][2].split(" | ")
                f["matrix"][0][2] = f"{even} + 1 | {odd}"
                break
        doc["digest"] = certificate_digest(doc)
        report = verify_certificate(doc)
        assert not report.accepted
        assert any("w + sigma(w)" in c.name for c in report.failures())

    def test_digest_tamper_detected(self):
        cert = self._cert()
        doc = json.loads(json.dumps(cert.document()))
        doc["digest"] = "sha256:" + "0" * 64
        report = verify_certificate(doc)
        assert not report.accepted
        assert "digest" in report.failures()[0].name

    def test_schema_violation_raises(self):
        from looplab import SchemaError

        cert = self._cert()
        doc = json.loads(json.dumps(cert.document()))
        doc["schema"] = "loop-factorization-certificate/999"
        with pytest.raises(SchemaError):
            verify_certificate(doc)
        doc2 = json.loads(json.dumps(cert.document()))
        del doc2["precision"]
        with pytest.raises(SchemaError):
            verify_certificate(doc2)

    def test_structural_zero_mutation_rejected(self):
        cert = self._cert()
        doc = json.loads(json.dumps(cert.document()))
        target = next(f for f in doc["factors"] if f["tag"] == "U-")
        target["matrix"][0][2] = "t | 0"  # structurally an exact zero
        doc["digest"] = certificate_digest(doc)
        report = verify_certificate(doc)
        assert not report.accepted
        assert any("shape" in c.name for c in report.failures())
