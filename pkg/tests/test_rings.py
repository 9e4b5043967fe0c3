import random
from fractions import Fraction

import pytest

from looplab import (
    INDETERMINATE,
    NONUNIT,
    UNIT,
    ContextMismatch,
    IndeterminatePrecision,
    LaurentSeries,
    LoopLabError,
    NotAUnit,
    QuadExtElement,
    alg_make,
    invert_series,
    is_unit_series,
    quad_ops,
    reduce_series,
    series_arith,
    square_zero_filtration,
)
from looplab.literals import parse_series
from looplab.randgen import random_series, random_unit_series


def S(text, alg, var="t"):
    return parse_series(text, alg, var)


# -- algebras ----------------------------------------------------------------


class TestAlgMake:
    def test_dual_numbers_over_f7(self):
        R = alg_make(7, [("e", 2)])
        assert R.basis == ((0,), (1,))
        assert R.nilpotency == 2
        assert R.field.char == 7

    def test_cubic_over_q(self):
        R = alg_make(0, [("e", 3)])
        assert R.basis == ((0,), (1,), (2,))
        assert R.nilpotency == 3

    def test_two_variables_with_cross_relation(self):
        # basis by direct enumeration: monomials e^i d^j with i,j < 2 not
        # divisible by e*d, i.e. 1, e, d
        R = alg_make(5, [("e", 2), ("d", 2)], ["e*d"])
        assert set(R.basis) == {(0, 0), (1, 0), (0, 1)}
        assert R.nilpotency == 2

    def test_nonprime_characteristic_rejected(self):
        with pytest.raises(LoopLabError):
            alg_make(6, [("e", 2)])

    def test_missing_pure_power_rejected(self):
        with pytest.raises(LoopLabError):
            alg_make(5, [("e", 0)])

    def test_unit_iff_constant_term_nonzero(self):
        R = alg_make(5, [("e", 2), ("d", 2)], ["e*d"])
        assert R.element({(0, 0): 3, (1, 0): 1}).is_unit()
        assert not R.element({(1, 0): 1, (0, 1): 4}).is_unit()

    def test_element_inverse_round_trip(self):
        R = alg_make(7, [("e", 4)])
        rng = random.Random(11)
        for _ in range(50):
            x = R.element({(i,): rng.randrange(7) for i in range(4)})
            if not x.is_unit():
                continue
            assert x * x.inverse() == R.one

    def test_nilpotency_bound_is_sharp(self):
        R = alg_make(0, [("e", 3)])
        e = R.gen("e")
        assert e * e != R.zero
        assert e * e * e == R.zero


# -- series arithmetic ---------------------------------------------------------


class TestSeriesArith:
    def test_add_exact(self):
        Q = alg_make(0, [])
        f = S("1 + t", Q)
        g = S("t^-1", Q)
        h = series_arith(f, g, "add")
        assert repr(h) == "t^-1 + 1 + t"
        assert h.exact

    def test_nilpotent_product_collapses(self):
        R = alg_make(0, [("e", 2)])
        f = S("e + t", R)
        g = S("t^-1 - e*t^-2", R)
        assert repr(series_arith(f, g, "mul")) == "1"

    def test_mul_precision_rule(self):
        Q = alg_make(0, [])
        f = S("1 + t + O(t^8)", Q)
        g = S("1 + 2*t + O(t^8)", Q)
        h = f * g
        assert h.prec == 8 and not h.exact

    def test_mul_precision_rule_with_lows(self):
        Q = alg_make(0, [])
        f = S("t^-2 + O(t^5)", Q)
        g = S("t^3 + O(t^7)", Q)
        # min(prec_f + low_g, prec_g + low_f) = min(5+3, 7-2) = 5
        assert (f * g).prec == 5

    def test_mismatched_contexts_rejected(self):
        Q = alg_make(0, [])
        R = alg_make(7, [("e", 2)])
        with pytest.raises(ContextMismatch):
            series_arith(S("t", Q), S("t", R), "add")
        with pytest.raises(ContextMismatch):
            series_arith(S("t", Q), parse_series("u", Q, "u"), "mul")

    def test_exact_flag_propagation(self):
        Q = alg_make(0, [])
        assert (S("1 + t", Q) * S("1 - t", Q)).exact
        assert not (S("1 + t", Q) * S("1 + O(t^9)", Q)).exact

    def test_precision_rule_soundness_random(self):
        # truncating inputs then multiplying agrees with multiplying exactly
        # then truncating, on the guaranteed window
        rng = random.Random(5)
        R = alg_make(5, [("e", 2)])
        for _ in range(120):
            f = random_series(rng, R, "t", -3, 3)
            g = random_series(rng, R, "t", -3, 3)
            P = rng.randint(2, 6)
            capped = f.truncated(P) * g.truncated(P)
            full = (f * g).truncated(capped.prec) if not capped.exact else f * g
            ok, _ = capped.eq_window(full)
            assert ok


# -- units and inversion ---------------------------------------------------------


class TestUnitsLemma:
    def test_unit_with_nilpotent_low_coefficient(self):
        R = alg_make(0, [("e", 2)])
        assert is_unit_series(S("e + t", R)) == UNIT

    def test_all_coefficients_nilpotent(self):
        R = alg_make(0, [("e", 2)])
        assert is_unit_series(S("e + e*t", R)) == NONUNIT

    def test_unknown_tail(self):
        R = alg_make(0, [("e", 2)])
        assert is_unit_series(S("e + O(t^5)", R)) == INDETERMINATE

    def test_inverse_of_nilpotent_plus_t(self):
        R = alg_make(0, [("e", 2)])
        f = S("e + t", R)
        g = invert_series(f)
        assert g == S("t^-1 - e*t^-2", R)
        assert g.exact

    def test_inverse_of_one(self):
        Q = alg_make(0, [])
        assert invert_series(S("1", Q)) == S("1", Q)

    def test_geometric_inverse_truncates(self):
        Q = alg_make(0, [])
        assert repr(invert_series(S("1 + t", Q), 4)) == "1 - t + t^2 - t^3 + O(t^4)"

    def test_inverse_rejects_nonunit_and_indeterminate(self):
        R = alg_make(0, [("e", 2)])
        with pytest.raises(NotAUnit):
            invert_series(S("e", R))
        with pytest.raises(IndeterminatePrecision):
            invert_series(S("e + O(t^4)", R))

    @pytest.mark.parametrize("ring", ["Q", "Fp(5)", "Q[e]/(e^2)", "Fp(7)[e]/(e^3)",
                                      "Fp(5)[e,d]/(e^2,d^2,e*d)"])
    def test_inverse_multiplies_back_to_one(self, ring):
        from looplab.literals import parse_ring

        alg = parse_ring(ring)
        rng = random.Random(ring)
        for i in range(200):
            f = random_unit_series(rng, alg, "t", -3, 3, mixed=bool(i % 2))
            g = invert_series(f, 32)
            prod = f * g
            ok, window = prod.eq_window(LaurentSeries.one(alg, "t"))
            assert ok and (window >= 24 or window == float("inf"))


# -- reduction and the square-zero chain ------------------------------------------


class TestReduction:
    def test_drop_nilpotent_part(self):
        R = alg_make(0, [("e", 2)])
        q = R.residue_map()
        f = S("1 + e*t", R)
        assert repr(reduce_series(f, q)) == "1"
        assert repr(reduce_series(S("e + t", R), q)) == "t"

    def test_reduce_is_a_ring_map(self):
        rng = random.Random(17)
        R = alg_make(7, [("e", 3)])
        chain = square_zero_filtration(R)
        q = chain.maps[0]
        for _ in range(100):
            f = random_series(rng, R, "t", -2, 2)
            g = random_series(rng, R, "t", -2, 2)
            assert reduce_series(f + g, q) == reduce_series(f, q) + reduce_series(g, q)
            assert reduce_series(f * g, q) == reduce_series(f, q) * reduce_series(g, q)

    def test_reduce_preserves_precision_and_exactness(self):
        R = alg_make(0, [("e", 2)])
        q = R.residue_map()
        f = S("1 + e*t + O(t^9)", R)
        rf = reduce_series(f, q)
        assert rf.prec == 9 and not rf.exact

    def test_filtration_cubic(self):
        R = alg_make(0, [("e", 3)])
        chain = square_zero_filtration(R)
        assert len(chain) == 3
        assert [r.dim for r in chain.rings] == [3, 2, 1]

    def test_filtration_field(self):
        assert len(square_zero_filtration(alg_make(0, []))) == 1

    def test_filtration_flat_square_zero(self):
        R = alg_make(0, [("e", 2), ("d", 2)], ["e*d"])
        chain = square_zero_filtration(R)
        assert len(chain) == 2  # m^2 = 0 already

    def test_kernels_square_to_zero(self):
        for ring_args in [(0, [("e", 4)], []),
                          (5, [("e", 2), ("d", 3)], []),
                          (7, [("e", 2), ("d", 2)], ["e*d"])]:
            R = alg_make(*ring_args)
            chain = square_zero_filtration(R)
            for ring, q in zip(chain.rings, chain.maps):
                kernel = [ring.element({mo: 1}) for mo in q.kernel_monomials]
                for a in kernel:
                    for b in kernel:
                        assert not (a * b), (ring, a, b)

    def test_section_then_reduce_is_identity(self):
        R = alg_make(7, [("e", 3)])
        q = square_zero_filtration(R).maps[0]
        rng = random.Random(3)
        for _ in range(50):
            x = q.target.element({(i,): rng.randrange(7) for i in range(q.target.dim)})
            assert q.apply(q.section(x)) == x


# -- the quadratic extension ---------------------------------------------------------


class TestQuadExt:
    def setup_method(self):
        self.Q = alg_make(0, [])
        self.pi = QuadExtElement.pi(self.Q, "t")

    def test_trace_of_pi_is_zero(self):
        assert quad_ops(self.pi, "trace").is_zero()

    def test_norm_of_pi(self):
        assert repr(quad_ops(self.pi, "norm")) == "-t"

    def test_trace_is_twice_even_part(self):
        x = QuadExtElement(S("3 + t", self.Q), S("t^-1", self.Q))
        assert quad_ops(x, "trace") == S("6 + 2*t", self.Q)

    def test_sigma_is_an_involution(self):
        x = QuadExtElement(S("1 + t", self.Q), S("2 - t^2", self.Q))
        assert quad_ops(quad_ops(x, "sigma"), "sigma") == x

    def test_trace_and_norm_are_sigma_fixed(self):
        rng = random.Random(23)
        for _ in range(60):
            x = QuadExtElement(random_series(rng, self.Q, "t", -2, 2),
                               random_series(rng, self.Q, "t", -2, 2))
            y = QuadExtElement(random_series(rng, self.Q, "t", -2, 2),
                               random_series(rng, self.Q, "t", -2, 2))
            # sigma-fixed means zero odd part once embedded back
            assert (x + x.sigma()).odd.is_zero()
            assert (x * x.sigma()).odd.is_zero()
            # additivity of trace, multiplicativity of norm
            assert (x + y).trace() == x.trace() + y.trace()
            assert (x * y).norm() == x.norm() * y.norm()

    def test_inverse(self):
        one = QuadExtElement.one(self.Q, "t")
        y = one + self.pi
        assert (y * quad_ops(y, "inv", prec=16)).is_one()

    def test_inverse_requires_unit_norm(self):
        R = alg_make(0, [("e", 2)])
        nil = QuadExtElement(S("e", R), S("e", R))
        with pytest.raises(NotAUnit):
            quad_ops(nil, "inv")

    def test_char_two_rejected(self):
        R2 = alg_make(2, [("e", 2)])
        with pytest.raises(LoopLabError):
            QuadExtElement.pi(R2, "t")

    def test_pi_squared_is_t(self):
        assert (self.pi * self.pi).even == S("t", self.Q)
        assert (self.pi * self.pi).odd.is_zero()


class TestEqualityWindow:
    def test_window_reported(self):
        Q = alg_make(0, [])
        f = S("1 + t + O(t^5)", Q)
        g = S("1 + t + O(t^9)", Q)
        ok, window = f.eq_window(g)
        assert ok and window == 5

    def test_difference_beyond_window_invisible(self):
        Q = alg_make(0, [])
        f = S("1 + O(t^3)", Q)
        g = S("1 + t^4 + O(t^6)", Q)
        ok, window = f.eq_window(g)
        assert ok and window == 3
