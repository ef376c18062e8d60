import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropical.convex import Polytope, hull_union, minkowski_sum, probe_directions, support_function
from tropical.dequantize import (GeneralizedPolynomial, check_hom_product, check_hom_sum,
                                 dequantize_callback, dequantize_h, eval_poly, has_tropical_tie,
                                 in_general_position, newton_set, random_polynomial, tropicalize)
from tropical.errors import (DimensionUnsupported, NonpositiveArgument, NotInGeneralPosition,
                             ZeroValue)

P = GeneralizedPolynomial
LINE = P([(1, (1, 0)), (1, (0, 1)), (1, (0, 0))])


class TestPolynomial:
    def test_merge_and_drop(self):
        f = P([(1, (1,)), (2, (1,)), (1, (0,)), (-1, (0,))])
        assert f.terms == [(3, (1.0,))]

    def test_product_and_sum(self):
        x = P.monomial(1, (1,))
        one = P.constant(1)
        assert (x + one) * (x + one) == P([(1, (2,)), (2, (1,)), (1, (0,))])

    def test_dimension_checks(self):
        with pytest.raises(ValueError):
            P([(1, (1, 0)), (1, (1,))])
        with pytest.raises(ValueError):
            P.monomial(1, (1,)) + LINE

    @pytest.mark.parametrize("f, z, want", [
        (P.constant(1, 2), (0.3, 7.0), 1.0),
        (LINE, (1.0, 1.0), 3.0),
        (P.monomial(2, (1.5,)), (4.0,), 16.0),
    ])
    def test_eval(self, f, z, want):
        assert eval_poly(f, z) == want

    def test_eval_nonpositive(self):
        with pytest.raises(NonpositiveArgument):
            LINE((0.0, 1.0))

    def test_complex_eval(self):
        f = P([(1j, (1,)), (1, (0,))])
        assert f((2.0,)) == 1 + 2j


class TestDequantize:
    @settings(max_examples=100)
    @given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0.5, 3.0), st.floats(0.01, 2.0),
           st.floats(-2, 2), st.floats(-2, 2))
    def test_monomial_closed_form(self, d1, d2, a, h, x1, x2):
        f = P.monomial(a, (d1, d2))
        want = d1 * x1 + d2 * x2 + h * math.log(a)
        assert dequantize_h(f, (x1, x2), h) == pytest.approx(want, abs=1e-12)

    def test_constant(self):
        assert dequantize_h(P.constant(5.0), (0.7,), 0.3) == pytest.approx(0.3 * math.log(5))

    def test_line_near_limit(self):
        v = dequantize_h(LINE, (1, 2), 0.1)
        assert 2 <= v <= 2 + 0.1 * math.log(3)

    def test_small_h_does_not_overflow(self):
        v = dequantize_h(LINE, (50.0, 20.0), 1e-3)
        assert v == pytest.approx(50.0, abs=1e-9)

    def test_cancellation(self):
        f = P([(1, (1,)), (-1, (0,))])
        with pytest.raises(ZeroValue):
            dequantize_h(f, (0.0,), 0.5)

    def test_complex_phases(self):
        f = P([(1j, (1,)), (1, (0,))])
        v = dequantize_h(f, (0.0,), 1.0)
        assert v == pytest.approx(0.5 * math.log(2), abs=1e-15)

    def test_callback(self):
        # log(1 + z) is asymptotically polynomial; its dequantization tends to 0 for x > 0
        v = dequantize_callback(lambda z: np.log1p(z[0]), np.array([1.0]), 0.01)
        assert abs(v) < 0.05
        with pytest.raises(ZeroValue):
            dequantize_callback(lambda z: 0.0, np.array([1.0]), 0.1)


class TestTropicalize:
    def test_monomial_is_linear(self):
        t = tropicalize(P.monomial(7.0, (2, -1)))
        assert t((1.5, 2.0)) == 1.0

    def test_line(self, rng):
        t = tropicalize(LINE)
        for x in rng.uniform(-3, 3, (20, 2)):
            assert t(x) == max(x[0], x[1], 0.0)
            assert dequantize_h(LINE, x, 1e-3) == pytest.approx(t(x), abs=1e-3 * math.log(3))

    def test_constant(self):
        assert tropicalize(P.constant(4.0, 2))((3.0, -1.0)) == 0.0

    def test_constants_flag(self):
        t = tropicalize(P([(math.e, (1,)), (1, (0,))]), constants=True)
        assert t.constants == (0.0, 1.0)


class TestNewton:
    def test_line(self):
        assert newton_set(LINE).vertex_tuples() == [(0, 0), (1, 0), (0, 1)]

    def test_segment(self):
        f = P([(2, (5,)), (-1, (3,)), (4, (0,))])
        assert newton_set(f).vertex_tuples() == [(0,), (5,)]

    def test_monomial(self):
        assert newton_set(P.monomial(3, (2, 1))).vertex_tuples() == [(2, 1)]

    def test_too_many_dims(self):
        with pytest.raises(DimensionUnsupported):
            newton_set(P.monomial(1, (1, 1, 1, 1)))

    def test_support_identity(self, rng):
        dirs = probe_directions(2, 64)
        for _ in range(30):
            f = random_polynomial(rng, 2, int(rng.integers(1, 8)), 6)
            t, n = tropicalize(f), newton_set(f)
            for d in dirs:
                assert t(d) == support_function(n, d)

    def test_three_dimensional(self, rng):
        f = random_polynomial(rng, 3, 12, 4)
        n = newton_set(f)
        for d in probe_directions(3, 32):
            assert tropicalize(f)(d) == support_function(n, d)

    def test_product_and_sum_rules(self, rng):
        for _ in range(30):
            f = random_polynomial(rng, 2, 5, 5)
            g = random_polynomial(rng, 2, 5, 5)
            assert newton_set(f * g) == minkowski_sum(newton_set(f), newton_set(g))
            assert newton_set(f + g) == hull_union(newton_set(f), newton_set(g))

    def test_sum_rule_can_fail_under_cancellation(self):
        f = P([(1, (2,)), (1, (0,))])
        g = P([(-1, (2,)), (1, (1,))])
        assert newton_set(f + g) != hull_union(newton_set(f), newton_set(g))

    @pytest.mark.parametrize("n, m", [(3, 5), (4, 4), (0, 2)])
    def test_degree_semantics(self, rng, n, m):
        f = P([(float(c), (k,)) for k, c in enumerate(rng.uniform(1, 2, n + 1))])
        g = P([(float(c), (k,)) for k, c in enumerate(rng.uniform(1, 2, m + 1))])
        assert newton_set(f * g) == Polytope([[0.0], [float(n + m)]])
        assert newton_set(f + g) == Polytope([[0.0], [float(max(n, m))]])


class TestTheorems:
    def test_product_monomials(self):
        x = P.monomial(1, (1,))
        rep = check_hom_product(x, x, [((0.3,), 0.5), ((-2.0,), 0.01)])
        assert rep.max_deviation <= 1e-12 and rep.ok

    def test_product_random(self, rng):
        for _ in range(10):
            f = random_polynomial(rng, 2, 4, 4)
            g = random_polynomial(rng, 2, 4, 4)
            samples = [(rng.uniform(-2, 2, 2), float(rng.uniform(0.01, 1))) for _ in range(20)]
            assert check_hom_product(f, g, samples).ok

    def test_sum_simple(self):
        x = P.monomial(1, (1, 0))
        y = P.monomial(1, (0, 1))
        hs = [2.0 ** -k for k in range(11)]
        rep = check_hom_sum(x, y, (1, 2), hs)
        assert rep.hypothesis == "nonnegative" and rep.ok

    def test_sum_saturates_when_equal(self):
        hs = [1.0, 0.5, 0.25]
        rep = check_hom_sum(LINE, LINE, (0.4, -1.0), hs)
        np.testing.assert_allclose(rep.gaps, [h * math.log(2) for h in hs], rtol=1e-12)

    def test_sum_general_position(self):
        f = P.monomial(1, (1,))
        g = P([(-1, (1,)), (1e-3, (0,))])
        hs = [2.0 ** -k for k in range(11)]
        rep = check_hom_sum(f, g, (-1.0,), hs)
        assert rep.hypothesis == "general_position"
        assert rep.gaps[-1] < 1e-6

    def test_sum_gap_below_rounding_is_a_tie(self):
        # one side dominates by about 4.8, so the true gap underflows to rounding noise
        f = P([(1.7671578090142022, (3, 1)), (1.171139603999733, (4, 2)), (1.5786603186388692, (5, 3))])
        g = P.constant(1.3953019990820583, 2)
        hs = [2.0 ** -k for k in range(11)]
        rep = check_hom_sum(f, g, (1.38645328, -0.71205415), hs)
        assert rep.within_bound and rep.decreasing
        assert max(rep.gaps[3:]) < 1e-14

    def test_sum_rejects_ties(self):
        f = P.monomial(1, (1,))
        g = P([(-1, (1,)), (1, (0,))])
        with pytest.raises(NotInGeneralPosition):
            check_hom_sum(f, g, (1.0,), [1.0])

    def test_general_position_helpers(self):
        assert in_general_position(P.monomial(1, (1,)), P.constant(1), (0.5,))
        assert not in_general_position(P.monomial(1, (1,)), P.constant(1), (0.0,))
        assert has_tropical_tie(LINE, (0.0, 0.0))
        assert not has_tropical_tie(LINE, (1.0, 2.0))
