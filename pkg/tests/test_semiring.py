import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropical.errors import Divergent, OrderUndefined
from tropical.semiring import (BOTTOM, MAXPLUS, MINPLUS, TOP, add, check_axioms,
                               dequantized_add_limit_gap, leq, mul, parse_semiring,
                               random_scalars, scalar_star, subtropical)

dyadic = st.integers(-8000, 8000).map(lambda k: k / 8.0)
element = st.one_of(dyadic, st.just(BOTTOM))


class TestScalarOps:
    def test_maxplus_add(self):
        assert add(3, 5, MAXPLUS) == 5

    def test_bottom_is_neutral(self):
        assert add(2.5, BOTTOM, MAXPLUS) == 2.5
        assert add(BOTTOM, 2.5, MINPLUS) == 2.5

    def test_subtropical_add_of_zeros(self):
        assert add(0, 0, subtropical(1.0)) == pytest.approx(math.log(2), abs=1e-15)

    def test_mul(self):
        assert mul(3, 5, MAXPLUS) == 8
        assert mul(BOTTOM, 7, MAXPLUS) is BOTTOM
        assert mul(-2, 2, MINPLUS) == 0

    def test_bottom_times_top_is_bottom(self):
        for s in (MAXPLUS, MINPLUS, subtropical(0.5)):
            assert s.mul(BOTTOM, TOP) is BOTTOM
            assert s.mul(TOP, 3.0) is TOP
            assert s.mul(BOTTOM, BOTTOM) is BOTTOM

    def test_infinities_are_read_per_semiring(self):
        assert MAXPLUS.coerce(-math.inf) is BOTTOM
        assert MINPLUS.coerce(math.inf) is BOTTOM
        assert MINPLUS.coerce(-math.inf) is TOP

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            MAXPLUS.coerce(float("nan"))

    def test_leq(self):
        assert leq(3, 5, MAXPLUS)
        assert leq(BOTTOM, -1e300, MAXPLUS)
        assert leq(5, 3, MINPLUS)
        assert not leq(3, 5, MINPLUS)

    def test_leq_rejects_subtropical(self):
        with pytest.raises(OrderUndefined):
            leq(1, 2, subtropical(0.1))

    @pytest.mark.parametrize("a, expected", [(-2, 0.0), (0, 0.0), (BOTTOM, 0.0)])
    def test_star_converges(self, a, expected):
        assert scalar_star(a, MAXPLUS) == expected

    def test_star_diverges(self):
        with pytest.raises(Divergent):
            scalar_star(1, MAXPLUS)
        with pytest.raises(Divergent):
            scalar_star(-1, MINPLUS)
        assert scalar_star(1, MINPLUS) == 0.0


class TestParse:
    @pytest.mark.parametrize("text, expected", [
        ("maxplus", MAXPLUS), ("MinPlus", MINPLUS), ("subtropical:0.25", subtropical(0.25)),
    ])
    def test_round_trip(self, text, expected):
        s = parse_semiring(text)
        assert s == expected
        assert parse_semiring(str(s)) == s

    @pytest.mark.parametrize("bad", ["tropical", "subtropical:-1", "subtropical:0"])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_semiring(bad)


class TestDeformation:
    @pytest.mark.parametrize("u, v, h, expected", [
        (0, 0, 1.0, math.log(2)),
        (3, 3, 0.5, 0.5 * math.log(2)),
    ])
    def test_known_gaps(self, u, v, h, expected):
        assert dequantized_add_limit_gap(u, v, h) == pytest.approx(expected, rel=1e-15)

    def test_far_apart(self):
        assert 0 <= dequantized_add_limit_gap(0, 10, 0.01) <= 0.01 * math.log(2)

    def test_no_overflow_for_small_h(self):
        s = subtropical(1e-3)
        assert s.add(1000.0, 999.0) == pytest.approx(1000.0, abs=1e-12)

    def test_matches_direct_formula(self):
        h = 0.7
        u, v = 0.3, -1.1
        direct = h * math.log(math.exp(u / h) + math.exp(v / h))
        assert subtropical(h).add(u, v) == pytest.approx(direct, rel=1e-14)

    @given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6), st.floats(1e-6, 1e3))
    def test_bound(self, u, v, h):
        g = dequantized_add_limit_gap(u, v, h)
        assert 0 <= g <= h * math.log(2)

    def test_array_matches_scalar(self, rng):
        s = subtropical(0.3)
        a = rng.normal(size=50)
        b = rng.normal(size=50)
        got = s.add_arrays(a, b)
        want = [s.add(float(x), float(y)) for x, y in zip(a, b)]
        np.testing.assert_allclose(got, want, rtol=1e-15)


class TestAxioms:
    @settings(max_examples=300)
    @given(element, element, element)
    def test_idempotent_laws_exact(self, a, b, c):
        for s in (MAXPLUS, MINPLUS):
            report = check_axioms(s, [(a, b, c)])
            assert report.ok, report.failures

    @settings(max_examples=300)
    @given(element, element, element, st.sampled_from([1.0, 0.1, 0.01]))
    def test_subtropical_laws(self, a, b, c, h):
        assert check_axioms(subtropical(h), [(a, b, c)]).ok

    @given(dyadic, dyadic)
    def test_minplus_is_negated_maxplus(self, a, b):
        assert -MAXPLUS.add(-a, -b) == MINPLUS.add(a, b)

    @given(dyadic, dyadic, dyadic)
    def test_order_is_partial_order(self, a, b, c):
        for s in (MAXPLUS, MINPLUS):
            assert s.leq(a, a)
            if s.leq(a, b) and s.leq(b, a):
                assert a == b
            if s.leq(a, b) and s.leq(b, c):
                assert s.leq(a, c)
            j = s.add(a, b)
            assert s.leq(a, j) and s.leq(b, j)

    def test_random_scalars_are_dyadic(self, rng):
        vals = random_scalars(rng, 1000)
        finite = [v for v in vals if v is not BOTTOM]
        assert all(v * 8 == int(v * 8) for v in finite)
        assert len(finite) < 1000

    def test_report_counts_samples(self):
        report = check_axioms(MAXPLUS, [(1.0, 2.0, 3.0)] * 5)
        assert report.samples == 5 and report.ok


class TestArrays:
    def test_masked_product_never_nan(self):
        a = np.array([-math.inf, 1.0, math.inf])
        b = np.array([math.inf, -math.inf, 2.0])
        out = MAXPLUS.mul_arrays(a, b)
        assert not np.isnan(out).any()
        np.testing.assert_array_equal(out, [-math.inf, -math.inf, math.inf])

    def test_sum_reduce(self):
        a = np.array([[1.0, -math.inf], [3.0, 2.0]])
        np.testing.assert_array_equal(MAXPLUS.sum_reduce(a, axis=1), [1.0, 3.0])
        assert MINPLUS.sum_reduce(a) == -math.inf
        assert MAXPLUS.sum_reduce(np.array([])) == -math.inf
        h = 0.5
        got = subtropical(h).sum_reduce(np.array([0.0, 0.0, 0.0]))
        assert got == pytest.approx(h * math.log(3), rel=1e-15)
