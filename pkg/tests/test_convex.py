import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from tropical.convex import (Polytope, SublinearFunction, canonicalize, hull_union,
                             is_extreme_set, minkowski_sum, probe_directions,
                             random_dyadic_polytope, semiring_law_check, subdifferential_at_origin,
                             support_equal, support_function)
from tropical.errors import DimMismatch, DimensionUnsupported, LawViolation

TRIANGLE = Polytope([[0, 0], [1, 0], [0, 1]])


def brute_minkowski(p, q):
    pts = np.array([a + b for a in p.vertices for b in q.vertices])
    return Polytope(pts[ConvexHull(pts).vertices])


class TestCanonical:
    def test_ccw_from_lexmin(self):
        p = Polytope([[1, 1], [0, 1], [1, 0], [0, 0], [0.5, 0.5]])
        assert p.vertex_tuples() == [(0, 0), (1, 0), (1, 1), (0, 1)]

    def test_collinear_points_drop(self):
        p = Polytope([[0, 0], [2, 2], [1, 1], [3, 3]])
        assert p.vertex_tuples() == [(0, 0), (3, 3)]

    def test_duplicates_within_tolerance(self):
        p = Polytope([[0, 0], [1e-12, 0], [1, 0]])
        assert len(p) == 2

    def test_one_dimensional(self):
        assert Polytope([[3.0], [-1.0], [2.0]]).vertex_tuples() == [(-1,), (3,)]

    def test_idempotent(self, rng):
        for _ in range(20):
            p = random_dyadic_polytope(rng, 2, 8)
            np.testing.assert_array_equal(canonicalize(p.vertices), p.vertices)
            assert is_extreme_set(p)

    def test_three_dimensional_cube(self):
        pts = np.array([[i, j, k] for i in (0, 1) for j in (0, 1) for k in (0, 1)] + [[0.5, 0.5, 0.5]])
        p = Polytope(pts)
        assert len(p) == 8
        assert p.vertex_tuples()[0] == (0, 0, 0)

    def test_flat_in_three_dimensions(self):
        p = Polytope([[0, 0, 1], [1, 0, 1], [0, 1, 1], [0.25, 0.25, 1]])
        assert len(p) == 3

    def test_unsupported_dimension(self):
        with pytest.raises(DimensionUnsupported):
            Polytope(np.zeros((1, 4)))


class TestOperations:
    def test_identity(self):
        assert minkowski_sum(TRIANGLE, Polytope.origin(2)) == TRIANGLE

    def test_segments(self):
        s = Polytope([[0.0], [1.0]])
        assert minkowski_sum(s, s) == Polytope([[0.0], [2.0]])

    def test_triangle_doubles(self):
        assert minkowski_sum(TRIANGLE, TRIANGLE).vertex_tuples() == [(0, 0), (2, 0), (0, 2)]

    def test_hull_union(self):
        assert hull_union(TRIANGLE, TRIANGLE) == TRIANGLE
        assert hull_union(Polytope.point([0.0]), Polytope.point([1.0])) == Polytope([[0.0], [1.0]])

    def test_disjoint_triangles(self):
        other = Polytope([[3, 3], [4, 3], [3, 5]])
        pts = np.vstack([TRIANGLE.vertices, other.vertices])
        assert hull_union(TRIANGLE, other) == Polytope(pts[ConvexHull(pts).vertices])

    def test_minkowski_oracle(self, rng):
        for _ in range(30):
            p = random_dyadic_polytope(rng, 2, int(rng.integers(3, 7)))
            q = random_dyadic_polytope(rng, 2, int(rng.integers(3, 7)))
            if len(p) < 3 or len(q) < 3:
                continue
            assert minkowski_sum(p, q) == brute_minkowski(p, q)

    def test_vertex_count_bound(self, rng):
        p = random_dyadic_polytope(rng, 2, 6)
        q = random_dyadic_polytope(rng, 2, 6)
        assert len(minkowski_sum(p, q)) <= len(p) + len(q)

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            minkowski_sum(TRIANGLE, Polytope.point([0.0]))
        with pytest.raises(DimMismatch):
            support_function(TRIANGLE, [1.0])


class TestSupport:
    def test_examples(self):
        assert support_function(Polytope.point([2.0, -1.0]), [3.0, 4.0]) == 2.0
        assert support_function(Polytope([[0.0], [5.0]]), [1.0]) == 5.0
        assert support_function(TRIANGLE, [1.0, 1.0]) == 1.0

    def test_additive_and_max(self, rng):
        for _ in range(20):
            p = random_dyadic_polytope(rng, 2, 5)
            q = random_dyadic_polytope(rng, 2, 5)
            for d in probe_directions(2):
                assert support_function(minkowski_sum(p, q), d) == \
                    support_function(p, d) + support_function(q, d)
                assert support_function(hull_union(p, q), d) == \
                    max(support_function(p, d), support_function(q, d))

    def test_support_equality_procedure(self, rng):
        p = random_dyadic_polytope(rng, 2, 6)
        assert support_equal(p, Polytope(p.vertices[::-1]))
        assert not support_equal(p, minkowski_sum(p, Polytope.point([0.25, 0.0])))


class TestSublinear:
    def test_single_piece(self):
        assert subdifferential_at_origin(SublinearFunction([[1.0, 2.0]])) == Polytope.point([1, 2])

    def test_abs(self):
        p = SublinearFunction([[1.0], [-1.0]])
        sub = subdifferential_at_origin(p)
        assert sub == Polytope([[-1.0], [1.0]])
        for x in (-2.0, 0.5, 3.0):
            assert support_function(sub, [x]) == p([x]) == abs(x)

    def test_triangle(self):
        p = SublinearFunction([[0, 0], [1, 0], [0, 1]])
        assert subdifferential_at_origin(p) == TRIANGLE

    def test_homomorphism(self, rng):
        for _ in range(20):
            a = SublinearFunction(rng.integers(-8, 8, (4, 2)) / 4)
            b = SublinearFunction(rng.integers(-8, 8, (3, 2)) / 4)
            da, db = subdifferential_at_origin(a), subdifferential_at_origin(b)
            assert subdifferential_at_origin(a + b) == minkowski_sum(da, db)
            assert subdifferential_at_origin(a.maximum(b)) == hull_union(da, db)
            for d in probe_directions(2, 16):
                assert (a + b)(d) == a(d) + b(d)


class TestLaws:
    def test_random_triangles(self, rng):
        for _ in range(30):
            trip = [random_dyadic_polytope(rng, 2, 3) for _ in range(3)]
            report = semiring_law_check(*trip)
            assert len(report.laws) == 10

    def test_degenerate(self):
        point = Polytope.point([0.5, 0.25])
        seg = Polytope([[0, 0], [1, 1]])
        semiring_law_check(point, seg, TRIANGLE)
        semiring_law_check(seg, seg, point)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.sampled_from([1, 2, 3]))
    def test_laws_any_dimension(self, seed, dim):
        r = np.random.default_rng(seed)
        trip = [random_dyadic_polytope(r, dim, int(r.integers(1, 6))) for _ in range(3)]
        semiring_law_check(*trip)

    def test_violation_is_reported(self, monkeypatch):
        import tropical.convex as cx
        monkeypatch.setattr(cx, "hull_union", lambda p, q: p)
        with pytest.raises(LawViolation) as info:
            cx.semiring_law_check(TRIANGLE, Polytope.point([5.0, 5.0]), TRIANGLE)
        assert "commutative" in info.value.law
