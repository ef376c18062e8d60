import math

import numpy as np
import pytest

from tropical.amoeba import (RESIDUAL_TOL, PlaneCurve, _fiber_polys, _fiber_roots, deform,
                             hausdorff_distance, in_line_amoeba, sample_amoeba, sample_curve,
                             tropical_curve)
from tropical.dequantize import GeneralizedPolynomial as P
from tropical.errors import DegenerateCurve, EmptyWindow

LINE = P([(1, (1, 0)), (1, (0, 1)), (1, (0, 0))])
CONIC = P([(1, (1, 1)), (1, (1, 0)), (1, (0, 1)), (1, (0, 0))])
H_SEQUENCE = [1.0, 0.5, 0.25, 0.1, 0.05]


def tie_oracle(f, point, tol=1e-9):
    """At least two terms of max(d·X + log|a|) attain the maximum at ``point``."""
    vals = sorted((float(np.dot(d, point)) + math.log(abs(a)) for a, d in f.terms), reverse=True)
    return vals[0] - vals[1] <= tol


class TestPlaneCurve:
    def test_deform_identity(self):
        assert deform(PlaneCurve(LINE), 1.0).poly == LINE

    @pytest.mark.parametrize("h", [1.0, 0.3, 0.01])
    def test_unit_coefficients_fixed(self, h):
        f = P([(1, (1, 0)), (-1, (0, 1)), (1, (0, 0))])
        assert deform(PlaneCurve(f), h).poly == f

    def test_power(self):
        f = P([(1, (1, 0)), (1, (0, 1)), (2, (0, 0))])
        assert sorted(deform(PlaneCurve(f), 0.5).coefficients.tolist()) == [1.0, 1.0, 4.0]

    def test_sign_kept(self):
        f = P([(-2, (1, 0)), (1, (0, 0))])
        assert deform(PlaneCurve(f), 0.5).coefficients.min() == -4.0

    def test_rejects(self):
        with pytest.raises(DegenerateCurve):
            PlaneCurve(P.monomial(3, (1, 2)))
        with pytest.raises(ValueError):
            PlaneCurve(P([(1, (0.5, 0)), (1, (0, 0))]))
        with pytest.raises(ValueError):
            PlaneCurve(P([(1, (1,)), (1, (0,))]))
        with pytest.raises(ValueError):
            PlaneCurve(P([(1j, (1, 0)), (1, (0, 0))]))


class TestSampling:
    def test_direct_root(self):
        # x = -1/2 on x + y + 1 = 0 forces y = -1/2
        f = PlaneCurve(LINE)
        rows, roots = _fiber_roots(_fiber_polys(f.coefficients, f.exponents, np.array([-0.5 + 0j]), 0))
        assert rows.tolist() == [0]
        assert roots[0] == pytest.approx(-0.5, abs=1e-15)
        log_point = (math.log(0.5), math.log(abs(roots[0])))
        assert log_point == pytest.approx((-math.log(2), -math.log(2)))
        assert in_line_amoeba(log_point)

    @pytest.mark.parametrize("h", H_SEQUENCE)
    def test_line_points_in_amoeba(self, h):
        s = sample_amoeba(LINE, h, 60, n_angles=16)
        assert len(s.points) > 0
        assert np.all(s.residuals < RESIDUAL_TOL)
        if h == 1.0:
            assert all(in_line_amoeba(p, 1e-6) for p in s.points)
        else:
            # Log_h of the amoeba of x + y + c with c = 1 is the h-scaled unit amoeba
            assert all(in_line_amoeba(p / h, 1e-6) for p in s.points)

    def test_points_outside_line_amoeba_exist(self):
        assert not in_line_amoeba((2.0, -2.0))
        assert in_line_amoeba((0.0, 0.0))

    def test_deterministic(self):
        a = sample_amoeba(CONIC, 0.5, 20, n_angles=8)
        b = sample_amoeba(CONIC, 0.5, 20, n_angles=8)
        np.testing.assert_array_equal(a.points, b.points)

    def test_higher_degree(self, rng):
        f = P([(float(rng.uniform(0.5, 2)), (i, j)) for i in range(4) for j in range(4 - i)])
        s = sample_amoeba(f, 0.25, 40, n_angles=16)
        assert np.all(s.residuals < RESIDUAL_TOL)

    def test_rejects_arguments(self):
        with pytest.raises(ValueError):
            sample_amoeba(LINE, 0.0, 10)
        with pytest.raises(ValueError):
            sample_amoeba(LINE, 1.0, 0)


class TestTropicalCurve:
    def test_tropical_line(self):
        c = tropical_curve(LINE)
        assert c.vertices == ((0.0, 0.0),)
        assert sorted(d for d, _ in c.outgoing((0.0, 0.0))) == [(-1, 0), (0, -1), (1, 1)]
        assert all(e.kind == "ray" for e in c.edges)
        assert c.balanced()

    def test_binomial_is_line(self):
        c = tropical_curve(P([(1, (1, 0)), (1, (0, 1))]))
        assert len(c.edges) == 1 and c.edges[0].kind == "line"
        assert c.vertices == ()
        e = c.edges[0]
        for t in (-3.0, 0.0, 2.5):
            x, y = e.endpoint(t)
            assert x == pytest.approx(y)

    def test_conic(self):
        c = tropical_curve(CONIC)
        dirs = sorted(d for d, _ in c.outgoing((0.0, 0.0)))
        assert dirs == [(-1, 0), (0, -1), (0, 1), (1, 0)]
        assert c.balanced()

    def test_weights(self):
        c = tropical_curve(P([(1, (2, 0)), (1, (0, 2)), (1, (0, 0))]))
        assert sorted(e.weight for e in c.edges) == [2, 2, 2]
        assert c.balanced()

    def test_general_conic(self):
        e2 = math.e ** 2
        f = P([(1, (2, 0)), (e2, (1, 1)), (1, (0, 2)), (e2, (1, 0)), (e2, (0, 1)), (1, (0, 0))])
        c = tropical_curve(f)
        assert len(c.vertices) == 4
        assert any(e.kind == "segment" for e in c.edges)
        assert c.balanced()

    def test_edges_lie_on_ties(self, rng):
        e2 = math.e ** 2
        fixtures = [LINE, CONIC, P([(1, (2, 0)), (e2, (1, 1)), (1, (0, 2)), (e2, (1, 0)),
                                    (e2, (0, 1)), (1, (0, 0))])]
        for f in fixtures:
            c = tropical_curve(f)
            for seg in c.clipped_segments((-5, 5, -5, 5)):
                for t in rng.uniform(0, 1, 10):
                    p = (seg[0] + t * (seg[2] - seg[0]), seg[1] + t * (seg[3] - seg[1]))
                    assert tie_oracle(f, p)

    def test_matches_tropicalize(self, rng):
        f = P([(2.0, (1, 0)), (0.5, (0, 1)), (3.0, (0, 0)), (1.0, (1, 1))])
        c = tropical_curve(f)
        for p in rng.uniform(-3, 3, (50, 2)):
            want = max(float(np.dot(d, p)) + math.log(abs(a)) for a, d in f.terms)
            assert c.polynomial(p) == pytest.approx(want, abs=1e-12)

    def test_without_constants(self):
        f = P([(5.0, (1, 0)), (1, (0, 1)), (1, (0, 0))])
        assert tropical_curve(f, with_constants=False).vertices == ((0.0, 0.0),)
        assert tropical_curve(f).vertices[0] == pytest.approx((-math.log(5), 0.0))


class TestHausdorff:
    def test_points_on_curve(self):
        c = tropical_curve(LINE)
        pts = sample_curve(c, (-3, 3, -3, 3), 0.01)
        assert hausdorff_distance(pts, c, resolution=1e-3) <= 0.01

    def test_translation(self):
        # the vertex moves to (ε, ε); every ray stays within ε of its shifted copy
        c = tropical_curve(LINE)
        eps = 0.1
        pts = sample_curve(c, (-3, 3, -3, 3), 1e-3) + eps
        d = hausdorff_distance(pts, c, (-3, 3, -3, 3), 1e-3)
        assert d == pytest.approx(eps * math.sqrt(2), abs=2e-3)

    def test_empty_window(self):
        c = tropical_curve(LINE)
        with pytest.raises(EmptyWindow):
            hausdorff_distance(np.array([[10.0, 10.0]]), c)

    @pytest.mark.parametrize("f", [LINE, CONIC], ids=["line", "conic"])
    def test_convergence_trend(self, f):
        curve = tropical_curve(f)
        dists = [hausdorff_distance(sample_amoeba(f, h, 200).points, curve) for h in H_SEQUENCE]
        assert all(b <= 1.15 * a for a, b in zip(dists, dists[1:]))

    def test_line_improves(self):
        curve = tropical_curve(LINE)
        d1 = hausdorff_distance(sample_amoeba(LINE, 1.0, 200).points, curve)
        d01 = hausdorff_distance(sample_amoeba(LINE, 0.1, 200).points, curve)
        assert d01 < d1
