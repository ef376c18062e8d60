"""Amoebas of plane curves, their dequantized deformations and tropical curves.

``f_h`` rescales every coefficient ``a ↦ sign(a)·|a|^{1/h}`` so that
``h log|f_h(exp(X/h), exp(Y/h))|`` tends to ``max_d (d·(X, Y) + log|a_d|)``.
Its zero set, mapped by ``Log_h``, approaches the corner locus of that
maximum, which is the tropical curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .dequantize import GeneralizedPolynomial, TropicalPolynomial, tropicalize
from .errors import DegenerateCurve, EmptyWindow

TIE_TOL = 1e-9
RESIDUAL_TOL = 1e-9


class PlaneCurve:
    """Zero set of a real-coefficient Laurent polynomial in two variables."""

    __slots__ = ("poly",)

    def __init__(self, poly: GeneralizedPolynomial):
        if poly.n != 2:
            raise ValueError("plane curves need a polynomial in two variables")
        if not poly.is_real:
            raise ValueError("plane curves need real coefficients")
        if np.any(poly.exponents != np.round(poly.exponents)):
            raise ValueError("plane curves need integer exponents")
        if len(poly) < 2:
            raise DegenerateCurve("a monomial has no zeros in the torus")
        self.poly = poly

    @property
    def exponents(self) -> np.ndarray:
        return self.poly.exponents.astype(np.int64)

    @property
    def coefficients(self) -> np.ndarray:
        return self.poly.coefficients.real

    def __repr__(self):
        return f"PlaneCurve({self.poly!r})"


def deform(f: PlaneCurve, h: float) -> PlaneCurve:
    """Coefficient deformation ``a ↦ sign(a)|a|^{1/h}``; identity at ``h = 1``."""
    if not h > 0:
        raise ValueError("h must be positive")
    if h == 1:
        return f
    terms = [(math.copysign(abs(c.real) ** (1 / h), c.real), d) for c, d in f.poly.terms]
    return PlaneCurve(GeneralizedPolynomial(terms, 2))


def _residuals(coeffs: np.ndarray, exps: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``|f(x, y)| / Σ|terms|`` for arrays of points, computed in a log-shifted frame."""
    logs = (np.log(np.abs(coeffs))[None, :] + np.log(np.abs(x))[:, None] * exps[None, :, 0]
            + np.log(np.abs(y))[:, None] * exps[None, :, 1])
    logs -= np.max(logs, axis=1, keepdims=True)
    phase = np.sign(coeffs)[None, :] * np.exp(
        1j * (np.angle(x)[:, None] * exps[None, :, 0] + np.angle(y)[:, None] * exps[None, :, 1]))
    w = np.exp(logs)
    return np.abs(np.sum(phase * w, axis=1)) / np.sum(w, axis=1)


def _fiber_polys(coeffs: np.ndarray, exps: np.ndarray, z: np.ndarray, axis: int) -> np.ndarray:
    """Row ``i``: coefficients (highest power first) of ``w ↦ w^{-lo} f`` with variable ``axis`` = ``z[i]``.

    Each row is scaled by its largest term so that huge radii do not overflow.
    """
    k = exps[:, 1 - axis]
    lo = int(k.min())
    deg = int(k.max()) - lo
    logs = np.log(np.abs(coeffs))[None, :] + np.log(np.abs(z))[:, None] * exps[None, :, axis]
    logs -= np.max(logs, axis=1, keepdims=True)
    terms = (np.sign(coeffs)[None, :] * np.exp(logs)
             * np.exp(1j * np.angle(z)[:, None] * exps[None, :, axis]))
    polys = np.zeros((len(z), deg + 1), dtype=complex)
    for t, col in enumerate(deg - (k - lo)):
        polys[:, col] += terms[:, t]
    return polys


def _horner(polys: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Values and derivatives of each row polynomial at the matching entries of ``w``."""
    p = np.zeros_like(w)
    dp = np.zeros_like(w)
    for j in range(polys.shape[1]):
        dp = dp * w + p
        p = p * w + polys[:, j:j + 1]
    return p, dp


def _fiber_roots(polys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All roots of each row polynomial as ``(row index, root)`` arrays.

    Rows with a full-degree leading coefficient are solved together through
    batched companion matrices; the rest go through ``np.roots`` one by one.
    """
    n, m = polys.shape
    deg = m - 1
    if deg == 0:
        return np.empty(0, dtype=int), np.empty(0, dtype=complex)
    lead = polys[:, 0] != 0
    rows, roots = [], []
    idx = np.flatnonzero(lead)
    if idx.size:
        comp = np.zeros((idx.size, deg, deg), dtype=complex)
        comp[:, 0, :] = -polys[idx, 1:] / polys[idx, :1]
        if deg > 1:
            comp[:, np.arange(1, deg), np.arange(deg - 1)] = 1.0
        r = np.linalg.eigvals(comp)
        rows.append(np.repeat(idx, deg))
        roots.append(r.reshape(-1))
    for i in np.flatnonzero(~lead):
        p = polys[i]
        nz = np.flatnonzero(p)
        if nz.size < 2:
            continue
        r = np.roots(p[nz[0]:])
        rows.append(np.full(r.size, i))
        roots.append(r)
    if not rows:
        return np.empty(0, dtype=int), np.empty(0, dtype=complex)
    rows_a, roots_a = np.concatenate(rows), np.concatenate(roots)
    # two Newton steps polish the eigenvalues
    for _ in range(2):
        p, dp = _horner(polys[rows_a], roots_a[:, None])
        p, dp = p[:, 0], dp[:, 0]
        safe = dp != 0
        roots_a = np.where(safe, roots_a - p / np.where(safe, dp, 1), roots_a)
    keep = np.isfinite(roots_a) & (roots_a != 0)
    return rows_a[keep], roots_a[keep]


@dataclass(frozen=True)
class AmoebaSample:
    points: np.ndarray
    residuals: np.ndarray
    rejected: int


def sample_amoeba(f: PlaneCurve | GeneralizedPolynomial, h: float, n_samples: int,
                  window: Sequence[float] = (-3.0, 3.0, -3.0, 3.0),
                  n_angles: int = 64) -> AmoebaSample:
    """Points of ``Log_h(V_h)``.

    Each of the two coordinates is in turn fixed on a lattice of
    ``n_samples`` log-radii (spanning the window) times ``n_angles``
    arguments, and ``f_h`` is solved for the other coordinate.  Sampling both
    ways reaches tentacles parallel to either axis.  Roots whose relative
    residual is not below ``RESIDUAL_TOL`` are dropped and counted in
    ``rejected``.
    """
    if not isinstance(f, PlaneCurve):
        f = PlaneCurve(f)
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    if not h > 0:
        raise ValueError("h must be positive")
    fh = deform(f, h)
    coeffs, exps = fh.coefficients, fh.exponents
    x0, x1, y0, y1 = window
    # offset angles keep samples off the real axis, where roots may be multiple
    angles = 2 * math.pi * (np.arange(n_angles) + 0.5) / n_angles
    pts, res = [], []
    rejected = 0
    for axis, (lo, hi) in enumerate(((x0, x1), (y0, y1))):
        radii = np.exp(np.linspace(lo, hi, n_samples) / h)
        z = (radii[:, None] * np.exp(1j * angles)[None, :]).reshape(-1)
        rows, w = _fiber_roots(_fiber_polys(coeffs, exps, z, axis))
        if w.size == 0:
            continue
        x, y = (z[rows], w) if axis == 0 else (w, z[rows])
        r = _residuals(coeffs, exps, x, y)
        ok = r < RESIDUAL_TOL
        rejected += int(np.count_nonzero(~ok))
        pts.append(h * np.column_stack([np.log(np.abs(x[ok])), np.log(np.abs(y[ok]))]))
        res.append(r[ok])
    if not pts or sum(len(p) for p in pts) == 0:
        raise DegenerateCurve("no torus zeros found at any sample column")
    return AmoebaSample(np.vstack(pts), np.concatenate(res), rejected)


# -- tropical curve -------------------------------------------------------------


@dataclass(frozen=True)
class TropicalEdge:
    """Edge ``{point + t·direction : t_min ≤ t ≤ t_max}``.

    Segments and rays have ``t_min = 0``, so a ray starts at ``point`` and
    runs along ``direction``; full lines have both bounds infinite.
    """

    point: tuple[float, float]
    direction: tuple[int, int]  # primitive
    t_min: float
    t_max: float
    weight: int
    terms: tuple[int, ...]

    def endpoint(self, t: float) -> tuple[float, float]:
        return (self.point[0] + t * self.direction[0], self.point[1] + t * self.direction[1])

    @property
    def kind(self) -> str:
        finite = math.isfinite(self.t_min) + math.isfinite(self.t_max)
        return ("line", "ray", "segment")[finite]


@dataclass(frozen=True)
class TropicalCurve:
    edges: tuple[TropicalEdge, ...]
    vertices: tuple[tuple[float, float], ...]
    polynomial: TropicalPolynomial

    def clipped_segments(self, window: Sequence[float]) -> list[tuple[float, float, float, float]]:
        """Each edge intersected with the window box, as ``(x1, y1, x2, y2)``."""
        out = []
        for e in self.edges:
            seg = _clip(e, window)
            if seg is not None:
                out.append(seg)
        return out

    def outgoing(self, vertex: tuple[float, float]) -> list[tuple[tuple[int, int], int]]:
        """Primitive directions pointing away from ``vertex`` with their weights."""
        out = []
        for e in self.edges:
            for t, sign in ((e.t_min, 1), (e.t_max, -1)):
                if math.isfinite(t) and _close(e.endpoint(t), vertex):
                    out.append(((sign * e.direction[0], sign * e.direction[1]), e.weight))
        return out

    def balanced(self) -> bool:
        for v in self.vertices:
            sx = sum(d[0] * w for d, w in self.outgoing(v))
            sy = sum(d[1] * w for d, w in self.outgoing(v))
            if sx != 0 or sy != 0:
                return False
        return True


def _close(a, b, tol=1e-7) -> bool:
    return abs(a[0] - b[0]) <= tol and abs(a[1] - b[1]) <= tol


def _primitive(v) -> tuple[int, int]:
    a, b = int(v[0]), int(v[1])
    g = math.gcd(a, b)
    return (a // g, b // g)


def tropical_curve(f: PlaneCurve | GeneralizedPolynomial, with_constants: bool = True) -> TropicalCurve:
    """Corner locus of ``max_d (d·X + c_d)`` with ``c_d = log|a_d|`` (or 0).

    For every pair of terms the tie line is clipped to the interval where both
    terms attain the maximum.  Pairs whose clipped interval has positive
    length give edges; an edge shared by several collinear exponents is kept
    once, with weight equal to the lattice length of the dual segment.
    """
    if not isinstance(f, PlaneCurve):
        f = PlaneCurve(f)
    trop = tropicalize(f.poly, constants=with_constants)
    d = np.array(trop.slopes, dtype=float)
    c = np.array(trop.constants, dtype=float)
    n = len(c)
    seen: dict[tuple[int, ...], TropicalEdge] = {}
    for i in range(n):
        for j in range(i + 1, n):
            edge = _tie_edge(d, c, i, j)
            if edge is not None and edge.terms not in seen:
                seen[edge.terms] = edge
    edges = tuple(sorted(seen.values(), key=lambda e: e.terms))
    verts: list[tuple[float, float]] = []
    for e in edges:
        for t in (e.t_min, e.t_max):
            if math.isfinite(t):
                p = e.endpoint(t)
                if not any(_close(p, q) for q in verts):
                    verts.append(p)
    return TropicalCurve(edges, tuple(verts), trop)


def _tie_edge(d: np.ndarray, c: np.ndarray, i: int, j: int) -> TropicalEdge | None:
    delta = d[i] - d[j]
    if not np.any(delta):
        return None
    # tie line: delta·X = c_j - c_i; base point closest to the origin
    base = delta * (c[j] - c[i]) / float(np.dot(delta, delta))
    direction = _primitive((-delta[1], delta[0]))
    u = np.array(direction, dtype=float)
    lo, hi = -math.inf, math.inf
    for k in range(len(c)):
        if k in (i, j):
            continue
        # need (d_i - d_k)·(base + t u) + c_i - c_k >= 0
        a = float(np.dot(d[i] - d[k], u))
        b = float(np.dot(d[i] - d[k], base) + c[i] - c[k])
        if a == 0:
            if b < -TIE_TOL:
                return None
            continue
        t = -b / a
        if a > 0:
            lo = max(lo, t)
        else:
            hi = min(hi, t)
    if hi - lo <= TIE_TOL:
        return None
    if math.isfinite(lo) and math.isfinite(hi):
        probe = 0.5 * (lo + hi)
    elif math.isfinite(lo):
        probe = lo + 1.0
    elif math.isfinite(hi):
        probe = hi - 1.0
    else:
        probe = 0.0
    x = base + probe * u
    vals = d @ x + c
    top = np.max(vals)
    active = tuple(int(k) for k in np.flatnonzero(vals >= top - TIE_TOL))
    # weight = lattice length of the dual segment spanned by the active exponents
    act = d[list(active)]
    proj = act @ np.array(_primitive(delta), dtype=float)
    span = act[np.argmax(proj)] - act[np.argmin(proj)]
    weight = math.gcd(int(round(span[0])), int(round(span[1])))
    # rays start at their vertex and point outward; segments start at t = 0
    if math.isfinite(lo):
        start, t_max = base + lo * u, hi - lo
    elif math.isfinite(hi):
        start, t_max, direction = base + hi * u, math.inf, (-direction[0], -direction[1])
    else:
        if direction < (0, 0):
            direction = (-direction[0], -direction[1])
        return TropicalEdge(_clean(base), direction, -math.inf, math.inf, weight, active)
    return TropicalEdge(_clean(start), direction, 0.0, t_max, weight, active)


def _clean(p) -> tuple[float, float]:
    return (float(p[0]) + 0.0, float(p[1]) + 0.0)


def _clip(e: TropicalEdge, window: Sequence[float]):
    x0, x1, y0, y1 = window
    lo, hi = e.t_min, e.t_max
    for p, dp, a, b in ((e.point[0], e.direction[0], x0, x1), (e.point[1], e.direction[1], y0, y1)):
        if dp == 0:
            if not a <= p <= b:
                return None
            continue
        ta, tb = sorted(((a - p) / dp, (b - p) / dp))
        lo, hi = max(lo, ta), min(hi, tb)
    if hi < lo:
        return None
    p, q = e.endpoint(lo), e.endpoint(hi)
    return (p[0], p[1], q[0], q[1])


def sample_curve(curve: TropicalCurve, window: Sequence[float], resolution: float = 1e-3) -> np.ndarray:
    """Dense polyline sampling of the curve inside the window."""
    pts = []
    for x1, y1, x2, y2 in curve.clipped_segments(window):
        length = math.hypot(x2 - x1, y2 - y1)
        k = max(2, int(math.ceil(length / resolution)) + 1)
        t = np.linspace(0.0, 1.0, k)
        pts.append(np.column_stack([x1 + t * (x2 - x1), y1 + t * (y2 - y1)]))
    if not pts:
        return np.empty((0, 2))
    return np.vstack(pts)


def _point_segment_distance(p: np.ndarray, segs: np.ndarray) -> np.ndarray:
    a = segs[:, :2]
    b = segs[:, 2:]
    ab = b - a
    denom = np.maximum(np.sum(ab * ab, axis=1), 1e-300)
    out = np.empty(len(p))
    for lo in range(0, len(p), 4096):
        q = p[lo:lo + 4096]
        t = np.clip(np.einsum("ijk,jk->ij", q[:, None, :] - a[None], ab) / denom, 0.0, 1.0)
        proj = a[None] + t[..., None] * ab[None]
        out[lo:lo + 4096] = np.min(np.linalg.norm(q[:, None, :] - proj, axis=2), axis=1)
    return out


def hausdorff_distance(points: np.ndarray, curve: TropicalCurve,
                       window: Sequence[float] = (-3.0, 3.0, -3.0, 3.0),
                       resolution: float = 1e-3) -> float:
    """Hausdorff distance between the points and the curve, both cut to the window.

    Point-to-curve distances are exact (point-to-segment); curve-to-point
    distances use a polyline sampling of the curve at ``resolution``.
    """
    x0, x1, y0, y1 = window
    p = np.asarray(points, dtype=float)
    inside = (p[:, 0] >= x0) & (p[:, 0] <= x1) & (p[:, 1] >= y0) & (p[:, 1] <= y1)
    p = p[inside]
    segs = np.array(curve.clipped_segments(window), dtype=float).reshape(-1, 4)
    if len(p) == 0 or len(segs) == 0:
        raise EmptyWindow("no points or no curve inside the window")
    forward = float(np.max(_point_segment_distance(p, segs)))
    dense = sample_curve(curve, window, resolution)
    backward = float(np.max(cKDTree(p).query(dense)[0]))
    return max(forward, backward)


def in_line_amoeba(point: Sequence[float], tol: float = 1e-9) -> bool:
    """Membership in the amoeba of ``x + y + 1``: |x|, |y|, 1 satisfy the triangle inequality.

    ``tol`` is relative to ``|x| + |y| + 1``.
    """
    a, b = math.exp(point[0]), math.exp(point[1])
    slack = tol * (a + b + 1)
    return a <= b + 1 + slack and b <= a + 1 + slack and 1 <= a + b + slack
