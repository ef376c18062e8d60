"""The Minkowski semiring of convex polytopes.

``P ⊕ Q`` is the convex hull of the union, ``P ⊙ Q`` the Minkowski sum and
the point at the origin is the unit.  Polytopes are kept in vertex form and
re-canonicalized after every operation, so equality is a comparison of
vertex lists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import ConvexHull

from .errors import DimMismatch, DimensionUnsupported, LawViolation

TOL = 1e-9


def _dedup(points: np.ndarray) -> np.ndarray:
    order = np.lexsort(points.T[::-1])
    pts = points[order]
    keep = [0]
    for i in range(1, len(pts)):
        if np.max(np.abs(pts[i] - pts[keep[-1]])) > TOL:
            keep.append(i)
    return pts[keep]


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_2d(pts: np.ndarray) -> np.ndarray:
    """Monotone chain; returns extreme points counterclockwise from the lex-min."""
    if len(pts) <= 2:
        return pts
    lower: list[np.ndarray] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= TOL:
            lower.pop()
        lower.append(p)
    upper: list[np.ndarray] = []
    for p in pts[::-1]:
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= TOL:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def _affine_basis(pts: np.ndarray):
    centred = pts - pts[0]
    if len(pts) == 1:
        return 0, None
    _, sv, vt = np.linalg.svd(centred, full_matrices=False)
    rank = int(np.sum(sv > TOL * max(1.0, sv[0])))
    return rank, vt[:rank]


def _extreme_indices(pts: np.ndarray) -> np.ndarray:
    """Indices of the extreme points of ``pts`` (already deduplicated)."""
    n, dim = pts.shape
    if n == 1:
        return np.array([0])
    rank, basis = _affine_basis(pts)
    if rank == 0:
        return np.array([0])
    if rank < dim:
        # lower-dimensional set: find extremes of the projection onto its affine hull
        proj = (pts - pts[0]) @ basis.T
        return _extreme_indices_full(proj)
    return _extreme_indices_full(pts)


def _extreme_indices_full(pts: np.ndarray) -> np.ndarray:
    dim = pts.shape[1]
    if dim == 1:
        return np.array(sorted({int(np.argmin(pts[:, 0])), int(np.argmax(pts[:, 0]))}))
    if dim == 2:
        keyed = {tuple(p): i for i, p in enumerate(pts)}
        order = np.lexsort(pts.T[::-1])
        hull = _hull_2d(pts[order])
        return np.array([keyed[tuple(p)] for p in hull])
    return np.sort(ConvexHull(pts).vertices)


def _ccw_from_lexmin(pts: np.ndarray) -> np.ndarray:
    if len(pts) < 3:
        return pts[np.lexsort(pts.T[::-1])]
    return _hull_2d(pts[np.lexsort(pts.T[::-1])])


def canonicalize(points) -> np.ndarray:
    """Extreme points, deduplicated at ``TOL``, in canonical order.

    Order is lexicographic, except that a 2-D polygon with three or more
    vertices is listed counterclockwise starting at its lex-smallest vertex.
    """
    pts = np.array(points, dtype=float)
    if pts.ndim != 2 or len(pts) == 0:
        raise ValueError("a polytope needs at least one point")
    dim = pts.shape[1]
    if not 1 <= dim <= 3:
        raise DimensionUnsupported(f"polytopes of dimension {dim} are not supported")
    pts = _dedup(pts)
    ext = pts[_extreme_indices(pts)]
    if dim == 2:
        rank, _ = _affine_basis(ext)
        if rank == 2:
            return _ccw_from_lexmin(ext)
    return ext[np.lexsort(ext.T[::-1])]


@dataclass(frozen=True, eq=False)
class Polytope:
    """Convex polytope in dimension 1 to 3, held by its canonical vertex list."""

    vertices: np.ndarray

    def __post_init__(self):
        v = canonicalize(self.vertices)
        v.flags.writeable = False
        object.__setattr__(self, "vertices", v)

    @classmethod
    def point(cls, p: Sequence[float]) -> "Polytope":
        return cls(np.array([p], dtype=float))

    @classmethod
    def origin(cls, dim: int) -> "Polytope":
        return cls(np.zeros((1, dim)))

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        return (self.vertices.shape == other.vertices.shape
                and bool(np.all(np.abs(self.vertices - other.vertices) <= TOL)))

    def __hash__(self):
        return hash(self.vertices.shape)

    def __repr__(self):
        return f"Polytope({self.vertices.tolist()!r})"

    def __add__(self, other):
        return hull_union(self, other)

    def __mul__(self, other):
        return minkowski_sum(self, other)

    def vertex_tuples(self) -> list[tuple[float, ...]]:
        return [tuple(float(c) for c in v) for v in self.vertices]


def _same_dim(p: Polytope, q: Polytope):
    if p.dim != q.dim:
        raise DimMismatch(f"dimensions differ: {p.dim} vs {q.dim}")


def minkowski_sum(p: Polytope, q: Polytope) -> Polytope:
    _same_dim(p, q)
    sums = (p.vertices[:, None, :] + q.vertices[None, :, :]).reshape(-1, p.dim)
    return Polytope(sums)


def hull_union(p: Polytope, q: Polytope) -> Polytope:
    _same_dim(p, q)
    return Polytope(np.vstack([p.vertices, q.vertices]))


def support_function(p: Polytope, x) -> float:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != p.dim:
        raise DimMismatch(f"direction has {x.size} coordinates, polytope is {p.dim}-D")
    return float(np.max(p.vertices @ x))


def probe_directions(dim: int, count: int = 64) -> np.ndarray:
    """Fixed set of dyadic-coordinate directions (exact dot products on dyadic data)."""
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        t = 2 * math.pi * np.arange(count) / count
        return np.round(np.column_stack([np.cos(t), np.sin(t)]) * 1024) / 1024
    rng = np.random.default_rng(0)
    d = rng.normal(size=(count, dim))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return np.round(d * 1024) / 1024


def support_equal(p: Polytope, q: Polytope, count: int = 64) -> bool:
    """Equality through support functions on the probe set plus vertex counts."""
    if p.dim != q.dim or len(p) != len(q):
        return False
    dirs = probe_directions(p.dim, count)
    return all(abs(support_function(p, d) - support_function(q, d)) <= TOL for d in dirs)


def is_extreme_set(p: Polytope) -> bool:
    """Every listed vertex is an extreme point of the list's hull."""
    v = p.vertices
    return len(_extreme_indices(v)) == len(v)


# -- sublinear functions ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SublinearFunction:
    """``x ↦ max_v v·x`` over a finite nonempty set of linear pieces."""

    pieces: np.ndarray

    def __post_init__(self):
        v = np.array(self.pieces, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or len(v) == 0:
            raise ValueError("a sublinear function needs at least one linear piece")
        v.flags.writeable = False
        object.__setattr__(self, "pieces", v)

    @property
    def dim(self) -> int:
        return self.pieces.shape[1]

    def __call__(self, x) -> float:
        return float(np.max(self.pieces @ np.asarray(x, dtype=float).reshape(-1)))

    def __add__(self, other: "SublinearFunction") -> "SublinearFunction":
        # max_a a·x + max_b b·x = max_{a,b} (a+b)·x
        s = (self.pieces[:, None, :] + other.pieces[None, :, :]).reshape(-1, self.dim)
        return SublinearFunction(s)

    def maximum(self, other: "SublinearFunction") -> "SublinearFunction":
        return SublinearFunction(np.vstack([self.pieces, other.pieces]))


def subdifferential_at_origin(p: SublinearFunction) -> Polytope:
    """Subdifferential at 0 of a max-of-linear function: the hull of its slopes."""
    return Polytope(p.pieces)


def sublinear_of(p: Polytope) -> SublinearFunction:
    """The support function of ``p`` as a sublinear function."""
    return SublinearFunction(p.vertices)


@dataclass(frozen=True)
class LawReport:
    laws: tuple[str, ...]


def semiring_law_check(p: Polytope, q: Polytope, r: Polytope) -> LawReport:
    """Check the Minkowski semiring laws and the subdifferential rules on a triple.

    The sublinear functions for the subdifferential rules are the support
    functions of ``p`` and ``q``.  Raises :class:`LawViolation` naming the
    first identity that fails.
    """
    _same_dim(p, q)
    _same_dim(q, r)
    zero_point = Polytope.origin(p.dim)
    sp, sq = sublinear_of(p), sublinear_of(q)
    checks = [
        ("⊕ commutative", hull_union(p, q), hull_union(q, p)),
        ("⊕ associative", hull_union(hull_union(p, q), r), hull_union(p, hull_union(q, r))),
        ("⊕ idempotent", hull_union(p, p), p),
        ("⊙ commutative", minkowski_sum(p, q), minkowski_sum(q, p)),
        ("⊙ associative", minkowski_sum(minkowski_sum(p, q), r),
         minkowski_sum(p, minkowski_sum(q, r))),
        ("left distributive", minkowski_sum(p, hull_union(q, r)),
         hull_union(minkowski_sum(p, q), minkowski_sum(p, r))),
        ("right distributive", minkowski_sum(hull_union(q, r), p),
         hull_union(minkowski_sum(q, p), minkowski_sum(r, p))),
        ("⊙ unit", minkowski_sum(p, zero_point), p),
        ("∂(p1+p2) = ∂p1 ⊙ ∂p2", subdifferential_at_origin(sp + sq), minkowski_sum(p, q)),
        ("∂max(p1,p2) = ∂p1 ⊕ ∂p2", subdifferential_at_origin(sp.maximum(sq)), hull_union(p, q)),
    ]
    for name, lhs, rhs in checks:
        if lhs != rhs:
            raise LawViolation(name, (p, q, r, lhs, rhs))
    return LawReport(tuple(name for name, _, _ in checks))


def random_dyadic_polytope(rng: np.random.Generator, dim: int = 2, n_points: int = 3,
                           scale: int = 8, denom: int = 4) -> Polytope:
    """Hull of random points with coordinates in ``(1/denom)·[-scale, scale]``."""
    pts = rng.integers(-scale * denom, scale * denom + 1, size=(n_points, dim)) / denom
    return Polytope(pts)


def polytope_from_points(points: Iterable[Sequence[float]]) -> Polytope:
    return Polytope(np.array(list(points), dtype=float))
