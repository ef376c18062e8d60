"""Idempotent integration, sup-convolution, Legendre transform and kernels.

Functions are sampled on uniform grids (:class:`GridFunction`), so every
integral below is a finite ⊕-reduction and every identity can be checked by
brute force.  The zero element is encoded as in :mod:`tropical.semiring`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import EmptyDomain, GridMismatch, SpecMismatch, StepMismatch
from .semiring import MAXPLUS, ExtendedScalar, Semiring


@dataclass(frozen=True)
class Grid:
    """Uniform 1-D grid ``origin + i*step`` for ``i < count``."""

    origin: float
    step: float
    count: int

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("grid step must be positive")
        if self.count < 1:
            raise ValueError("grid needs at least one point")

    @property
    def points(self) -> np.ndarray:
        return self.origin + np.arange(self.count) * self.step

    @classmethod
    def spanning(cls, lo: float, hi: float, step: float) -> "Grid":
        return cls(lo, step, int(round((hi - lo) / step)) + 1)


class GridFunction:
    """Semiring-valued function on a uniform 1-D or 2-D grid.

    ``values`` has one axis per grid dimension; ``origin`` and ``step`` are
    tuples with one entry per axis.
    """

    __slots__ = ("values", "origin", "step", "semiring")

    def __init__(self, values, origin, step, semiring: Semiring = MAXPLUS):
        v = np.array(values, dtype=float)
        if v.ndim not in (1, 2):
            raise ValueError("grid functions are 1-D or 2-D")
        if np.isnan(v).any():
            raise ValueError("NaN is not a semiring element")
        origin = _as_tuple(origin, v.ndim)
        step = _as_tuple(step, v.ndim)
        if any(not s > 0 for s in step):
            raise ValueError("grid steps must be positive")
        v.flags.writeable = False
        self.values = v
        self.origin = origin
        self.step = step
        self.semiring = semiring

    @classmethod
    def sample(cls, fn: Callable, grid: Grid, semiring: Semiring = MAXPLUS) -> "GridFunction":
        return cls([fn(x) for x in grid.points], grid.origin, grid.step, semiring)

    @property
    def dim(self) -> int:
        return self.values.ndim

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    def axis(self, k: int = 0) -> np.ndarray:
        return self.origin[k] + np.arange(self.values.shape[k]) * self.step[k]

    def grid(self, k: int = 0) -> Grid:
        return Grid(self.origin[k], self.step[k], self.values.shape[k])

    def same_grid(self, other: "GridFunction") -> bool:
        return (self.shape == other.shape and self.origin == other.origin
                and self.step == other.step)

    def support_mask(self) -> np.ndarray:
        return self.values != self.semiring.zero_float

    def with_values(self, values) -> "GridFunction":
        return GridFunction(values, self.origin, self.step, self.semiring)

    def __eq__(self, other):
        if not isinstance(other, GridFunction):
            return NotImplemented
        return (self.same_grid(other) and self.semiring == other.semiring
                and np.array_equal(self.values, other.values))

    def __repr__(self):
        return (f"GridFunction(shape={self.shape}, origin={self.origin}, "
                f"step={self.step}, semiring={self.semiring})")


def _as_tuple(x, n) -> tuple[float, ...]:
    if np.ndim(x) == 0:
        return (float(x),) * n
    t = tuple(float(v) for v in x)
    if len(t) != n:
        raise ValueError(f"expected {n} per-axis values, got {len(t)}")
    return t


def _require_nonempty(phi: GridFunction):
    if not phi.support_mask().any():
        raise EmptyDomain("function equals the semiring zero everywhere")


def _require_same(phi: GridFunction, psi: GridFunction):
    if phi.semiring != psi.semiring:
        raise SpecMismatch(f"{phi.semiring} vs {psi.semiring}")
    if not phi.same_grid(psi):
        raise GridMismatch("functions live on different grids")


def idempotent_integral(phi: GridFunction) -> ExtendedScalar:
    """⊕ of all values: ``sup`` for max-plus, ``inf`` for min-plus."""
    _require_nonempty(phi)
    return phi.semiring.from_float(phi.semiring.sum_reduce(phi.values))


def measure_integral(phi: GridFunction, psi: GridFunction) -> ExtendedScalar:
    """Integral of ``phi`` against the idempotent measure with density ``psi``."""
    _require_same(phi, psi)
    s = phi.semiring
    return s.from_float(s.sum_reduce(s.mul_arrays(phi.values, psi.values)))


def scalar_product(phi: GridFunction, psi: GridFunction) -> ExtendedScalar:
    """``⟨phi, psi⟩``; same value as :func:`measure_integral`."""
    return measure_integral(phi, psi)


def sup_convolution(phi: GridFunction, psi: GridFunction) -> GridFunction:
    """``(phi ⊛ psi)(g) = ⊕_x phi(x) ⊙ psi(g - x)`` on the Minkowski-sum grid."""
    if phi.semiring != psi.semiring:
        raise SpecMismatch(f"{phi.semiring} vs {psi.semiring}")
    if phi.dim != psi.dim:
        raise GridMismatch("dimension mismatch")
    if phi.step != psi.step:
        raise StepMismatch(f"steps differ: {phi.step} vs {psi.step}")
    s = phi.semiring
    shape = tuple(a + b - 1 for a, b in zip(phi.shape, psi.shape))
    out = np.full(shape, s.zero_float)
    # accumulate one shifted copy of the larger factor per sample of the smaller
    big, small = (phi, psi) if phi.values.size >= psi.values.size else (psi, phi)
    for idx in np.ndindex(small.shape):
        c = small.values[idx]
        if c == s.zero_float:
            continue
        window = tuple(slice(i, i + n) for i, n in zip(idx, big.shape))
        out[window] = s.add_arrays(out[window], s.mul_arrays(big.values, c))
    origin = tuple(a + b for a, b in zip(phi.origin, psi.origin))
    return GridFunction(out, origin, phi.step, s)


# -- Legendre transform -----------------------------------------------------


def is_discretely_concave(phi: GridFunction) -> bool:
    """Finite values form one contiguous run whose increments never increase."""
    if phi.dim != 1:
        return False
    mask = phi.support_mask()
    idx = np.flatnonzero(mask)
    if idx.size == 0 or idx[-1] - idx[0] + 1 != idx.size:
        return False
    v = phi.values[idx[0]:idx[-1] + 1]
    if not np.isfinite(v).all():
        return False
    d = np.diff(v)
    return bool(np.all(d[1:] <= d[:-1]))


def _legendre_brute_max(x: np.ndarray, v: np.ndarray, xi: np.ndarray) -> np.ndarray:
    out = np.empty(xi.size)
    finite = v != -math.inf
    x = x[finite]
    v = v[finite]
    chunk = max(1, 2_000_000 // max(1, x.size))
    for lo in range(0, xi.size, chunk):
        hi = min(xi.size, lo + chunk)
        out[lo:hi] = np.max(xi[lo:hi, None] * x[None, :] + v[None, :], axis=1)
    return out


def _legendre_fast_max(x: np.ndarray, v: np.ndarray, xi: np.ndarray) -> np.ndarray:
    # argmax of xi*x + v is nondecreasing in xi; for concave v the objective is
    # unimodal in x, so a single forward pointer finds every maximum
    finite = np.flatnonzero(v != -math.inf)
    lo, hi = finite[0], finite[-1]
    order = np.argsort(xi, kind="stable")
    out = np.empty(xi.size)
    i = lo
    for k in order:
        t = xi[k]
        best = t * x[i] + v[i]
        while i < hi:
            nxt = t * x[i + 1] + v[i + 1]
            if nxt < best:
                break
            i += 1
            best = nxt
        out[k] = best
    return out


def legendre_transform(phi: GridFunction, xi_grid, method: str = "auto") -> GridFunction:
    """``φ̃(ξ) = ⊕_x (ξ·x ⊙ φ(x))`` sampled on ``xi_grid``.

    For max-plus this is ``sup_x (ξ·x + φ(x))``, the classical convex conjugate
    of ``-φ``.  For min-plus the infimum is taken instead.

    ``method`` is ``"brute"`` (O(NM)), ``"fast"`` (monotone argmax sweep,
    O(N + M), needs a discretely concave φ, or convex for min-plus) or
    ``"auto"``, which uses the sweep when its precondition holds and falls
    back to brute force otherwise.  A 2-D ``phi`` takes a pair of grids and is
    always evaluated by brute force.
    """
    _require_nonempty(phi)
    s = phi.semiring
    if not s.idempotent:
        raise SpecMismatch("the Legendre transform is defined over max-plus or min-plus")
    if method not in ("auto", "brute", "fast"):
        raise ValueError(f"unknown method {method!r}")
    if phi.dim == 2:
        return _legendre_2d(phi, xi_grid)
    if isinstance(xi_grid, (tuple, list)) and len(xi_grid) == 1:
        xi_grid = xi_grid[0]
    xi = xi_grid.points
    x = phi.axis(0)
    sign = 1.0 if s == MAXPLUS else -1.0
    # min-plus runs on the negated problem: inf(ξx + φ) = -sup((-ξ)x + (-φ))
    v = sign * phi.values
    xi_eff = sign * xi
    concave = is_discretely_concave(GridFunction(v, phi.origin, phi.step, MAXPLUS))
    if method == "fast":
        if not concave:
            raise ValueError("fast Legendre path needs a discretely concave function")
        out = _legendre_fast_max(x, v, xi_eff)
    elif method == "auto" and concave:
        out = _legendre_fast_max(x, v, xi_eff)
    else:
        out = _legendre_brute_max(x, v, xi_eff)
    return GridFunction(sign * out, xi_grid.origin, xi_grid.step, s)


def _legendre_2d(phi: GridFunction, xi_grids) -> GridFunction:
    gx, gy = xi_grids
    s = phi.semiring
    sign = 1.0 if s == MAXPLUS else -1.0
    x = phi.axis(0)
    y = phi.axis(1)
    v = sign * phi.values
    mask = v != -math.inf
    xs, ys = np.meshgrid(x, y, indexing="ij")
    xs, ys, vv = xs[mask], ys[mask], v[mask]
    out = np.empty((gx.count, gy.count))
    for i, a in enumerate(sign * gx.points):
        for j, b in enumerate(sign * gy.points):
            out[i, j] = np.max(a * xs + b * ys + vv)
    return GridFunction(sign * out, (gx.origin, gy.origin), (gx.step, gy.step), s)


def inverse_legendre(phit: GridFunction, x_grid: Grid) -> GridFunction:
    """``inf_ξ (φ̃(ξ) - x·ξ)``: recovers the least concave majorant of φ."""
    if phit.dim != 1 or phit.semiring != MAXPLUS:
        raise SpecMismatch("inverse transform expects a 1-D max-plus transform")
    xi = phit.axis(0)
    mask = phit.values != -math.inf
    xi, v = xi[mask], phit.values[mask]
    x = x_grid.points
    out = np.min(v[None, :] - x[:, None] * xi[None, :], axis=1)
    return GridFunction(out, x_grid.origin, x_grid.step, MAXPLUS)


def concave_majorant(phi: GridFunction) -> GridFunction:
    """Least concave majorant of a 1-D max-plus grid function (upper hull)."""
    _require_nonempty(phi)
    if phi.dim != 1:
        raise ValueError("concave majorant is implemented for 1-D grids")
    x = phi.axis(0)
    idx = np.flatnonzero(phi.support_mask())
    hull: list[int] = []
    for i in idx:
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            # drop b when it lies on or below the chord a -> i
            cross = (x[b] - x[a]) * (phi.values[i] - phi.values[a]) - \
                    (phi.values[b] - phi.values[a]) * (x[i] - x[a])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(int(i))
    out = np.full(phi.shape, -math.inf)
    hx = x[hull]
    hv = phi.values[hull]
    inside = (x >= hx[0]) & (x <= hx[-1])
    out[inside] = np.interp(x[inside], hx, hv)
    out[hull] = hv
    return phi.with_values(out)


def suggest_slope_range(phi: GridFunction) -> tuple[float, float]:
    """ξ interval whose supporting lines touch every finite sample of φ.

    The maximizer of ``ξx + φ(x)`` sits where ``ξ = -φ'(x)``, so the range
    is ``[-max slope, -min slope]`` over consecutive finite samples.
    """
    if phi.dim != 1:
        raise ValueError("slope range is implemented for 1-D grids")
    v = phi.values
    ok = (v[1:] != phi.semiring.zero_float) & (v[:-1] != phi.semiring.zero_float)
    slopes = (np.diff(v)[ok]) / phi.step[0]
    if slopes.size == 0:
        return (0.0, 0.0)
    return (-float(slopes.max()), -float(slopes.min()))


# -- kernels ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Kernel:
    """``K(x, y)`` on a product grid; rows index ``x``, columns ``y``."""

    values: np.ndarray
    x_grid: Grid
    y_grid: Grid
    semiring: Semiring = MAXPLUS

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.x_grid.count, self.y_grid.count):
            raise GridMismatch(f"kernel shape {v.shape} does not match its grids")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def as_grid_function(self) -> GridFunction:
        return GridFunction(self.values, (self.x_grid.origin, self.y_grid.origin),
                            (self.x_grid.step, self.y_grid.step), self.semiring)

    @classmethod
    def from_grid_function(cls, g: GridFunction) -> "Kernel":
        if g.dim != 2:
            raise GridMismatch("a kernel is a 2-D grid function")
        return cls(g.values, g.grid(0), g.grid(1), g.semiring)


def apply_kernel(k: Kernel, phi: GridFunction) -> GridFunction:
    """``(Kφ)(y) = ⊕_x K(x, y) ⊙ φ(x)``."""
    if k.semiring != phi.semiring:
        raise SpecMismatch(f"{k.semiring} vs {phi.semiring}")
    if phi.dim != 1 or phi.grid(0) != k.x_grid:
        raise GridMismatch("kernel x-axis and function grid differ")
    s = k.semiring
    out = s.sum_reduce(s.mul_arrays(k.values, phi.values[:, None]), axis=0)
    return GridFunction(out, k.y_grid.origin, k.y_grid.step, s)


def delta(grid: Grid, at_index: int, semiring: Semiring = MAXPLUS) -> GridFunction:
    """Unit at one gridpoint, zero elsewhere (the convolution identity at 0)."""
    v = np.full(grid.count, semiring.zero_float)
    v[at_index] = semiring.one
    return GridFunction(v, grid.origin, grid.step, semiring)


def second_differences(g: GridFunction) -> np.ndarray:
    v = g.values
    return v[2:] - 2 * v[1:-1] + v[:-2]


__all__ = [
    "Grid", "GridFunction", "Kernel", "idempotent_integral", "measure_integral",
    "scalar_product", "sup_convolution", "legendre_transform", "inverse_legendre",
    "concave_majorant", "suggest_slope_range", "apply_kernel", "delta",
    "is_discretely_concave", "second_differences",
]
