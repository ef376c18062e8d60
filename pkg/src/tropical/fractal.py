"""Box-counting dimension and pointwise measure dimension.

Both are log-ratio limits, ``lim inf (1/s) log N(e^{-s})``, estimated here
by least-squares slopes over a finite list of scales.  The per-scale ratios
are returned too, so the lim inf reading can be inspected directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gamma

from .errors import DegenerateScales, NonmonotoneMeasure


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray

    def __post_init__(self):
        p = np.array(self.points, dtype=float)
        if p.ndim == 1:
            p = p[:, None]
        if p.ndim != 2 or len(p) == 0:
            raise ValueError("a point cloud needs at least one point")
        if not 1 <= p.shape[1] <= 3:
            raise ValueError("point clouds are 1-D to 3-D")
        if not np.isfinite(p).all():
            raise ValueError("points must be finite")
        p.flags.writeable = False
        object.__setattr__(self, "points", p)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return len(self.points)

    def shifted(self, offset) -> "PointCloud":
        return PointCloud(self.points + np.asarray(offset, dtype=float))

    def product(self, other: "PointCloud") -> "PointCloud":
        """Cartesian product ``S × T``."""
        a = np.repeat(self.points, len(other), axis=0)
        b = np.tile(other.points, (len(self), 1))
        return PointCloud(np.hstack([a, b]))


def box_count(cloud: PointCloud, rho: float) -> int:
    """Occupied cells of the origin-anchored grid with side ``2ρ``."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    cells = np.floor(cloud.points / (2 * rho)).astype(np.int64)
    return len(np.unique(cells, axis=0))


@dataclass(frozen=True)
class ScaleSweep:
    scales: tuple[float, ...]
    counts: tuple[int, ...]
    slope: float
    ratios: tuple[float, ...]


def _slope(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    return float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))


def _prepare_scales(scales: Sequence[float]) -> np.ndarray:
    s = np.array(sorted({float(r) for r in scales}, reverse=True))
    if s.size < 3:
        raise DegenerateScales("need at least three distinct scales")
    if np.any(s <= 0):
        raise DegenerateScales("scales must be positive")
    return s


def hb_dimension(cloud: PointCloud, scales: Sequence[float]) -> tuple[float, ScaleSweep]:
    """Slope of ``log N_ρ`` against ``log(1/ρ)``.

    ``ratios[k]`` is ``log N_ρ / log(1/ρ)`` at each scale (NaN at ``ρ = 1``).
    A set with constant counts, e.g. a single point, gets slope zero.
    """
    rho = _prepare_scales(scales)
    counts = np.array([box_count(cloud, r) for r in rho])
    x = np.log(1 / rho)
    y = np.log(counts)
    slope = 0.0 if np.all(counts == counts[0]) else _slope(x, y)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(x != 0, y / x, np.nan)
    sweep = ScaleSweep(tuple(rho.tolist()), tuple(int(c) for c in counts), slope,
                       tuple(float(r) for r in ratios))
    return slope, sweep


def pointwise_measure_dimension(mu_samples: Sequence[tuple[float, float]],
                                scales: Sequence[float] | None = None) -> float:
    """Slope of ``-log μ(B_{x,ρ})`` against ``log(1/ρ)``.

    ``mu_samples`` holds ``(ρ, μ)`` pairs; ``scales`` optionally restricts
    which radii enter the fit.
    """
    data = sorted(((float(r), float(m)) for r, m in mu_samples), reverse=True)
    if scales is not None:
        keep = {float(s) for s in scales}
        data = [(r, m) for r, m in data if r in keep]
    rho = np.array([r for r, _ in data])
    mu = np.array([m for _, m in data])
    if rho.size < 3 or len(set(rho.tolist())) != rho.size:
        raise DegenerateScales("need at least three distinct radii")
    if np.any(mu <= 0):
        raise NonmonotoneMeasure("measure values must be positive")
    if np.any(np.diff(mu) > 0):
        raise NonmonotoneMeasure("ball measure grows as the radius shrinks")
    if np.all(mu == mu[0]):
        return 0.0
    return _slope(np.log(1 / rho), -np.log(mu))


def ball_volume(d: float, rho: float) -> float:
    """Volume of a radius-``rho`` ball in (possibly fractional) dimension ``d``."""
    return gamma(0.5) ** d / gamma(1 + d / 2) * rho ** d


def cantor_points(depth: int) -> np.ndarray:
    """Midpoints of the ``2**depth`` middle-thirds intervals at the given depth."""
    left = np.zeros(1)
    for k in range(1, depth + 1):
        left = np.concatenate([left, left + 2 * 3.0 ** -k])
    return np.sort(left) + 0.5 * 3.0 ** -depth


def segment_points(n: int) -> np.ndarray:
    """``n`` cell midpoints of ``[0, 1]``."""
    return (np.arange(n) + 0.5) / n


def uniform_segment_measure(x: float, rho: float, lo: float = 0.0, hi: float = 1.0) -> float:
    """Mass of ``[x-ρ, x+ρ]`` under the uniform probability on ``[lo, hi]``."""
    return max(0.0, min(hi, x + rho) - max(lo, x - rho)) / (hi - lo)

