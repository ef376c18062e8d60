"""Hamilton-Jacobi evolution as a min-plus kernel operator, and its viscous twin.

The inviscid equation ``S_t + S_x²/(2m) + V = 0`` is advanced by the
Hopf-Lax formula with the potential applied by operator splitting::

    S'(x) = min_y [S(y) + m (x - y)² / (2 dt)] - dt·V(x)

This operator is min-plus linear on the grid.  The viscous counterpart is the
imaginary-time Schrödinger (heat) equation ``h u_t = (h²/2m) u_xx + V u``.
With ``S = -h ln u`` it becomes ``S_t + S_x²/(2m) + V = (h/2m) S_xx``, the
vanishing-viscosity regularization of the same Hamilton-Jacobi equation.
With ``S = h ln u`` it becomes ``S_t = V + S_x²/(2m) + (h/2m) S_xx``, which
:func:`cole_hopf_residual` checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .calculus import Grid, GridFunction
from .errors import GridMismatch, LinearityViolation, NonpositiveU, StabilityViolation
from .semiring import MINPLUS


@dataclass(frozen=True, eq=False)
class HJProblem:
    """One-dimensional problem: mass, potential and initial action on a shared grid."""

    grid: Grid
    mass: float = 1.0
    potential: np.ndarray | None = None
    initial: np.ndarray | None = None

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        n = self.grid.count
        v = np.zeros(n) if self.potential is None else np.array(self.potential, dtype=float)
        if v.shape != (n,):
            raise GridMismatch("potential does not match the grid")
        if not np.isfinite(v).all():
            raise ValueError("potential must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "potential", v)
        if self.initial is not None:
            s0 = np.array(self.initial, dtype=float)
            if s0.shape != (n,):
                raise GridMismatch("initial action does not match the grid")
            s0.flags.writeable = False
            object.__setattr__(self, "initial", s0)

    @property
    def x(self) -> np.ndarray:
        return self.grid.points

    def grid_function(self, values) -> GridFunction:
        return GridFunction(values, self.grid.origin, self.grid.step, MINPLUS)

    @property
    def initial_function(self) -> GridFunction:
        if self.initial is None:
            raise ValueError("problem has no initial action")
        return self.grid_function(self.initial)


def _values_on(s, prob: HJProblem) -> np.ndarray:
    if isinstance(s, GridFunction):
        if s.dim != 1 or s.grid(0) != prob.grid:
            raise GridMismatch("function is not on the problem grid")
        return s.values
    v = np.asarray(s, dtype=float)
    if v.shape != (prob.grid.count,):
        raise GridMismatch("values do not match the problem grid")
    return v


def _kernel(prob: HJProblem, dt: float) -> np.ndarray:
    x = prob.x
    dx = x[:, None] - x[None, :]
    return prob.mass * (dx * dx) / (2 * dt)


def hopf_lax_argmin(s, dt: float, prob: HJProblem) -> np.ndarray:
    """Grid index of the minimizing ``y`` for every output point."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    v = _values_on(s, prob)
    return np.argmin(v[None, :] + _kernel(prob, dt), axis=1)


def hopf_lax_step(s, dt: float, prob: HJProblem) -> GridFunction:
    """One Hopf-Lax step of length ``dt`` followed by the potential term."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    v = _values_on(s, prob)
    kinetic = np.min(v[None, :] + _kernel(prob, dt), axis=1)
    return prob.grid_function(kinetic - dt * prob.potential)


def interior_mask(s, dt: float, prob: HJProblem) -> np.ndarray:
    """Points whose minimizer is not on the grid boundary (values there are trusted)."""
    arg = hopf_lax_argmin(s, dt, prob)
    return (arg > 0) & (arg < prob.grid.count - 1)


def hopf_lax_evolve(s, t: float, dt: float, prob: HJProblem) -> GridFunction:
    """Advance to time ``t`` with ``ceil(t/dt)`` equal steps."""
    n = max(1, math.ceil(t / dt - 1e-12))
    step = t / n
    g = prob.grid_function(_values_on(s, prob))
    for _ in range(n):
        g = hopf_lax_step(g, step, prob)
    return g


@dataclass(frozen=True)
class SuperpositionReport:
    max_deviation: float
    points: int


def superposition_check(s1, s2, lam1: float, lam2: float, dt: float,
                        prob: HJProblem) -> SuperpositionReport:
    """Min-plus linearity of one step, compared exactly at every gridpoint.

    Raises :class:`LinearityViolation` at the first gridpoint where
    ``step(min(λ1+S1, λ2+S2))`` and ``min(λ1+step(S1), λ2+step(S2))`` differ.
    """
    v1 = _values_on(s1, prob)
    v2 = _values_on(s2, prob)
    lhs = hopf_lax_step(np.minimum(lam1 + v1, lam2 + v2), dt, prob).values
    rhs = np.minimum(lam1 + hopf_lax_step(v1, dt, prob).values,
                     lam2 + hopf_lax_step(v2, dt, prob).values)
    bad = np.flatnonzero(lhs != rhs)
    if bad.size:
        i = int(bad[0])
        raise LinearityViolation(i, float(lhs[i]), float(rhs[i]))
    return SuperpositionReport(0.0, lhs.size)


# -- viscous (imaginary-time) equation ---------------------------------------


def stability_limit(prob: HJProblem, h: float) -> float:
    """Largest stable explicit step ``m·step²/h``."""
    return prob.mass * prob.grid.step ** 2 / h


def viscous_rhs(u, h: float, prob: HJProblem) -> np.ndarray:
    """``u_t = (h/2m) u_xx + V u / h`` at interior points; zero at the ends."""
    if not h > 0:
        raise ValueError("h must be positive")
    v = _values_on(u, prob)
    if np.any(v <= 0) or not np.isfinite(v).all():
        raise NonpositiveU("u must be finite and positive")
    rhs = np.zeros_like(v)
    d2 = (v[2:] - 2 * v[1:-1] + v[:-2]) / prob.grid.step ** 2
    rhs[1:-1] = h / (2 * prob.mass) * d2 + prob.potential[1:-1] * v[1:-1] / h
    return rhs


def viscous_step(u, dt: float, h: float, prob: HJProblem) -> GridFunction:
    """One explicit Euler step; boundary values are held fixed (Dirichlet)."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    limit = stability_limit(prob, h)
    if dt > limit * (1 + 1e-12):
        raise StabilityViolation(f"dt={dt} exceeds the explicit limit m·step²/h={limit}")
    v = _values_on(u, prob)
    out = v + dt * viscous_rhs(v, h, prob)
    if np.any(out <= 0):
        raise NonpositiveU("step produced a nonpositive value; reduce dt or check V")
    return GridFunction(out, prob.grid.origin, prob.grid.step)


@dataclass(frozen=True)
class ResidualReport:
    max_residual: float
    residual: np.ndarray = field(repr=False)


def cole_hopf_residual(u, du_dt, h: float, prob: HJProblem) -> ResidualReport:
    """Residual of ``S_t = V + S_x²/(2m) + (h/2m) S_xx`` for ``S = h ln u``.

    Spatial derivatives are central differences; the endpoints are skipped.
    """
    uv = _values_on(u, prob)
    ut = _values_on(du_dt, prob)
    if np.any(uv <= 0):
        raise NonpositiveU("u must be positive")
    s = h * np.log(uv)
    st = h * ut / uv
    dx = prob.grid.step
    sx = (s[2:] - s[:-2]) / (2 * dx)
    sxx = (s[2:] - 2 * s[1:-1] + s[:-2]) / dx ** 2
    m = prob.mass
    res = st[1:-1] - (prob.potential[1:-1] + sx ** 2 / (2 * m) + h / (2 * m) * sxx)
    return ResidualReport(float(np.max(np.abs(res))), res)


# -- h -> 0 comparison ----------------------------------------------------------


def viscous_evolve(s0, t: float, h: float, prob: HJProblem,
                   safety: float = 0.9) -> GridFunction:
    """Evolve ``u = exp(-(S0 - min S0)/h)`` to time ``t`` and return ``-h ln u`` (+ shift)."""
    v = _values_on(s0, prob)
    shift = float(np.min(v))
    u = np.exp(-(v - shift) / h)
    if np.any(u <= 0):
        raise NonpositiveU("initial data underflows for this h; use a larger h or a smaller range")
    n = max(1, math.ceil(t / (safety * stability_limit(prob, h))))
    dt = t / n
    for _ in range(n):
        u = u + dt * viscous_rhs(u, h, prob)
        if np.any(u <= 0):
            raise NonpositiveU("viscous evolution lost positivity")
    return prob.grid_function(-h * np.log(u) + shift)


@dataclass(frozen=True)
class ConvergenceReport:
    h_values: tuple[float, ...]
    gaps: tuple[float, ...]
    limit: GridFunction = field(repr=False)
    viscous: tuple[GridFunction, ...] = field(repr=False)
    region: np.ndarray = field(repr=False)

    def decreasing(self, slack: float = 0.10) -> bool:
        """Each gap is at most ``(1 + slack)`` times its predecessor."""
        return all(b <= a * (1 + slack) for a, b in zip(self.gaps, self.gaps[1:]))


def dequantization_convergence(prob: HJProblem, t: float, h_sequence: Sequence[float],
                               dt: float | None = None,
                               interior_fraction: float = 0.5) -> ConvergenceReport:
    """Sup-norm gap between the viscous solutions and the Hopf-Lax limit at time ``t``.

    The gap is measured on the central ``interior_fraction`` of the grid,
    restricted further to points whose Hopf-Lax minimizers are interior.
    """
    if prob.initial is None:
        raise ValueError("problem has no initial action")
    dt = t if dt is None else dt
    n_steps = max(1, math.ceil(t / dt - 1e-12))
    step = t / n_steps
    g = prob.initial_function
    trusted = np.ones(prob.grid.count, dtype=bool)
    for _ in range(n_steps):
        trusted &= interior_mask(g, step, prob)
        g = hopf_lax_step(g, step, prob)
    n = prob.grid.count
    margin = int(round(n * (1 - interior_fraction) / 2))
    region = np.zeros(n, dtype=bool)
    region[margin:n - margin] = True
    region &= trusted
    gaps, sols = [], []
    for h in h_sequence:
        sh = viscous_evolve(prob.initial, t, h, prob)
        sols.append(sh)
        gaps.append(float(np.max(np.abs(sh.values[region] - g.values[region]))))
    return ConvergenceReport(tuple(float(h) for h in h_sequence), tuple(gaps), g, tuple(sols), region)
