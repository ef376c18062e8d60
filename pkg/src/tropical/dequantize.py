"""Dequantization transform of generalized polynomials and Newton sets.

For ``f = Σ a_d x^d`` with real exponent vectors ``d`` the transform is
``f̂_h(x) = h log|f(exp(x/h))|``; as ``h → 0`` it tends to ``max_d (d·x)``,
whose subdifferential at the origin is the Newton polytope ``conv{d}``.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .convex import Polytope
from .errors import DimensionUnsupported, NonpositiveArgument, NotInGeneralPosition, ZeroValue

# relative size under which a cancelled sum is treated as an exact zero
CANCELLATION_TOL = 64 * np.finfo(float).eps
# tropical values closer than this count as a tie (the measure-zero set)
TIE_TOL = 1e-9


class GeneralizedPolynomial:
    """Finite sum of monomials ``a·x^d`` with nonzero coefficients and real exponents.

    Terms with bit-identical exponent vectors are merged; terms whose merged
    coefficient vanishes are dropped.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, terms: Iterable[tuple[complex, Sequence[float]]], n: int | None = None):
        merged: dict[tuple[float, ...], complex] = {}
        for coeff, exp in terms:
            d = tuple(float(e) + 0.0 for e in np.atleast_1d(exp))
            if n is None:
                n = len(d)
            if len(d) != n:
                raise ValueError(f"exponent {d} does not have {n} coordinates")
            merged[d] = merged.get(d, 0) + complex(coeff)
        if n is None:
            raise ValueError("dimension of an empty polynomial must be given")
        self.n = n
        self._terms = {d: c for d, c in merged.items() if c != 0}

    @classmethod
    def monomial(cls, a: complex, d: Sequence[float]) -> "GeneralizedPolynomial":
        return cls([(a, d)])

    @classmethod
    def constant(cls, c: complex, n: int = 1) -> "GeneralizedPolynomial":
        return cls([(c, (0.0,) * n)], n)

    @property
    def terms(self) -> list[tuple[complex, tuple[float, ...]]]:
        return [(c, d) for d, c in sorted(self._terms.items())]

    @property
    def exponents(self) -> np.ndarray:
        return np.array(sorted(self._terms), dtype=float).reshape(-1, self.n)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self._terms[d] for d in sorted(self._terms)], dtype=complex)

    @property
    def is_real(self) -> bool:
        return all(c.imag == 0 for c in self._terms.values())

    @property
    def has_nonnegative_coefficients(self) -> bool:
        return all(c.imag == 0 and c.real > 0 for c in self._terms.values())

    def __len__(self):
        return len(self._terms)

    def __add__(self, other: "GeneralizedPolynomial") -> "GeneralizedPolynomial":
        self._check_dim(other)
        return GeneralizedPolynomial(
            [(c, d) for d, c in self._terms.items()] + [(c, d) for d, c in other._terms.items()],
            self.n)

    def __mul__(self, other: "GeneralizedPolynomial") -> "GeneralizedPolynomial":
        self._check_dim(other)
        prod = []
        for d1, c1 in self._terms.items():
            for d2, c2 in other._terms.items():
                prod.append((c1 * c2, tuple(a + b for a, b in zip(d1, d2))))
        return GeneralizedPolynomial(prod, self.n)

    def __eq__(self, other):
        if not isinstance(other, GeneralizedPolynomial):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __repr__(self):
        return f"GeneralizedPolynomial({self.terms!r})"

    def _check_dim(self, other):
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __call__(self, z):
        return eval_poly(self, z)


def eval_poly(f: GeneralizedPolynomial, z) -> complex | float:
    """``Σ a Π z_i^{d_i}`` on the positive orthant."""
    z = np.asarray(z, dtype=float).reshape(-1)
    if z.size != f.n:
        raise ValueError(f"point has {z.size} coordinates, polynomial has {f.n} variables")
    if np.any(z <= 0):
        raise NonpositiveArgument("generalized monomials are evaluated at positive arguments only")
    total = sum(c * float(np.prod(z ** np.array(d))) for c, d in f.terms)
    total = complex(total)
    return total.real if f.is_real else total


def _log_abs_sum(f: GeneralizedPolynomial, x: np.ndarray, h: float) -> float:
    """``log|Σ a_d exp(d·x/h)|`` evaluated in a shifted frame."""
    coeffs = f.coefficients
    logs = f.exponents @ x / h + np.log(np.abs(coeffs))
    top = float(np.max(logs))
    weights = np.exp(logs - top)
    phases = coeffs / np.abs(coeffs)
    s = complex(np.sum(phases * weights))
    if abs(s) <= CANCELLATION_TOL * float(np.sum(weights)):
        raise ZeroValue(f"polynomial vanishes at exp(x/h) for x={x.tolist()}, h={h}")
    return top + math.log(abs(s))


def dequantize_h(f: GeneralizedPolynomial, x, h: float) -> float:
    """``h log|f(exp(x/h))|``."""
    if not h > 0:
        raise ValueError("h must be positive")
    if len(f) == 0:
        raise ZeroValue("the zero polynomial has no dequantization")
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != f.n:
        raise ValueError(f"point has {x.size} coordinates, polynomial has {f.n} variables")
    return h * _log_abs_sum(f, x, h)


def dequantize_callback(fn: Callable[[np.ndarray], complex], x, h: float) -> float:
    """``h log|fn(exp(x/h))|`` for an arbitrary function given as a callback.

    Intended for asymptotic polynomials such as logarithms of polynomials;
    no tropical limit or Newton set is derived for these.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    x = np.asarray(x, dtype=float)
    value = abs(complex(fn(np.exp(x / h))))
    if value == 0:
        raise ZeroValue("callback returned zero")
    return h * math.log(value)


@dataclass(frozen=True)
class TropicalPolynomial:
    """``x ↦ max_k (slope_k·x + constant_k)``."""

    constants: tuple[float, ...]
    slopes: tuple[tuple[float, ...], ...]

    @property
    def terms(self) -> list[tuple[float, tuple[float, ...]]]:
        return list(zip(self.constants, self.slopes))

    def term_values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1)
        return np.array(self.slopes) @ x + np.array(self.constants)

    def __call__(self, x) -> float:
        return float(np.max(self.term_values(x)))


def tropicalize(f: GeneralizedPolynomial, constants: bool = False) -> TropicalPolynomial:
    """Limit of ``f̂_h`` as ``h → 0``: the function ``max_d (d·x)``.

    With ``constants=True`` each term keeps the offset ``log|a_d|``; that is
    the limit of the coefficient-deformed family used for amoebas.
    """
    if len(f) == 0:
        raise ValueError("the zero polynomial has no tropicalization")
    terms = f.terms
    consts = tuple(math.log(abs(c)) if constants else 0.0 for c, _ in terms)
    return TropicalPolynomial(consts, tuple(d for _, d in terms))


def newton_set(f: GeneralizedPolynomial) -> Polytope:
    """Convex hull of the exponent vectors."""
    if f.n > 3:
        raise DimensionUnsupported(f"exact hulls are implemented up to dimension 3, got {f.n}")
    if len(f) == 0:
        raise ValueError("the zero polynomial has an empty Newton set")
    return Polytope(f.exponents)


def in_general_position(f: GeneralizedPolynomial, g: GeneralizedPolynomial, x) -> bool:
    """Finite-sample proxy: the tropical limits differ at ``x``."""
    return abs(tropicalize(f)(x) - tropicalize(g)(x)) > TIE_TOL


def has_tropical_tie(f: GeneralizedPolynomial, x) -> bool:
    """Two distinct terms of ``f`` attain (within ``TIE_TOL``) the same tropical value."""
    vals = np.sort(tropicalize(f).term_values(x))
    return vals.size > 1 and bool(np.any(np.diff(vals) <= TIE_TOL))


@dataclass(frozen=True)
class ProductReport:
    max_deviation: float
    samples: int
    tolerance: float = 1e-9

    @property
    def ok(self) -> bool:
        return self.max_deviation <= self.tolerance


def check_hom_product(f: GeneralizedPolynomial, g: GeneralizedPolynomial,
                      samples: Iterable[tuple[Sequence[float], float]]) -> ProductReport:
    """Compare ``(fg)^_h`` (expanded product) with ``f̂_h + ĝ_h`` at each sample."""
    fg = f * g
    worst = 0.0
    count = 0
    for x, h in samples:
        dev = abs(dequantize_h(fg, x, h) - (dequantize_h(f, x, h) + dequantize_h(g, x, h)))
        worst = max(worst, dev)
        count += 1
    return ProductReport(worst, count)


@dataclass(frozen=True)
class SumReport:
    hypothesis: str
    h_values: tuple[float, ...]
    gaps: tuple[float, ...]
    bounds: tuple[float, ...]
    floors: tuple[float, ...] = ()

    @property
    def within_bound(self) -> bool:
        return all(g <= b for g, b in zip(self.gaps, self.bounds))

    @property
    def decreasing(self) -> bool:
        """Nonincreasing gaps; a rise below the rounding floor of the compared values counts as a tie."""
        floors = self.floors or (0.0,) * len(self.gaps)
        return all(b <= a * (1 + 1e-12) + fb
                   for a, b, fb in zip(self.gaps, self.gaps[1:], floors[1:]))

    @property
    def ok(self) -> bool:
        return self.within_bound and self.decreasing


def check_hom_sum(f: GeneralizedPolynomial, g: GeneralizedPolynomial, x,
                  h_sequence: Sequence[float]) -> SumReport:
    """Gap ``|(f+g)^_h - max(f̂_h, ĝ_h)|`` along a decreasing ``h`` sequence.

    Requires positive coefficients on both sides or general position at ``x``
    (tropical limits differ there).  The bound is ``h log T`` with ``T`` the
    total number of terms.
    """
    if f.has_nonnegative_coefficients and g.has_nonnegative_coefficients:
        hypothesis = "nonnegative"
    elif in_general_position(f, g, x):
        hypothesis = "general_position"
    else:
        raise NotInGeneralPosition("coefficients are not positive and the tropical limits tie at x")
    total = f + g
    n_terms = len(f) + len(g)
    gaps, bounds, floors = [], [], []
    for h in h_sequence:
        lhs = dequantize_h(total, x, h)
        rhs = max(dequantize_h(f, x, h), dequantize_h(g, x, h))
        gaps.append(abs(lhs - rhs))
        bounds.append(h * math.log(n_terms))
        floors.append(8 * sys.float_info.epsilon * max(1.0, abs(lhs), abs(rhs)))
    return SumReport(hypothesis, tuple(float(h) for h in h_sequence), tuple(gaps), tuple(bounds),
                     tuple(floors))


def random_polynomial(rng: np.random.Generator, n: int = 2, n_terms: int = 4, max_degree: int = 4,
                      positive: bool = True) -> GeneralizedPolynomial:
    """Random integer-exponent polynomial; coefficients in ``[1, 2]`` (sign random unless positive)."""
    exps = rng.integers(0, max_degree + 1, size=(n_terms, n))
    coeffs = rng.uniform(1.0, 2.0, size=n_terms)
    if not positive:
        coeffs *= rng.choice([-1.0, 1.0], size=n_terms)
    return GeneralizedPolynomial(zip(coeffs, exps), n)
