"""Max-plus, min-plus and subtropical semirings.

Scalars are plain floats plus two tagged elements, :data:`BOTTOM` (the
semiring zero) and :data:`TOP` (the top element of the completed semiring).
The tags never take part in IEEE arithmetic, so ``BOTTOM ⊙ TOP`` is
``BOTTOM`` rather than NaN.

Array routines encode the tags as IEEE infinities (``-inf``/``+inf`` for
max-plus, the reverse for min-plus) and mask every product so the NaN-producing
sum ``-inf + inf`` is never returned.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import Divergent, OrderUndefined


class Special(enum.Enum):
    BOTTOM = "bottom"
    TOP = "top"

    def __repr__(self):
        return self.name


BOTTOM = Special.BOTTOM
TOP = Special.TOP

ExtendedScalar = Union[float, Special]

MAXPLUS_KIND = "maxplus"
MINPLUS_KIND = "minplus"
SUBTROPICAL_KIND = "subtropical"


@dataclass(frozen=True)
class Semiring:
    """Selector fixing ⊕, ⊙, zero and unit.

    ``kind`` is one of ``"maxplus"``, ``"minplus"`` or ``"subtropical"``;
    ``h`` is the deformation parameter and is only present for the last.
    """

    kind: str
    h: float | None = None

    def __post_init__(self):
        if self.kind not in (MAXPLUS_KIND, MINPLUS_KIND, SUBTROPICAL_KIND):
            raise ValueError(f"unknown semiring kind {self.kind!r}")
        if self.kind == SUBTROPICAL_KIND:
            if self.h is None or not (self.h > 0) or not math.isfinite(self.h):
                raise ValueError("subtropical semiring needs a finite h > 0")
        elif self.h is not None:
            raise ValueError(f"{self.kind} takes no h parameter")

    # -- structure -------------------------------------------------------

    @property
    def idempotent(self) -> bool:
        return self.kind != SUBTROPICAL_KIND

    @property
    def zero(self) -> Special:
        return BOTTOM

    @property
    def one(self) -> float:
        return 0.0

    @property
    def zero_float(self) -> float:
        """IEEE encoding of the zero element inside arrays."""
        return math.inf if self.kind == MINPLUS_KIND else -math.inf

    @property
    def top_float(self) -> float:
        return -self.zero_float

    @property
    def bottom_token(self) -> str:
        return "inf" if self.kind == MINPLUS_KIND else "-inf"

    @property
    def top_token(self) -> str:
        return "-inf" if self.kind == MINPLUS_KIND else "inf"

    def __str__(self):
        if self.kind == SUBTROPICAL_KIND:
            return f"subtropical:{self.h!r}"
        return self.kind

    # -- scalar conversion -----------------------------------------------

    def coerce(self, a) -> ExtendedScalar:
        """Normalize ``a`` into a float or a tag, reading infinities per this semiring."""
        if isinstance(a, Special):
            return a
        x = float(a)
        if math.isnan(x):
            raise ValueError("NaN is not a semiring element")
        if math.isinf(x):
            return BOTTOM if x == self.zero_float else TOP
        return x

    def to_float(self, a) -> float:
        a = self.coerce(a)
        if a is BOTTOM:
            return self.zero_float
        if a is TOP:
            return self.top_float
        return a

    def from_float(self, x) -> ExtendedScalar:
        return self.coerce(x)

    # -- scalar operations -----------------------------------------------

    def add(self, a, b) -> ExtendedScalar:
        a = self.coerce(a)
        b = self.coerce(b)
        if a is BOTTOM:
            return b
        if b is BOTTOM:
            return a
        if a is TOP or b is TOP:
            return TOP
        if self.kind == MAXPLUS_KIND:
            return max(a, b)
        if self.kind == MINPLUS_KIND:
            return min(a, b)
        return _soft_max(a, b, self.h)

    def mul(self, a, b) -> ExtendedScalar:
        a = self.coerce(a)
        b = self.coerce(b)
        if a is BOTTOM or b is BOTTOM:
            return BOTTOM
        if a is TOP or b is TOP:
            return TOP
        return a + b

    def leq(self, a, b) -> bool:
        """Standard order: ``a ⪯ b`` iff ``a ⊕ b == b``."""
        if not self.idempotent:
            raise OrderUndefined("the standard order needs idempotent addition")
        return self.add(a, b) == self.coerce(b)

    def star(self, a) -> ExtendedScalar:
        """Scalar Kleene star ``1 ⊕ a ⊕ a⊙a ⊕ ...``."""
        if not self.idempotent:
            raise OrderUndefined("Kleene star is only defined for idempotent semirings")
        a = self.coerce(a)
        if a is BOTTOM:
            return self.one
        if a is TOP:
            raise Divergent("star of the top element")
        if self.leq(a, self.one):
            return self.one
        raise Divergent(f"star({a!r}) diverges in {self}")

    def power(self, a, k: int) -> ExtendedScalar:
        a = self.coerce(a)
        if k == 0:
            return self.one
        if a is BOTTOM or a is TOP:
            return a
        return a * k

    # -- array operations ------------------------------------------------

    def add_arrays(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if self.kind == MAXPLUS_KIND:
            return np.maximum(a, b)
        if self.kind == MINPLUS_KIND:
            return np.minimum(a, b)
        return _soft_max_array(a, b, self.h)

    def mul_arrays(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        z = self.zero_float
        with np.errstate(invalid="ignore"):
            out = a + b
        return np.where((a == z) | (b == z), z, out)

    def sum_reduce(self, a, axis=None) -> np.ndarray | float:
        """⊕-reduction of an array (``max``/``min``/soft maximum)."""
        a = np.asarray(a, dtype=float)
        if self.kind == MAXPLUS_KIND:
            return np.max(a, axis=axis, initial=-math.inf)
        if self.kind == MINPLUS_KIND:
            return np.min(a, axis=axis, initial=math.inf)
        h = self.h
        m = np.max(a, axis=axis, keepdims=True, initial=-math.inf)
        safe = np.where(np.isfinite(m), m, 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = h * np.log(np.sum(np.exp((a - safe) / h), axis=axis, keepdims=True)) + safe
        s = np.where(np.isneginf(m), -math.inf, np.where(np.isposinf(m), math.inf, s))
        return np.squeeze(s, axis=axis) if axis is not None else float(s.reshape(()))

    def is_zero_array(self, a) -> np.ndarray:
        return np.asarray(a) == self.zero_float


MAXPLUS = Semiring(MAXPLUS_KIND)
MINPLUS = Semiring(MINPLUS_KIND)


def subtropical(h: float) -> Semiring:
    return Semiring(SUBTROPICAL_KIND, float(h))


def parse_semiring(text: str) -> Semiring:
    """Parse ``maxplus``, ``minplus`` or ``subtropical:<h>``."""
    text = text.strip().lower()
    if text == MAXPLUS_KIND:
        return MAXPLUS
    if text == MINPLUS_KIND:
        return MINPLUS
    if text.startswith(SUBTROPICAL_KIND + ":"):
        return subtropical(float(text.split(":", 1)[1]))
    raise ValueError(f"unknown semiring {text!r}")


def _soft_max(u: float, v: float, h: float) -> float:
    # max(u, v) + h*log(1 + exp(-|u - v|/h)); never overflows
    return max(u, v) + h * math.log1p(math.exp(-abs(u - v) / h))


def _soft_max_array(a, b, h):
    m = np.maximum(a, b)
    finite = np.isfinite(a) & np.isfinite(b)
    with np.errstate(invalid="ignore"):
        d = np.where(finite, np.abs(a - b), math.inf)
    return np.where(finite, m + h * np.log1p(np.exp(-d / h)), m)


def dequantized_add_limit_gap(u: float, v: float, h: float) -> float:
    """How far ``u ⊕_h v`` sits above ``max(u, v)``; always in ``[0, h log 2]``."""
    if not h > 0:
        raise ValueError("h must be positive")
    return h * math.log1p(math.exp(-abs(u - v) / h))


def add(a, b, s: Semiring = MAXPLUS) -> ExtendedScalar:
    return s.add(a, b)


def mul(a, b, s: Semiring = MAXPLUS) -> ExtendedScalar:
    return s.mul(a, b)


def leq(a, b, s: Semiring = MAXPLUS) -> bool:
    return s.leq(a, b)


def scalar_star(a, s: Semiring = MAXPLUS) -> ExtendedScalar:
    return s.star(a)


# -- randomized law checks ----------------------------------------------------

AXIOMS = (
    "add_associative", "add_commutative", "mul_associative", "mul_commutative",
    "left_distributive", "right_distributive", "zero_neutral", "zero_absorbing",
    "one_neutral", "add_idempotent",
)


@dataclass(frozen=True)
class AxiomReport:
    semiring: Semiring
    samples: int
    failures: dict

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())


def random_scalars(rng: np.random.Generator, n: int, bottom_fraction: float = 0.05,
                   scale: int = 1000) -> list:
    """Dyadic values ``k/8`` in ``[-scale, scale]`` with an occasional ``BOTTOM``.

    Sums of dyadic values of this size are exact doubles, so the max-plus
    and min-plus laws can be compared with ``==``.
    """
    vals = rng.integers(-8 * scale, 8 * scale + 1, size=n) / 8.0
    bottom = rng.random(n) < bottom_fraction
    return [BOTTOM if b else float(v) for v, b in zip(vals, bottom)]


def _same(s: Semiring, x, y, scale: float, rel_tol: float) -> bool:
    if s.idempotent or isinstance(x, Special) or isinstance(y, Special):
        return x == y
    return abs(x - y) <= rel_tol * scale


def check_axioms(s: Semiring, triples, rel_tol: float = 1e-12) -> AxiomReport:
    """Count violations of each law over ``(a, b, c)`` triples.

    Idempotent semirings are compared exactly; the subtropical one within
    ``rel_tol`` times ``max(|a|, |b|, |c|, 1)``.  Idempotency is only
    checked for idempotent semirings.
    """
    fails = {name: 0 for name in AXIOMS}
    n = 0
    add, mul, zero, one = s.add, s.mul, s.zero, s.one
    for a, b, c in triples:
        a, b, c = s.coerce(a), s.coerce(b), s.coerce(c)
        n += 1
        scale = max([1.0] + [abs(v) for v in (a, b, c) if not isinstance(v, Special)])
        eq = lambda x, y: _same(s, x, y, scale, rel_tol)  # noqa: E731
        fails["add_associative"] += not eq(add(add(a, b), c), add(a, add(b, c)))
        fails["add_commutative"] += not eq(add(a, b), add(b, a))
        fails["mul_associative"] += not eq(mul(mul(a, b), c), mul(a, mul(b, c)))
        fails["mul_commutative"] += not eq(mul(a, b), mul(b, a))
        fails["left_distributive"] += not eq(mul(a, add(b, c)), add(mul(a, b), mul(a, c)))
        fails["right_distributive"] += not eq(mul(add(b, c), a), add(mul(b, a), mul(c, a)))
        fails["zero_neutral"] += not eq(add(a, zero), a)
        fails["zero_absorbing"] += not eq(mul(a, zero), zero)
        fails["one_neutral"] += not eq(mul(a, one), a)
        if s.idempotent:
            fails["add_idempotent"] += not eq(add(a, a), a)
    return AxiomReport(s, n, fails)
