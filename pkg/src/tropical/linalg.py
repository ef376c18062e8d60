"""Dense matrix algebra over idempotent semirings.

The central object is the Kleene closure ``H* = I ⊕ H ⊕ H² ⊕ ...`` which
gives the least solution ``X = H* ⊙ F`` of the Bellman equation
``X = H ⊙ X ⊕ F``.  Shortest paths are the min-plus instance, longest paths
on acyclic graphs the max-plus one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import Divergent, DivergentClosure, NotConverged, ShapeMismatch, SpecMismatch
from .semiring import MINPLUS, ExtendedScalar, Semiring

# rows per block in mat_mul; bounds the rows x inner x cols temporary
_BLOCK_ELEMS = 4_000_000


class SemiringMatrix:
    """Immutable dense matrix of semiring values.

    Entries are stored as floats with the zero element encoded as
    ``semiring.zero_float``.
    """

    __slots__ = ("_data", "semiring")

    def __init__(self, data, semiring: Semiring):
        arr = np.array(data, dtype=float)
        if arr.ndim != 2:
            raise ShapeMismatch(f"matrix data must be 2-D, got shape {arr.shape}")
        if np.isnan(arr).any():
            raise ValueError("NaN is not a semiring element")
        arr.flags.writeable = False
        self._data = arr
        self.semiring = semiring

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], semiring: Semiring) -> "SemiringMatrix":
        return cls([[semiring.to_float(v) for v in row] for row in rows], semiring)

    @classmethod
    def zeros(cls, rows: int, cols: int, semiring: Semiring) -> "SemiringMatrix":
        return cls(np.full((rows, cols), semiring.zero_float), semiring)

    @classmethod
    def identity(cls, n: int, semiring: Semiring) -> "SemiringMatrix":
        a = np.full((n, n), semiring.zero_float)
        np.fill_diagonal(a, semiring.one)
        return cls(a, semiring)

    @classmethod
    def unit_column(cls, n: int, index: int, semiring: Semiring) -> "SemiringMatrix":
        a = np.full((n, 1), semiring.zero_float)
        a[index, 0] = semiring.one
        return cls(a, semiring)

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def entries(self) -> tuple[ExtendedScalar, ...]:
        return tuple(self.semiring.from_float(v) for v in self._data.ravel())

    def __getitem__(self, idx) -> ExtendedScalar:
        return self.semiring.from_float(self._data[idx])

    def __eq__(self, other):
        if not isinstance(other, SemiringMatrix):
            return NotImplemented
        return self.semiring == other.semiring and np.array_equal(self._data, other._data)

    def __hash__(self):
        return hash((self.semiring, self._data.tobytes(), self.shape))

    def __repr__(self):
        return f"SemiringMatrix({self._data.tolist()!r}, {self.semiring})"

    def __add__(self, other):
        return mat_add(self, other)

    def __matmul__(self, other):
        return mat_mul(self, other)

    @property
    def T(self) -> "SemiringMatrix":
        return SemiringMatrix(self._data.T, self.semiring)

    def column(self, j: int) -> list[ExtendedScalar]:
        return [self.semiring.from_float(v) for v in self._data[:, j]]


def _check_spec(a: SemiringMatrix, b: SemiringMatrix):
    if a.semiring != b.semiring:
        raise SpecMismatch(f"{a.semiring} vs {b.semiring}")


def mat_add(a: SemiringMatrix, b: SemiringMatrix) -> SemiringMatrix:
    _check_spec(a, b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"{a.shape} vs {b.shape}")
    return SemiringMatrix(a.semiring.add_arrays(a.data, b.data), a.semiring)


def mat_mul(a: SemiringMatrix, b: SemiringMatrix) -> SemiringMatrix:
    """``C[i, j] = ⊕_k A[i, k] ⊙ B[k, j]``."""
    _check_spec(a, b)
    if a.cols != b.rows:
        raise ShapeMismatch(f"cannot multiply {a.shape} by {b.shape}")
    s = a.semiring
    n, k = a.shape
    m = b.cols
    out = np.full((n, m), s.zero_float)
    if k == 0:
        return SemiringMatrix(out, s)
    block = max(1, _BLOCK_ELEMS // max(1, k * m))
    for lo in range(0, n, block):
        hi = min(n, lo + block)
        prod = s.mul_arrays(a.data[lo:hi, :, None], b.data[None, :, :])
        out[lo:hi] = s.sum_reduce(prod, axis=1)
    return SemiringMatrix(out, s)


def _require_idempotent(s: Semiring):
    if not s.idempotent:
        raise SpecMismatch(f"{s} is not idempotent")


def kleene_closure(h: SemiringMatrix) -> SemiringMatrix:
    """Floyd-Warshall-Kleene elimination of ``H* = I ⊕ H ⊕ H² ⊕ ...``.

    Pass ``k`` relaxes every entry through node ``k`` using the star of the
    current diagonal entry; a divergent star (a positive max-plus cycle or a
    negative min-plus cycle through ``k``) raises :class:`DivergentClosure`.
    """
    s = h.semiring
    _require_idempotent(s)
    if h.rows != h.cols:
        raise ShapeMismatch(f"closure needs a square matrix, got {h.shape}")
    a = np.array(h.data, dtype=float)
    n = h.rows
    for k in range(n):
        try:
            star = s.star(s.from_float(a[k, k]))
        except Divergent as exc:
            raise DivergentClosure(f"divergent cycle through node {k}") from exc
        col = s.mul_arrays(a[:, k], star)
        a = s.add_arrays(a, s.mul_arrays(col[:, None], a[k, None, :]))
    a = s.add_arrays(a, SemiringMatrix.identity(n, s).data)
    return SemiringMatrix(a, s)


def _bellman_step(h: SemiringMatrix, x: np.ndarray, f: SemiringMatrix) -> np.ndarray:
    return h.semiring.add_arrays(mat_mul(h, SemiringMatrix(x, h.semiring)).data, f.data)


def _check_bellman(h: SemiringMatrix, f: SemiringMatrix):
    _check_spec(h, f)
    _require_idempotent(h.semiring)
    if h.rows != h.cols:
        raise ShapeMismatch(f"H must be square, got {h.shape}")
    if f.rows != h.rows:
        raise ShapeMismatch(f"F has {f.rows} rows, H has {h.rows}")


def solve_bellman(h: SemiringMatrix, f: SemiringMatrix) -> SemiringMatrix:
    """Least solution of ``X = H ⊙ X ⊕ F``.

    The closure product is refined by at most ``n + 1`` Bellman sweeps so the
    returned matrix satisfies the equation exactly in floating point; with
    integer or dyadic data the refinement is a no-op.
    """
    _check_bellman(h, f)
    x = mat_mul(kleene_closure(h), f).data
    for _ in range(h.rows + 1):
        nxt = _bellman_step(h, x, f)
        if np.array_equal(nxt, x):
            return SemiringMatrix(x, h.semiring)
        x = nxt
    raise NotConverged(h.rows + 1, SemiringMatrix(x, h.semiring))


def jacobi_iterate(h: SemiringMatrix, f: SemiringMatrix, x0: SemiringMatrix,
                   max_iters: int) -> tuple[SemiringMatrix, int]:
    """Jacobi iteration ``X ← H ⊙ X ⊕ F`` (Bellman's algorithm).

    Returns the fixpoint and the number of iterations, counting the one that
    reproduced its input.
    """
    _check_bellman(h, f)
    if x0.shape != f.shape:
        raise ShapeMismatch(f"X0 shape {x0.shape} != F shape {f.shape}")
    x = x0.data
    for it in range(1, max_iters + 1):
        nxt = _bellman_step(h, x, f)
        if np.array_equal(nxt, x):
            return SemiringMatrix(nxt, h.semiring), it
        x = nxt
    raise NotConverged(max_iters, SemiringMatrix(x, h.semiring))


def gauss_seidel_iterate(h: SemiringMatrix, f: SemiringMatrix, x0: SemiringMatrix,
                         max_iters: int) -> tuple[SemiringMatrix, int]:
    """Gauss-Seidel sweeps (Ford's algorithm).

    Rows are updated in ascending index order, each row using the rows already
    updated earlier in the same sweep.
    """
    _check_bellman(h, f)
    if x0.shape != f.shape:
        raise ShapeMismatch(f"X0 shape {x0.shape} != F shape {f.shape}")
    s = h.semiring
    x = np.array(x0.data, dtype=float)
    hd = h.data
    fd = f.data
    for sweep in range(1, max_iters + 1):
        changed = False
        for i in range(h.rows):
            row = s.add_arrays(s.sum_reduce(s.mul_arrays(hd[i, :, None], x), axis=0), fd[i])
            if not np.array_equal(row, x[i]):
                changed = True
                x[i] = row
        if not changed:
            return SemiringMatrix(x, s), sweep
    raise NotConverged(max_iters, SemiringMatrix(x, s))


@dataclass(frozen=True)
class WeightedDigraph:
    node_count: int
    edges: tuple[tuple[int, int, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v), float(w)) for u, v, w in self.edges))
        for u, v, _ in self.edges:
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"edge ({u}, {v}) out of range for {self.node_count} nodes")

    def to_matrix(self, semiring: Semiring = MINPLUS, transpose: bool = False) -> SemiringMatrix:
        """Adjacency matrix ``H[u, v] = w``; parallel edges combine by ⊕."""
        a = np.full((self.node_count, self.node_count), semiring.zero_float)
        for u, v, w in self.edges:
            i, j = (v, u) if transpose else (u, v)
            a[i, j] = semiring.to_float(semiring.add(semiring.from_float(a[i, j]), w))
        return SemiringMatrix(a, semiring)


def shortest_paths(g: WeightedDigraph, source: int,
                   semiring: Semiring = MINPLUS) -> list[ExtendedScalar]:
    """Optimal path weights from ``source`` to every node.

    Solves ``X = Hᵀ ⊙ X ⊕ e_source`` so that ``X[v]`` aggregates over paths
    ending at ``v``; unreachable nodes get the semiring zero.
    """
    if not 0 <= source < g.node_count:
        raise ValueError(f"source {source} out of range")
    h = g.to_matrix(semiring, transpose=True)
    f = SemiringMatrix.unit_column(g.node_count, source, semiring)
    return solve_bellman(h, f).column(0)
