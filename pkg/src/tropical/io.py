"""Plain-text readers and writers shared by the command-line tool.

Numbers are written with 12 significant digits (``%.12g``) and infinities as
the tokens ``inf``/``-inf``.  Every reader ignores blank lines and ``#``
comment lines, so run manifests can sit at the top of any file.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence, TextIO

import numpy as np

from .calculus import GridFunction
from .convex import Polytope
from .dequantize import GeneralizedPolynomial
from .linalg import WeightedDigraph
from .semiring import MAXPLUS, Semiring


class FormatError(ValueError):
    """Malformed input file."""


def fmt(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        raise ValueError("NaN cannot be serialized")
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    return "%.12g" % x


def fmt_row(values: Iterable[float], sep: str = " ") -> str:
    return sep.join(fmt(v) for v in values)


def parse_number(token: str) -> float:
    t = token.strip().lower()
    if t in ("inf", "+inf"):
        return math.inf
    if t == "-inf":
        return -math.inf
    try:
        x = float(t)
    except ValueError:
        raise FormatError(f"not a number: {token!r}") from None
    if math.isnan(x):
        raise FormatError("NaN is not allowed")
    return x


def parse_list(text: str) -> list[float]:
    """Comma-separated numbers, e.g. ``0.25,0.125``."""
    return [parse_number(t) for t in text.split(",") if t.strip()]


def _tokens(line: str) -> list[str]:
    return line.replace(",", " ").split()


def data_lines(text: str) -> list[str]:
    return [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def comment_lines(text: str) -> list[str]:
    return [ln.lstrip()[1:].strip() for ln in text.splitlines() if ln.lstrip().startswith("#")]


def _read(src) -> str:
    if hasattr(src, "read"):
        return src.read()
    with open(src, encoding="utf-8") as fh:
        return fh.read()


# -- graphs -------------------------------------------------------------------


def parse_graph(text: str) -> WeightedDigraph:
    """``n m`` then ``m`` lines ``u v w`` with 0-based node indices."""
    lines = data_lines(text)
    if not lines:
        raise FormatError("empty graph file")
    head = lines[0].split()
    if len(head) != 2:
        raise FormatError("first line must be 'n m'")
    n, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise FormatError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        t = ln.split()
        if len(t) != 3:
            raise FormatError(f"edge line must be 'u v w': {ln!r}")
        edges.append((int(t[0]), int(t[1]), parse_number(t[2])))
    return WeightedDigraph(n, tuple(edges))


def format_graph(g: WeightedDigraph) -> str:
    out = [f"{g.node_count} {len(g.edges)}"]
    out += [f"{u} {v} {fmt(w)}" for u, v, w in g.edges]
    return "\n".join(out) + "\n"


def format_distances(values: Sequence[float]) -> str:
    return "".join(f"{i} {fmt(v)}\n" for i, v in enumerate(values))


def parse_distances(text: str) -> list[float]:
    out = []
    for i, ln in enumerate(data_lines(text)):
        t = ln.split()
        if len(t) != 2 or int(t[0]) != i:
            raise FormatError(f"bad distance line {ln!r}")
        out.append(parse_number(t[1]))
    return out


# -- polynomials --------------------------------------------------------------


def parse_polynomial(text: str) -> GeneralizedPolynomial:
    """One term per line: ``re im d1 [d2 [d3]]``."""
    terms = []
    n = None
    for ln in data_lines(text):
        t = [parse_number(x) for x in _tokens(ln)]
        if not 3 <= len(t) <= 5:
            raise FormatError(f"term line needs 're im d1 [d2 [d3]]': {ln!r}")
        d = t[2:]
        if n is None:
            n = len(d)
        elif len(d) != n:
            raise FormatError("all terms must have the same number of exponents")
        terms.append((complex(t[0], t[1]), d))
    if n is None:
        raise FormatError("empty polynomial file")
    return GeneralizedPolynomial(terms, n)


def format_polynomial(f: GeneralizedPolynomial) -> str:
    return "".join(f"{fmt(c.real)} {fmt(c.imag)} {fmt_row(d)}\n" for c, d in f.terms)


# -- grid functions -----------------------------------------------------------


def parse_grid(text: str, semiring: Semiring = MAXPLUS) -> GridFunction:
    """Header ``# dim step origin extent`` then one value per line.

    For 2-D grids step, origin and extent are comma-separated pairs and the
    values are listed in row-major order.
    """
    header = None
    for c in comment_lines(text):
        parts = c.split()
        if len(parts) == 4 and parts[0] in ("1", "2"):
            header = parts
            break
    if header is None:
        raise FormatError("missing '# dim step origin extent' header")
    dim = int(header[0])
    step, origin = parse_list(header[1]), parse_list(header[2])
    extent = [int(x) for x in header[3].split(",")]
    if not len(step) == len(origin) == len(extent) == dim:
        raise FormatError("header fields do not match the dimension")
    values = [parse_number(ln) for ln in data_lines(text)]
    if len(values) != int(np.prod(extent)):
        raise FormatError(f"expected {int(np.prod(extent))} values, found {len(values)}")
    return GridFunction(np.array(values).reshape(extent), origin, step, semiring)


def format_grid(g: GridFunction) -> str:
    head = "# {} {} {} {}\n".format(
        g.dim, fmt_row(g.step, ","), fmt_row(g.origin, ","), ",".join(str(k) for k in g.shape))
    return head + "".join(fmt(v) + "\n" for v in g.values.reshape(-1))


# -- polytopes and point clouds -----------------------------------------------


def parse_points(text: str) -> np.ndarray:
    """One point per line, coordinates separated by whitespace or commas."""
    rows = [[parse_number(x) for x in _tokens(ln)] for ln in data_lines(text)]
    if not rows:
        raise FormatError("no points")
    if len({len(r) for r in rows}) != 1:
        raise FormatError("points have different numbers of coordinates")
    return np.array(rows, dtype=float)


def format_points(points, sep: str = " ") -> str:
    return "".join(fmt_row(p, sep) + "\n" for p in np.atleast_2d(points))


def parse_polytope(text: str) -> Polytope:
    return Polytope(parse_points(text))


def format_polytope(p: Polytope) -> str:
    return format_points(p.vertices)


def read_text(src) -> str:
    return _read(src)


def write_text(dest: TextIO | str, text: str):
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
