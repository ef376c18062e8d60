"""Command-line entry point: ``tropical <subcommand> ...``.

Every output starts with a run manifest of ``# key: value`` lines (command,
resolved parameters, input digests, version).  Domain errors exit with status
1 and print ``ErrorName: message``; usage errors exit with status 2.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys
from typing import Callable

import numpy as np

from . import __version__
from . import amoeba as am
from . import calculus as calc
from . import convex as cx
from . import dequantize as dq
from . import fractal as fr
from . import hjb
from . import io
from . import linalg as la
from .errors import LawViolation, TropicalError
from .semiring import (MAXPLUS, MINPLUS, check_axioms, dequantized_add_limit_gap,
                       parse_semiring, random_scalars)


class UsageError(Exception):
    pass


class Run:
    """Collects manifest entries and output text for one invocation."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.inputs: list[tuple[str, str]] = []

    def read(self, path: str) -> str:
        try:
            with open(path, "rb") as fh:
                raw = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        self.inputs.append((os.path.basename(path), hashlib.sha256(raw).hexdigest()))
        return raw.decode("utf-8")

    def manifest(self) -> str:
        lines = [f"command: {self.args.command}"]
        skip = {"command", "func", "out", "outdir", "quiet"}
        for key in sorted(vars(self.args)):
            if key in skip:
                continue
            val = getattr(self.args, key)
            if val is None:
                continue
            if isinstance(val, list):
                val = " ".join(str(v) for v in val)
            lines.append(f"param {key}: {val}")
        lines += [f"input {name} sha256: {digest}" for name, digest in self.inputs]
        lines.append(f"version: {__version__}")
        return "".join(f"# {ln}\n" for ln in lines)

    def emit(self, body: str):
        text = self.manifest() + body
        if self.args.out:
            io.write_text(self.args.out, text)
        else:
            sys.stdout.write(text)

    def emit_file(self, name: str, body: str):
        os.makedirs(self.args.outdir, exist_ok=True)
        path = os.path.join(self.args.outdir, name)
        io.write_text(path, self.manifest() + body)
        self.note(f"wrote {path}")

    def note(self, msg: str):
        if not self.args.quiet:
            print(msg, file=sys.stderr)


def _semiring(args, default):
    s = default if args.semiring is None else parse_semiring(args.semiring)
    args.semiring = str(s)
    return s


# -- subcommands ----------------------------------------------------------------


def cmd_semiring_check(run: Run) -> int:
    a = run.args
    s = _semiring(a, MAXPLUS)
    rng = np.random.default_rng(a.seed)
    cols = [random_scalars(rng, a.count) for _ in range(3)]
    report = check_axioms(s, zip(*cols))
    lines = [f"samples {report.samples}"]
    lines += [f"{law} {n}" for law, n in report.failures.items()]
    bad_gap = 0
    if s.h is not None:
        u = rng.uniform(-50, 50, a.count)
        v = u + rng.uniform(-5, 5, a.count)
        for x, y in zip(u, v):
            g = dequantized_add_limit_gap(float(x), float(y), s.h)
            bad_gap += not 0 <= g <= s.h * math.log(2)
        lines.append(f"gap_bound {bad_gap}")
    run.emit("\n".join(lines) + "\n")
    if not report.ok or bad_gap:
        failed = [k for k, n in report.failures.items() if n] + (["gap_bound"] if bad_gap else [])
        raise LawViolation(", ".join(failed))
    return 0


def _graph(run: Run):
    return io.parse_graph(run.read(run.args.graph))


def cmd_shortest_path(run: Run) -> int:
    a = run.args
    s = _semiring(a, MINPLUS)
    g = _graph(run)
    if not 0 <= a.source < g.node_count:
        raise UsageError(f"--source {a.source} out of range for {g.node_count} nodes")
    h = g.to_matrix(s, transpose=True)
    f = la.SemiringMatrix.unit_column(g.node_count, a.source, s)
    x = _bellman(h, f, a.method)
    run.emit(io.format_distances([s.to_float(v) for v in x.column(0)]))
    return 0


def _bellman(h, f, method: str):
    if method == "closure":
        return la.solve_bellman(h, f)
    x0 = la.SemiringMatrix.zeros(f.rows, f.cols, f.semiring)
    solver = la.jacobi_iterate if method == "jacobi" else la.gauss_seidel_iterate
    # a path uses at most n - 1 edges, so n + 1 sweeps reach and confirm the fixpoint
    return solver(h, f, x0, h.rows + 1)[0]


def cmd_solve_bellman(run: Run) -> int:
    a = run.args
    s = _semiring(a, MINPLUS)
    g = _graph(run)
    h = g.to_matrix(s)
    if a.rhs is not None:
        rhs = [io.parse_number(ln) for ln in io.data_lines(run.read(a.rhs))]
        if len(rhs) != g.node_count:
            raise UsageError(f"--rhs has {len(rhs)} values, graph has {g.node_count} nodes")
        f = la.SemiringMatrix(np.array(rhs)[:, None], s)
    else:
        if not 0 <= a.target < g.node_count:
            raise UsageError(f"--target {a.target} out of range")
        f = la.SemiringMatrix.unit_column(g.node_count, a.target, s)
    x = _bellman(h, f, a.method)
    run.emit(io.format_distances([s.to_float(v) for v in x.column(0)]))
    return 0


def _grid_arg(text: str) -> calc.Grid:
    lo, hi, step = io.parse_list(text)
    return calc.Grid.spanning(lo, hi, step)


def cmd_legendre(run: Run) -> int:
    a = run.args
    s = _semiring(a, MAXPLUS)
    phi = io.parse_grid(run.read(a.grid), s)
    if a.xi is not None:
        xi = _grid_arg(a.xi)
    elif phi.dim == 1:
        lo, hi = calc.suggest_slope_range(phi)
        if s == MINPLUS:
            lo, hi = -hi, -lo
        n = phi.shape[0]
        step = (hi - lo) / (n - 1) if hi > lo and n > 1 else 1.0
        xi = calc.Grid(lo, step, n if hi > lo else 1)
    else:
        raise UsageError("--xi is required for 2-D grids")
    if phi.dim == 2:
        out = calc.legendre_transform(phi, (xi, xi), method=a.method)
    else:
        out = calc.legendre_transform(phi, xi, method=a.method)
    run.emit(io.format_grid(out))
    return 0


def cmd_supconv(run: Run) -> int:
    a = run.args
    s = _semiring(a, MAXPLUS)
    phi = io.parse_grid(run.read(a.phi), s)
    psi = io.parse_grid(run.read(a.psi), s)
    run.emit(io.format_grid(calc.sup_convolution(phi, psi)))
    return 0


def cmd_kernel_apply(run: Run) -> int:
    a = run.args
    s = _semiring(a, MAXPLUS)
    k = calc.Kernel.from_grid_function(io.parse_grid(run.read(a.kernel), s))
    phi = io.parse_grid(run.read(a.phi), s)
    run.emit(io.format_grid(calc.apply_kernel(k, phi)))
    return 0


def _poly(run: Run):
    return io.parse_polynomial(run.read(run.args.poly))


def cmd_tropicalize(run: Run) -> int:
    t = dq.tropicalize(_poly(run), constants=run.args.constants)
    run.emit("".join(f"{io.fmt(c)} {io.fmt_row(d)}\n" for c, d in t.terms))
    return 0


def cmd_newton(run: Run) -> int:
    run.emit(io.format_polytope(dq.newton_set(_poly(run))))
    return 0


def cmd_dequantize(run: Run) -> int:
    a = run.args
    f = _poly(run)
    hs = io.parse_list(a.h)
    points = [io.parse_list(p) for p in a.at] if a.at else [[0.0] * f.n]
    rows = []
    for x in points:
        for h in hs:
            rows.append(io.fmt_row(list(x) + [h, dq.dequantize_h(f, x, h)], ","))
    limit = dq.tropicalize(f)
    if a.limit:
        rows += [io.fmt_row(list(x) + [0.0, limit(x)], ",") for x in points]
    run.emit("\n".join(rows) + "\n")
    return 0


def cmd_polytope(run: Run) -> int:
    a = run.args
    p = io.parse_polytope(run.read(a.p))
    if a.op == "support":
        if a.direction is None:
            raise UsageError("support needs --direction")
        run.emit(io.fmt(cx.support_function(p, io.parse_list(a.direction))) + "\n")
        return 0
    if a.q is None:
        raise UsageError(f"{a.op} needs a second polytope file")
    q = io.parse_polytope(run.read(a.q))
    out = cx.minkowski_sum(p, q) if a.op == "sum" else cx.hull_union(p, q)
    run.emit(io.format_polytope(out))
    return 0


def _grid_values(run: Run, choice: str, grid: calc.Grid, builtins: dict[str, Callable]):
    if choice.startswith("file:"):
        g = io.parse_grid(run.read(choice[5:]), MINPLUS)
        if g.dim != 1 or g.grid(0) != grid:
            raise UsageError(f"{choice} is not on the --grid grid")
        return g.values
    if choice not in builtins:
        raise UsageError(f"unknown choice {choice!r}; use one of {sorted(builtins)} or file:<csv>")
    return builtins[choice](grid.points)


def cmd_hjb(run: Run) -> int:
    a = run.args
    lo, hi, count = io.parse_list(a.grid)
    if count != int(count) or count < 3:
        raise UsageError("--grid needs lo,hi,count with count >= 3")
    count = int(count)
    grid = calc.Grid(lo, (hi - lo) / (count - 1), count)
    init = _grid_values(run, a.init, grid, {"quad": lambda x: x * x / 2, "abs": np.abs})
    pot = _grid_values(run, a.potential, grid, {"zero": np.zeros_like})
    prob = hjb.HJProblem(grid, a.m, pot, init)
    hs = io.parse_list(a.h)
    rep = hjb.dequantization_convergence(prob, a.T, hs, dt=a.dt)
    run.emit_file("hjb_limit.csv", io.format_grid(rep.limit))
    for k, sol in enumerate(rep.viscous):
        run.emit_file(f"hjb_h{k}.csv", io.format_grid(sol))
    run.emit("".join(f"{io.fmt(h)} {io.fmt(g)}\n" for h, g in zip(rep.h_values, rep.gaps)))
    return 0


def cmd_boxdim(run: Run) -> int:
    a = run.args
    cloud = fr.PointCloud(io.parse_points(run.read(a.cloud)))
    est, sweep = fr.hb_dimension(cloud, io.parse_list(a.scales))
    rows = [f"{io.fmt(r)} {n} {io.fmt(q) if not math.isnan(q) else 'nan'}"
            for r, n, q in zip(sweep.scales, sweep.counts, sweep.ratios)]
    rows.append(f"estimate {io.fmt(est)}")
    run.emit("\n".join(rows) + "\n")
    return 0


def cmd_amoeba(run: Run) -> int:
    a = run.args
    curve = am.PlaneCurve(_poly(run))
    window = io.parse_list(a.window)
    if len(window) != 4:
        raise UsageError("--window needs x0,x1,y0,y1")
    trop = am.tropical_curve(curve)
    run.emit_file("tropical.csv", io.format_points(trop.clipped_segments(window)))
    rows = []
    for k, h in enumerate(io.parse_list(a.h)):
        sample = am.sample_amoeba(curve, h, a.samples, window, a.angles)
        run.emit_file(f"amoeba_h{k}.csv", io.format_points(sample.points, ","))
        d = am.hausdorff_distance(sample.points, trop, window)
        rows.append(f"{io.fmt(h)} {len(sample.points)} {sample.rejected} {io.fmt(d)}")
    run.emit("\n".join(rows) + "\n")
    return 0


# -- parser -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--semiring", default=None,
                        help="maxplus | minplus | subtropical:<h> (default depends on command)")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--quiet", action="store_true", help="suppress progress messages")

    parser = _Parser(prog="tropical", description="Tropical and idempotent mathematics toolkit.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.set_defaults(func=func)
        return p

    p = add("semiring-check", cmd_semiring_check, "randomized semiring-law check")
    p.add_argument("--count", type=int, default=10_000)

    methods = ("closure", "jacobi", "gauss-seidel")
    p = add("shortest-path", cmd_shortest_path, "single-source optimal path weights")
    p.add_argument("graph")
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--method", choices=methods, default="closure")

    p = add("solve-bellman", cmd_solve_bellman, "least solution of X = H X + F")
    p.add_argument("graph")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--rhs", help="file with one F value per node")
    g.add_argument("--target", type=int, help="F is the unit vector at this node")
    p.add_argument("--method", choices=methods, default="closure")

    p = add("legendre", cmd_legendre, "Legendre transform of a grid function")
    p.add_argument("grid")
    p.add_argument("--xi", help="lo,hi,step of the slope grid")
    p.add_argument("--method", choices=("auto", "brute", "fast"), default="auto")

    p = add("supconv", cmd_supconv, "sup-convolution of two grid functions")
    p.add_argument("phi")
    p.add_argument("psi")

    p = add("kernel-apply", cmd_kernel_apply, "apply a 2-D kernel to a grid function")
    p.add_argument("kernel")
    p.add_argument("phi")

    p = add("tropicalize", cmd_tropicalize, "tropical limit of a polynomial")
    p.add_argument("poly")
    p.add_argument("--constants", action="store_true", help="keep log|a| offsets")

    p = add("newton", cmd_newton, "Newton polytope vertices")
    p.add_argument("poly")

    p = add("dequantize", cmd_dequantize, "h log|f(exp(x/h))| at sample points")
    p.add_argument("poly")
    p.add_argument("--h", required=True, help="comma-separated h values")
    p.add_argument("--at", action="append", help="comma-separated point; repeatable")
    p.add_argument("--limit", action="store_true", help="also print the h -> 0 limit (h = 0 rows)")

    p = add("polytope", cmd_polytope, "Minkowski sum, hull of union or support function")
    p.add_argument("op", choices=("sum", "hullunion", "support"))
    p.add_argument("p")
    p.add_argument("q", nargs="?")
    p.add_argument("--direction", help="comma-separated direction for support")

    p = add("hjb", cmd_hjb, "Hopf-Lax evolution against its viscous regularizations")
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=None, help="Hopf-Lax step (default: T)")
    p.add_argument("--h", default="0.4,0.2,0.1,0.05")
    p.add_argument("--init", default="quad", help="quad | abs | file:<csv>")
    p.add_argument("--potential", default="zero", help="zero | file:<csv>")
    p.add_argument("--grid", default="-4,4,401", help="lo,hi,count")
    p.add_argument("--outdir", default=".")

    p = add("boxdim", cmd_boxdim, "box-counting dimension of a point cloud")
    p.add_argument("cloud")
    p.add_argument("--scales", required=True)

    p = add("amoeba", cmd_amoeba, "amoeba samples and tropical curve of a plane curve")
    p.add_argument("poly")
    p.add_argument("--h", default="1,0.5,0.25,0.1,0.05")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--angles", type=int, default=64)
    p.add_argument("--window", default="-3,3,-3,3")
    p.add_argument("--outdir", default=".")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.semiring is not None:
            try:
                parse_semiring(args.semiring)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        return args.func(Run(args))
    except UsageError as exc:
        print(f"tropical {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (TropicalError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
