"""Command-line front end.

Every analysis subcommand reads one graph file and emits a report: JSON with
``--json``, tab-separated ``key<TAB>value`` lines otherwise. Exit status is 0 on
success, 1 on input errors and 2 when an analysis is refused.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .core import GraphError
from .dismantle import (
    DismantleError,
    EliminationOrder,
    dismantle_to_copwin_bound,
    greedy_dismantling,
    sieve_approx,
    sieve_approx_localized,
    sieve_approx_wm,
    verify_order,
)
from .filling import FillingError, build_filling, validate_filling
from .game import solve_game
from .generators import FamilySpec, generate
from .io import emit_dimacs, emit_edgelist, parse_graph
from .metric import (
    HalfInt,
    base_point_delta,
    exact_hyperbolicity,
    interval_thinness,
    is_block_graph,
    is_median_graph,
    is_weakly_modular,
    local_hyperbolicity_scan,
    metric_triangle_census,
)

SCHEMA = 1
EXACT_CAP = 400
EXIT_OK, EXIT_INPUT, EXIT_REFUSED = 0, 1, 2


class Refused(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _jsonable(value):
    if isinstance(value, HalfInt):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "item"):  # numpy scalars
        return value.item()
    return value


def write_report(report: dict, mode: str = "json", out=None) -> None:
    """Serialise with stable field order; ``mode`` is ``json`` or ``table``."""
    report = _jsonable(report)
    if mode == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        rows = []

        def walk(prefix, obj):
            if isinstance(obj, dict):
                for k, v in obj.items():
                    walk(f"{prefix}.{k}" if prefix else k, v)
            elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
                rows.append(f"{prefix}\t{json.dumps(obj)}")
            elif isinstance(obj, list):
                rows.append(f"{prefix}\t{','.join(map(str, obj))}")
            else:
                rows.append(f"{prefix}\t{obj}")

        walk("", report)
        text = "\n".join(rows) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _threads(args) -> int:
    n = args.threads if args.threads is not None else int(os.environ.get("HYPERCOP_THREADS", "1"))
    return n if n > 0 else (os.cpu_count() or 1)


def _vertex(g, label: str) -> int:
    for i, lab in enumerate(g.labels):
        if str(lab) == label:
            return i
    raise InputError(f"unknown vertex label {label!r}")


def _order_report(g, ord: EliminationOrder) -> dict:
    lab = g.labels
    return {
        "order": [lab[v] for v in ord.order],
        "eliminator": {str(lab[v]): lab[u] for v, u in sorted(ord.eliminator.items(), key=lambda kv: ord.order.index(kv[0]))},
    }


def _read_order(path: str, g, s: int, sp: int, star: bool) -> EliminationOrder:
    """One vertex per line in order; non-first lines carry ``vertex eliminator``."""
    order, elim = [], {}
    for no, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        if len(parts) > 2:
            raise InputError(f"{path}:{no}: expected 'vertex [eliminator]'")
        v = _vertex(g, parts[0])
        order.append(v)
        if len(parts) == 2:
            elim[v] = _vertex(g, parts[1])
    if sorted(order) != list(range(g.n)):
        raise InputError(f"{path}: order must list every vertex exactly once")
    return EliminationOrder(tuple(order), elim, s, sp, star)


def cmd_exact(g, dm, args):
    if g.n > args.cap and not args.force:
        raise Refused(f"exact oracle refused for n={g.n} > cap {args.cap}; pass --force")
    return {"op": "exact_hyperbolicity", "delta": exact_hyperbolicity(g, dm, workers=_threads(args))}


def cmd_base(g, dm, args):
    u = _vertex(g, args.root) if args.root is not None else 0
    du = base_point_delta(g, dm, u)
    return {"op": "base_point_delta", "root": g.labels[u], "delta_u": du, "upper": du * 2}


def cmd_approx(g, dm, args):
    if args.wm:
        if not is_weakly_modular(g, dm):
            raise Refused("--wm needs a weakly modular graph")
        res, op = sieve_approx_wm(g, dm), "sieve_approx_wm"
    elif args.localized:
        res, op = sieve_approx_localized(g), "sieve_approx_localized"
    else:
        res, op = sieve_approx(g, dm), "sieve_approx"
    sieve = {"alpha": res.alpha, "lower": res.lower, "upper": res.upper, "pops": res.pops}
    if is_block_graph(g):
        # exact answer; the sieve fields ride along so every report has them
        return {"op": "is_block_graph", "delta": HalfInt(0), "method": "block-graph", "sieve_op": op, **sieve}
    return {"op": op, **sieve}


def cmd_dismantle(g, dm, args):
    ord = greedy_dismantling(g, dm, args.s, args.sp, args.star)
    out = {"op": "greedy_dismantling", "s": args.s, "s_prime": args.sp, "star": args.star,
           "dismantlable": ord is not None}
    if ord is not None:
        out.update(_order_report(g, ord))
        if args.sp < args.s:
            out["hyperbolicity_bound"] = dismantle_to_copwin_bound(ord, weakly_modular=is_weakly_modular(g, dm))
    return out


def cmd_copwin(g, dm, args):
    sol = solve_game(g, dm, args.s, args.sp)
    out = {"op": "solve_game", "s": args.s, "s_prime": args.sp, "copwin": sol.copwin,
           "best_start": None if sol.best_start is None else g.labels[sol.best_start]}
    if sol.copwin and g.n > 1:
        c = sol.best_start
        out["capture_time"] = max(int(sol.cop_steps[c, r]) for r in range(g.n) if r != c)
    return out


def cmd_fill(g, dm, args):
    if args.sp >= args.s:
        raise Refused("fillings need s' < s")
    loop = [_vertex(g, t.strip()) for t in args.loop.split(",") if t.strip()]
    ord = greedy_dismantling(g, dm, args.s, args.sp, star=True)
    if ord is None:
        raise Refused(f"graph is not ({args.s},{args.sp})*-dismantlable")
    try:
        fill = build_filling(g, dm, loop, ord)
    except FillingError as exc:
        raise InputError(str(exc)) from exc
    rep = validate_filling(g, dm, loop, fill, args.s + args.sp, 1, 2 * (args.s - args.sp))
    return {
        "op": "build_filling",
        "N": args.s + args.sp,
        "faces": len(fill.faces),
        "area_bound": -(-len(loop) // (2 * (args.s - args.sp))),
        "valid": rep.ok,
        "failures": rep.failures,
        "filling": {"n": fill.disc_vertex_count, "external": fill.external, "faces": fill.faces,
                    "phi": [g.labels[v] for v in fill.phi]},
    }


def cmd_scan(g, dm, args):
    if g.n > args.cap and not args.force:
        raise Refused(f"scan refused for n={g.n} > cap {args.cap}; pass --force")
    return {"op": "local_hyperbolicity_scan", "radius": args.radius,
            "delta": local_hyperbolicity_scan(g, dm, args.radius)}


def cmd_census(g, dm, args):
    mu, tris = metric_triangle_census(g, dm)
    return {
        "op": "metric_triangle_census",
        "mu_max": mu,
        "metric_triangles": len(tris),
        "interval_thinness": interval_thinness(g, dm),
        "weakly_modular": is_weakly_modular(g, dm),
        "median": is_median_graph(g, dm),
        "block_graph": is_block_graph(g),
    }


def cmd_verify_order(g, dm, args):
    ord = _read_order(args.order_file, g, args.s, args.sp, args.star)
    bad = verify_order(g, dm, ord)
    out = {"op": "verify_order", "s": args.s, "s_prime": args.sp, "star": args.star, "valid": bad is None}
    if bad is not None:
        out["violation"] = {"vertex": g.labels[bad.vertex], "reason": bad.reason,
                            "escaping": sorted(g.labels[v] for v in bad.escaping)}
    return out


ANALYSES = {
    "exact": cmd_exact,
    "base": cmd_base,
    "approx": cmd_approx,
    "dismantle": cmd_dismantle,
    "copwin": cmd_copwin,
    "fill": cmd_fill,
    "scan": cmd_scan,
    "census": cmd_census,
    "verify-order": cmd_verify_order,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hypercop", description="Gromov hyperbolicity, dismantling orders and cop-and-robber games.")
    p.add_argument("--version", action="version", version=f"hypercop {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("graph", help="graph file")
    common.add_argument("--format", choices=("edgelist", "dimacs"), default="edgelist")
    common.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    common.add_argument("-o", "--output", help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, help="worker threads, 0 = auto (env HYPERCOP_THREADS)")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings")
    common.add_argument("--cap", type=int, default=EXACT_CAP, help="vertex cap for O(n^4) analyses")
    common.add_argument("--force", action="store_true", help="ignore --cap")

    def speeds(sp, star=False):
        sp.add_argument("--s", type=int, required=True, help="robber speed / ball radius")
        sp.add_argument("--sp", type=int, required=True, help="cop speed / covering radius")
        if star:
            sp.add_argument("--star", action="store_true", help="starred (unpunctured) balls")

    sub.add_parser("exact", parents=[common], help="exact hyperbolicity, O(n^4)")
    b = sub.add_parser("base", parents=[common], help="base-point 2-approximation")
    b.add_argument("--root")
    a = sub.add_parser("approx", parents=[common], help="stack-sieve approximation")
    mode = a.add_mutually_exclusive_group()
    mode.add_argument("--wm", action="store_true", help="weakly modular variant")
    mode.add_argument("--localized", action="store_true", help="adjacency-only variant")
    speeds(sub.add_parser("dismantle", parents=[common], help="greedy (s,s')-dismantling"), star=True)
    speeds(sub.add_parser("copwin", parents=[common], help="solve the (s,s') cop-and-robber game"))
    f = sub.add_parser("fill", parents=[common], help="fill a loop from a starred order")
    speeds(f)
    f.add_argument("--loop", required=True, help="comma-separated vertex labels")
    sc = sub.add_parser("scan", parents=[common], help="max hyperbolicity of R-balls")
    sc.add_argument("--radius", type=int, required=True)
    sub.add_parser("census", parents=[common], help="metric triangles and graph-class tests")
    v = sub.add_parser("verify-order", parents=[common], help="check a dismantling order file")
    v.add_argument("--order-file", required=True)
    speeds(v, star=True)

    gen = sub.add_parser("gen", help="emit a generated graph")
    gen.add_argument("family")
    gen.add_argument("params", nargs="*", type=int)
    gen.add_argument("--seed", type=int)
    gen.add_argument("--format", choices=("edgelist", "dimacs"), default="edgelist")
    gen.add_argument("-o", "--output")
    return p


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            g = generate(FamilySpec(args.family, tuple(args.params), args.seed))
            text = emit_edgelist(g) if args.format == "edgelist" else emit_dimacs(g)
            if args.output:
                Path(args.output).write_text(text)
            else:
                sys.stdout.write(text)
            return EXIT_OK
        raw = Path(args.graph).read_bytes()
        g = parse_graph(raw.decode("utf-8"), args.format)
        t0 = time.perf_counter()
        dm = None if (args.command == "approx" and args.localized) else g.distances()
        t1 = time.perf_counter()
        result = ANALYSES[args.command](g, dm, args)
        t2 = time.perf_counter()
        report = {
            "schema": SCHEMA,
            "tool": "hypercop",
            "version": __version__,
            "command": args.command,
            "input_sha256": hashlib.sha256(raw).hexdigest(),
            "graph": {"n": g.n, "m": g.edge_count, "diameter": None if dm is None else int(dm.max())},
            "result": result,
        }
        if args.timings:
            report["timings"] = {"distances_s": round(t1 - t0, 6), "analysis_s": round(t2 - t1, 6)}
        write_report(report, "json" if args.json else "table", args.output)
        return EXIT_OK
    except Refused as exc:
        print(f"hypercop: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (GraphError, InputError, DismantleError, OSError, UnicodeDecodeError, ValueError) as exc:
        print(f"hypercop: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
