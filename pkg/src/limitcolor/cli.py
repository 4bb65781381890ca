"""Command-line interface: ``limitcolor <command> ...``; every output is JSON."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from .constants import build_schedule
from .palette import Palette
from .verify import check_aperiodic_finite, check_level_invariants
from .workbench import io
from .workbench.dnum import distinguishing_index, distinguishing_number
from .workbench.generators import generate
from .workbench.pipeline import RunConfig, finitary_lines, run_pipeline


def _ints(text: str) -> List[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _emit(data, out: Optional[str]) -> None:
    text = json.dumps(data, indent=1, sort_keys=True, default=str)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def cmd_gen(a) -> int:
    params = dict(p.split("=", 1) for p in a.param)
    g = generate(a.kind, **params)
    _emit(g.to_dict(), a.out)
    return 0


def cmd_constants(a) -> int:
    eps = _ints(a.eps) if a.eps else None
    if a.mode == "desk":
        sched = build_schedule("desk", a.degree, eps, r=_ints(a.r), s=_ints(a.s))
    else:
        sched = build_schedule("paper", a.degree, eps, levels=a.levels)
    _emit(sched.to_dict(), a.out)
    return 0


def cmd_levels(a) -> int:
    g = io.load_graph(a.graph)
    cfg = RunConfig.load(a.config)
    sched = cfg.make_schedule(g)
    hier = cfg.make_hierarchy(g, sched)
    io.save_levels(hier, a.out, cfg.palette_options())
    return 0


def _palette_from(levels_path, hier) -> Palette:
    opts = io.load_options(levels_path)
    return Palette(hier, canonical=opts.get("canonical", True), corona_inner=opts.get("corona_inner", 10),
                   n_separation=opts.get("n_separation"), capacity=opts.get("capacity", "realized"))


def cmd_color(a) -> int:
    g = io.load_graph(a.graph)
    hier = io.load_levels(a.levels, g)
    pal = _palette_from(a.levels, hier)
    phi = pal.build_phi(a.N)
    manifest = {"levels": str(a.levels), "top": phi.top, "options": io.load_options(a.levels),
                "indices": {str(n): {str(x): i for x, i in v.items()} for n, v in phi.indices.items()}}
    io.save_coloring(phi.coloring, a.out, manifest)
    return 0


def cmd_verify(a) -> int:
    g = io.load_graph(a.graph)
    col = io.load_coloring(a.coloring)
    extra = {}
    if a.levels:
        hier = io.load_levels(a.levels, g)
        pal = _palette_from(a.levels, hier)
        rep = check_level_invariants(hier, palette=pal, coloring=col, margin=a.margin)
    else:
        from .verify import VerificationReport

        rep = VerificationReport()
    delta = a.delta if a.delta == "sweep" else int(a.delta)
    fin, found = finitary_lines(g, col, a.eps, delta, a.delta_max, a.margin)
    rep.extend(fin)
    extra["delta"] = found
    if a.report:
        io.save_report(rep, a.report, extra)
    print(rep.summary())
    return 0 if rep.ok else 1


def cmd_dnum(a) -> int:
    g = io.load_graph(a.graph)
    _emit({"distinguishing_number": distinguishing_number(g, a.cap)}, a.out)
    return 0


def cmd_dindex(a) -> int:
    g = io.load_graph(a.graph)
    _emit({"distinguishing_index": distinguishing_index(g, a.cap)}, a.out)
    return 0


def cmd_aperiodic(a) -> int:
    g = io.load_graph(a.graph)
    rep = check_aperiodic_finite(g, io.load_coloring(a.coloring), a.cap)
    print(rep.summary())
    return 0 if rep.ok else 1


def cmd_export_dot(a) -> int:
    g = io.load_graph(a.graph)
    col = io.load_coloring(a.coloring) if a.coloring else None
    io.export_dot(g, col, a.out)
    return 0


def cmd_pipeline(a) -> int:
    cfg = RunConfig.load(a.config)
    res = run_pipeline(cfg, a.outdir)
    print(res.report.summary())
    return 0 if res.report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="limitcolor", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="generate a graph")
    s.add_argument("kind")
    s.add_argument("param", nargs="*", help="key=value generator parameters")
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("constants", help="compute a parameter schedule")
    s.add_argument("--mode", choices=("desk", "paper"), default="desk")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--r", default="")
    s.add_argument("--s", default="")
    s.add_argument("--eps")
    s.add_argument("--levels", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("levels", help="build the hierarchy")
    s.add_argument("--graph", required=True)
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_levels)

    s = sub.add_parser("color", help="build the colouring")
    s.add_argument("--graph", required=True)
    s.add_argument("--levels", required=True)
    s.add_argument("--N", type=int)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_color)

    s = sub.add_parser("verify", help="verify a colouring")
    s.add_argument("--graph", required=True)
    s.add_argument("--coloring", required=True)
    s.add_argument("--levels")
    s.add_argument("--eps", type=int, default=4)
    s.add_argument("--delta", default="sweep")
    s.add_argument("--delta-max", type=int, default=16)
    s.add_argument("--margin", type=int)
    s.add_argument("--report")
    s.set_defaults(func=cmd_verify)

    for name, func, text in (("dnum", cmd_dnum, "distinguishing number"),
                             ("dindex", cmd_dindex, "distinguishing index")):
        s = sub.add_parser(name, help=text)
        s.add_argument("--graph", required=True)
        s.add_argument("--cap", type=int, default=64)
        s.add_argument("--out")
        s.set_defaults(func=func)

    s = sub.add_parser("aperiodic", help="check a finite colouring has no symmetry")
    s.add_argument("--graph", required=True)
    s.add_argument("--coloring", required=True)
    s.add_argument("--cap", type=int, default=64)
    s.set_defaults(func=cmd_aperiodic)

    s = sub.add_parser("export-dot", help="write Graphviz DOT")
    s.add_argument("--graph", required=True)
    s.add_argument("--coloring")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_export_dot)

    s = sub.add_parser("pipeline", help="gen, constants, levels, color and verify in one run")
    s.add_argument("--config", required=True)
    s.add_argument("--outdir")
    s.set_defaults(func=cmd_pipeline)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
