"""JSON and DOT input/output.

Levels are stored together with the inputs that produced them; loading
rebuilds the hierarchy from those inputs and checks that it matches the
stored data.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

from ..constants import ParameterSchedule
from ..graph import Graph, GraphError
from ..hierarchy import Hierarchy
from ..iso import Coloring
from ..verify import VerificationReport

DOT_PALETTE = (
    "#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4", "#46f0f0", "#f032e6",
    "#bcf60c", "#fabebe", "#008080", "#e6beff", "#9a6324", "#fffac8", "#800000", "#aaffc3",
)

PathLike = Union[str, Path]


class FormatError(ValueError):
    pass


def read_json(path: PathLike) -> Any:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError("%s:%d:%d: %s" % (path, exc.lineno, exc.colno, exc.msg)) from None


def write_json(path: PathLike, data: Any) -> None:
    Path(path).write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")


def _need(d: Dict, key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise FormatError("%s: missing key %r" % (where, key))
    return d[key]


# -- graphs -------------------------------------------------------------------------------------


def graph_to_dict(g: Graph) -> dict:
    return g.to_dict()


def graph_from_dict(d: dict, where: str = "graph") -> Graph:
    _need(d, "vertices", where)
    _need(d, "edges", where)
    try:
        return Graph.from_dict(d)
    except (GraphError, TypeError, ValueError) as exc:
        raise FormatError("%s: %s" % (where, exc)) from None


def save_graph(g: Graph, path: PathLike) -> None:
    write_json(path, graph_to_dict(g))


def load_graph(path: PathLike) -> Graph:
    return graph_from_dict(read_json(path), str(path))


# -- colourings ----------------------------------------------------------------------------------


def coloring_to_dict(c: Coloring, n: Optional[int] = None, manifest: Optional[dict] = None) -> dict:
    n = len(c) if n is None else n
    return {"colors": [c[v] for v in range(n)], "palette": c.palette_bound, "manifest": manifest or {}}


def coloring_from_dict(d: dict, where: str = "coloring") -> Coloring:
    colors = _need(d, "colors", where)
    try:
        return Coloring.from_sequence(colors, d.get("palette"))
    except ValueError as exc:
        raise FormatError("%s: %s" % (where, exc)) from None


def save_coloring(c: Coloring, path: PathLike, manifest: Optional[dict] = None) -> None:
    write_json(path, coloring_to_dict(c, manifest=manifest))


def load_coloring(path: PathLike) -> Coloring:
    return coloring_from_dict(read_json(path), str(path))


def load_manifest(path: PathLike) -> dict:
    return read_json(path).get("manifest", {})


# -- levels -------------------------------------------------------------------------------------


def levels_to_dict(hier: Hierarchy, options: Optional[dict] = None) -> dict:
    out = hier.to_dict()
    out["schedule"] = hier.schedule.to_dict()
    out["options"] = dict(options or {})
    out["options"].setdefault("split", [lv.split_policy for lv in hier.levels])
    return out


def save_levels(hier: Hierarchy, path: PathLike, options: Optional[dict] = None) -> None:
    write_json(path, levels_to_dict(hier, options))


def levels_from_dict(d: dict, g: Graph, where: str = "levels") -> Hierarchy:
    sched = ParameterSchedule.from_dict(_need(d, "schedule", where))
    opts = d.get("options", {})
    stored = _need(d, "levels", where)
    hier = Hierarchy(g, sched, levels=len(stored), basepoint=d.get("basepoint"),
                     split=opts.get("split", "formula"), y_separation=d.get("y_separation", "strict"))
    for lv, rec in zip(hier.levels, stored):
        if list(lv.order) != list(rec["members"]):
            raise FormatError("%s: level %d does not match a rebuild from its inputs" % (where, lv.n))
    return hier


def load_levels(path: PathLike, g: Graph) -> Hierarchy:
    return levels_from_dict(read_json(path), g, str(path))


def load_options(path: PathLike) -> dict:
    return read_json(path).get("options", {})


# -- reports ------------------------------------------------------------------------------------


def save_report(rep: VerificationReport, path: PathLike, extra: Optional[dict] = None) -> None:
    d = rep.to_dict()
    if extra:
        d.update(extra)
    write_json(path, d)


def load_report(path: PathLike) -> VerificationReport:
    return VerificationReport.from_dict(read_json(path))


# -- DOT ----------------------------------------------------------------------------------------


def to_dot(g: Graph, coloring: Optional[Coloring] = None, name: str = "X") -> str:
    lines = ["graph %s {" % name, "  node [style=filled, shape=circle];"]
    for v in g.vertices():
        if coloring is not None and v in coloring:
            c = coloring[v]
            lines.append('  %d [label="%d:%d", fillcolor="%s"];' % (v, v, c, DOT_PALETTE[c % len(DOT_PALETTE)]))
        else:
            lines.append("  %d;" % v)
    for u, v in g.edges():
        lines.append("  %d -- %d;" % (u, v))
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(g: Graph, coloring: Optional[Coloring], path: PathLike) -> None:
    Path(path).write_text(to_dot(g, coloring))
