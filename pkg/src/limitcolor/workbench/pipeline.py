"""Run configuration and the end-to-end pipeline.

A configuration file holds one ``key = value`` per line; ``#`` starts a
comment, lists are comma-separated and generator parameters use a
``gen.`` prefix::

    generator = grid
    gen.w = 60
    gen.h = 60
    r = 12, 4
    s = 3, 3
    levels = 1
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Dict, List, Optional, Union

from ..constants import ParameterSchedule, build_schedule
from ..graph import Graph, bulk as bulk_vertices
from ..hierarchy import Hierarchy
from ..palette import Palette, PhiResult
from ..verify import CheckLine, VerificationReport, check_finitary, check_level_invariants, sweep_delta
from . import io
from .generators import generate


class ConfigError(ValueError):
    pass


_LISTS = ("r", "s", "eps")
_INTS = ("degree", "levels", "margin", "corona_inner", "n_separation", "check_eps", "delta_max", "seed")
_BOOLS = ("canonical",)


@dataclass
class RunConfig:
    generator: str = "cycle"
    params: Dict[str, str] = field(default_factory=dict)
    mode: str = "desk"
    degree: Optional[int] = None
    eps: Optional[List[int]] = None
    r: List[int] = field(default_factory=list)
    s: List[int] = field(default_factory=list)
    levels: int = 0
    canonical: bool = True
    margin: Optional[int] = None
    corona_inner: int = 10
    n_separation: Optional[int] = None
    split: str = "formula"
    y_separation: str = "strict"
    capacity: str = "realized"
    check_eps: int = 4
    delta: str = "sweep"
    delta_max: int = 16
    seed: int = 0

    # -- flat text format ----------------------------------------------------------------

    @classmethod
    def from_text(cls, text: str, where: str = "config") -> "RunConfig":
        cfg = cls()
        names = {f.name for f in fields(cls)} - {"params"}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError("%s:%d: expected key = value" % (where, lineno))
            key, value = (part.strip() for part in line.split("=", 1))
            try:
                if key.startswith("gen."):
                    cfg.params[key[4:]] = value
                elif key not in names:
                    raise ConfigError("unknown key %r" % key)
                elif key in _LISTS:
                    setattr(cfg, key, [int(v) for v in value.split(",") if v.strip()])
                elif key in _INTS:
                    setattr(cfg, key, None if value.lower() == "none" else int(value))
                elif key in _BOOLS:
                    if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                        raise ConfigError("expected a boolean, got %r" % value)
                    setattr(cfg, key, value.lower() in ("true", "1", "yes"))
                else:
                    setattr(cfg, key, value)
            except ValueError as exc:
                raise ConfigError("%s:%d: %s" % (where, lineno, exc)) from None
        return cfg

    def to_text(self) -> str:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "params":
                out += ["gen.%s = %s" % (k, p) for k, p in sorted(v.items())]
            elif v is None:
                continue
            elif isinstance(v, list):
                out.append("%s = %s" % (f.name, ", ".join(str(x) for x in v)))
            elif isinstance(v, bool):
                out.append("%s = %s" % (f.name, "true" if v else "false"))
            else:
                out.append("%s = %s" % (f.name, v))
        return "\n".join(out) + "\n"

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RunConfig":
        return cls.from_text(Path(path).read_text(), str(path))

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    # -- stages --------------------------------------------------------------------------

    def make_graph(self) -> Graph:
        params = dict(self.params)
        if self.generator.replace("-", "_") == "random_bounded":
            params.setdefault("seed", str(self.seed))
        return generate(self.generator, **params)

    def make_schedule(self, g: Graph) -> ParameterSchedule:
        degree = g.degree_bound if self.degree is None else self.degree
        if degree != g.degree_bound:
            raise ConfigError("configured degree %d does not match the graph's %d" % (degree, g.degree_bound))
        if self.mode == "desk":
            return build_schedule("desk", degree, self.eps, r=self.r, s=self.s)
        return build_schedule(self.mode, degree, self.eps, levels=self.levels + 1)

    def make_hierarchy(self, g: Graph, sched: ParameterSchedule) -> Hierarchy:
        return Hierarchy(g, sched, levels=self.levels + 1, split=self.split, y_separation=self.y_separation)

    def palette_options(self) -> dict:
        return {"canonical": self.canonical, "corona_inner": self.corona_inner,
                "n_separation": self.n_separation, "capacity": self.capacity}

    def make_palette(self, hier: Hierarchy) -> Palette:
        return Palette(hier, **self.palette_options())


@dataclass
class PipelineResult:
    config: RunConfig
    graph: Graph
    schedule: ParameterSchedule
    hierarchy: Hierarchy
    palette: Palette
    phi: PhiResult
    report: VerificationReport
    delta: Optional[int]


def finitary_lines(g: Graph, coloring, eps: int, delta: Union[str, int], delta_max: int,
                   margin: Optional[int] = None) -> (VerificationReport, Optional[int]):
    """Finitary separation at a given ``delta`` or at the least one found by a sweep."""
    rep = VerificationReport()
    radius = delta_max if delta == "sweep" else int(delta)
    dom = bulk_vertices(g, radius if margin is None else max(margin, radius))
    if delta == "sweep":
        found, pending = sweep_delta(g, coloring, eps, dom, delta_max)
        if found is None:
            x, y, d = pending[0]
            rep.add(CheckLine("finitary-sweep(eps=%d)" % eps, len(pending), "fail",
                              {"pair": [x, y], "distance": d, "delta_max": delta_max}))
            return rep, None
        rep.add(CheckLine("finitary-sweep(eps=%d)" % eps, 1, "pass", note="least delta %d" % found))
        delta = found
    rep.extend(check_finitary(g, coloring, eps, int(delta), dom))
    return rep, int(delta)


def run_pipeline(cfg: RunConfig, outdir: Optional[Union[str, Path]] = None) -> PipelineResult:
    g = cfg.make_graph()
    sched = cfg.make_schedule(g)
    hier = cfg.make_hierarchy(g, sched)
    pal = cfg.make_palette(hier)
    phi = pal.build_phi(cfg.levels)
    report = check_level_invariants(hier, palette=pal, phi=phi, margin=cfg.margin)
    fin, delta = finitary_lines(g, phi.coloring, cfg.check_eps, cfg.delta, cfg.delta_max, cfg.margin)
    report.extend(fin)
    if outdir is not None:
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        io.save_graph(g, out / "graph.json")
        io.write_json(out / "schedule.json", sched.to_dict())
        io.save_levels(hier, out / "levels.json", cfg.palette_options())
        manifest = {"config": cfg.to_dict(), "top": cfg.levels, "indices": {
            str(n): {str(x): i for x, i in v.items()} for n, v in phi.indices.items()}}
        io.save_coloring(phi.coloring, out / "coloring.json", manifest)
        io.save_report(report, out / "report.json", {"delta": delta})
    return PipelineResult(cfg, g, sched, hier, pal, phi, report, delta)
