"""End-to-end pipeline: condense, extract support, re-insert, lay out,
schematize, order lines, label, and render.

The stages are exposed both as plain functions (via the stage modules) and as
small sklearn-style transformers over a PipelineState, so runs compose with
the usual fit/transform machinery and `get_params` doubles as the provenance
record written into the document.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from sklearn.base import BaseEstimator, TransformerMixin

from . import insertion as ins
from . import support as sup
from .document import LayoutDocument
from .labeling import LabelPlacement, label_stations
from .layout import EmbeddedMap, mds_seed, refine_paths, spring_layout, stress_layout
from .metrics import compute_metrics
from .model import CondensedSystem, SetSystem, check_set_system, condense
from .ordering import LEFT, LineOrderMap, order_lines, terminator_heuristic
from .render import assign_colors, render_svg, scale_layout, station_radii
from .schematize import least_squares_schematize, magnetic_schematize

PRESETS = {
    "balanced": {
        "support": "tsp", "insertion": "split",
        "layout": "tsp-stress", "schematization": "magnetic",
    },
    "simplicity": {
        "support": "c1p", "insertion": "first-viable",
        "layout": "spring", "schematization": "magnetic",
    },
    "max-speed": {
        "support": "tsp", "insertion": "split",
        "layout": "tsp-stress", "schematization": "least-squares",
    },
}

STAGE_CHOICES = {
    "support": ("tsp", "c1p"),
    "insertion": ("split", "first-viable"),
    "layout": ("tsp-stress", "spring"),
    "schematization": ("magnetic", "least-squares"),
}


class StageError(RuntimeError):
    """A pipeline stage blew up; carries the stage name for error reporting."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")


@dataclass
class PipelineState:
    system: SetSystem
    condensed: CondensedSystem | None = None
    support: sup.SupportGraph | None = None
    embedding: EmbeddedMap | None = None
    orders: LineOrderMap | None = None
    radii: dict[str, float] = field(default_factory=dict)
    labels: LabelPlacement | None = None
    colors: dict[str, str] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)


class _Stage(BaseEstimator, TransformerMixin):
    """Stateless transformer over PipelineState; fit only validates."""

    name = "stage"

    def fit(self, state: PipelineState, y=None):
        if not isinstance(state, PipelineState):
            raise TypeError("expected a PipelineState")
        return self

    def transform(self, state: PipelineState) -> PipelineState:
        start = time.perf_counter()
        try:
            self._apply(state)
        except Exception as exc:  # noqa: BLE001 - stage boundary
            raise StageError(self.name, exc) from exc
        state.timings[self.name] = state.timings.get(self.name, 0.0) + (
            time.perf_counter() - start
        )
        return state

    def _apply(self, state: PipelineState) -> None:
        raise NotImplementedError


class Condenser(_Stage):
    name = "condense"

    def _apply(self, state):
        state.condensed = condense(state.system)


class TwoOptSupport(_Stage):
    name = "support"

    def _apply(self, state):
        state.support = sup.extract_support_two_opt(state.condensed)


class ConsecutiveOnesSupport(_Stage):
    name = "support"

    def __init__(self, seed: int = 0, anneal_budget: int = 500):
        self.seed = seed
        self.anneal_budget = anneal_budget

    def _apply(self, state):
        state.support = sup.extract_support_c1p(
            state.condensed, self.seed, self.anneal_budget
        )


class SplitInsertion(_Stage):
    name = "insertion"

    def _apply(self, state):
        g = ins.expand_merged(state.support, state.condensed)
        state.support = ins.insert_split(g, state.condensed)


class FirstViableInsertion(_Stage):
    name = "insertion"

    def _apply(self, state):
        g = ins.expand_merged(state.support, state.condensed)
        state.support = ins.insert_first_viable(g, state.condensed)


class TspStressLayout(_Stage):
    name = "layout"

    def __init__(self, rounds: int = 3, ideal_len: float = 1.0):
        self.rounds = rounds
        self.ideal_len = ideal_len

    def _apply(self, state):
        m = stress_layout(state.support, ideal_len=self.ideal_len)
        m = refine_paths(m, state.system, rounds=self.rounds, ideal_len=self.ideal_len)
        state.support = m.support
        state.embedding = m


class SpringEmbedLayout(_Stage):
    name = "layout"

    def __init__(self, seed: int = 0, ideal_len: float = 1.0):
        self.seed = seed
        self.ideal_len = ideal_len

    def _apply(self, state):
        state.embedding = spring_layout(
            state.support, seed=self.seed, ideal_len=self.ideal_len
        )


class MagneticSchematizer(_Stage):
    name = "schematization"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def _apply(self, state):
        state.embedding = magnetic_schematize(state.embedding, seed=self.seed)


class LeastSquaresSchematizer(_Stage):
    name = "schematization"

    def _apply(self, state):
        state.embedding = least_squares_schematize(state.embedding)


class LineOrderer(_Stage):
    name = "ordering"

    def _apply(self, state):
        state.embedding = scale_layout(state.embedding)
        sides = terminator_heuristic(state.embedding)
        state.orders = order_lines(state.embedding, sides)


class StationLabeler(_Stage):
    name = "labeling"

    def _apply(self, state):
        state.radii = station_radii(state.embedding.support)
        state.labels = label_stations(state.embedding, state.radii)


def resolve_options(
    preset: str | None = None,
    support: str | None = None,
    insertion: str | None = None,
    layout: str | None = None,
    schematization: str | None = None,
    seed: int = 0,
    rounds: int = 3,
    anneal_budget: int = 500,
) -> dict:
    """Preset defaults with per-stage overrides, validated against the
    available strategies."""
    base = dict(PRESETS[preset or "balanced"]) if (preset or "balanced") in PRESETS else None
    if base is None:
        raise ValueError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
    overrides = {
        "support": support, "insertion": insertion,
        "layout": layout, "schematization": schematization,
    }
    for key, val in overrides.items():
        if val is not None:
            if val not in STAGE_CHOICES[key]:
                raise ValueError(
                    f"unknown {key} strategy {val!r}; choose from {STAGE_CHOICES[key]}"
                )
            base[key] = val
    base["preset"] = preset or "balanced"
    base["seed"] = seed
    base["rounds"] = rounds
    base["anneal_budget"] = anneal_budget
    return base


def _stages(opts: dict) -> list[_Stage]:
    support_stage = (
        TwoOptSupport()
        if opts["support"] == "tsp"
        else ConsecutiveOnesSupport(seed=opts["seed"], anneal_budget=opts["anneal_budget"])
    )
    insertion_stage = SplitInsertion() if opts["insertion"] == "split" else FirstViableInsertion()
    layout_stage = (
        TspStressLayout(rounds=opts["rounds"])
        if opts["layout"] == "tsp-stress"
        else SpringEmbedLayout(seed=opts["seed"])
    )
    schem_stage = (
        MagneticSchematizer(seed=opts["seed"])
        if opts["schematization"] == "magnetic"
        else LeastSquaresSchematizer()
    )
    return [
        Condenser(), support_stage, insertion_stage, layout_stage,
        schem_stage, LineOrderer(), StationLabeler(),
    ]


def _round6(x: float) -> float:
    r = round(x, 6)
    return 0.0 if r == 0 else r


def build_document(state: PipelineState, opts: dict) -> LayoutDocument:
    system = state.system
    g = state.embedding.support
    eid = {name: i for i, name in enumerate(system.elements)}
    sid = {name: i for i, name in enumerate(system.sets)}
    vidx = {v: i for i, v in enumerate(g.vertices)}
    elements = [{"id": eid[n], "name": n} for n in system.elements]
    sets = [{"id": sid[n], "name": n} for n in system.sets]
    vertices = []
    for v in g.vertices:
        x, y = state.embedding.positions[v]
        vertices.append({
            "id": eid[v],
            "x": _round6(x),
            "y": _round6(y),
            "radius": state.radii.get(v, 6.0),
            "sets": [sid[s] for s in system.sets if v in system.members[s]],
        })
    edges = []
    for e in g.edges:
        edges.append({
            "u": eid[e[0]],
            "v": eid[e[1]],
            "lines": [sid[s] for s in state.orders.edge_order[e]],
        })
    lines = []
    for s in system.sets:
        lines.append({
            "set": sid[s],
            "color": state.colors[s],
            "stations": [eid[v] for v in g.line_orders[s]],
            "terminus_sides": [
                state.orders.terminus_sides.get((s, 0), LEFT),
                state.orders.terminus_sides.get((s, 1), LEFT),
            ],
        })
    labels = []
    for v in g.vertices:
        lab = state.labels.labels[v]
        labels.append({
            "vertex": eid[v],
            "text": lab.text,
            "full_text": lab.full_text,
            "x": _round6(lab.anchor[0]),
            "y": _round6(lab.anchor[1]),
            "angle": lab.angle,
            "leftward": lab.leftward,
            "size": lab.size,
        })
    report = compute_metrics(state.embedding, state.orders, state.timings)
    provenance = {
        "preset": opts.get("preset"),
        "seed": opts.get("seed"),
        "options": {
            k: opts[k]
            for k in ("support", "insertion", "layout", "schematization", "rounds", "anneal_budget")
        },
        "timings": dict(state.timings),
    }
    return LayoutDocument(
        elements=elements,
        sets=sets,
        vertices=vertices,
        edges=edges,
        lines=lines,
        labels=labels,
        font_size=state.labels.size,
        label_fallback=state.labels.fallback_used,
        metrics=report.as_dict(),
        provenance=provenance,
    )


@dataclass
class PipelineResult:
    document: LayoutDocument
    svg: str
    state: PipelineState


def run_pipeline(system: SetSystem, **options) -> PipelineResult:
    """Run all stages on a validated set system and produce document + SVG."""
    opts = resolve_options(**options)
    state = PipelineState(system=check_set_system(system))
    for stage in _stages(opts):
        stage.fit(state)
        stage.transform(state)
    start = time.perf_counter()
    try:
        state.colors = assign_colors(state.embedding.support)
        doc = build_document(state, opts)
        svg = render_svg(doc)
    except Exception as exc:  # noqa: BLE001 - stage boundary
        raise StageError("render", exc) from exc
    state.timings["render"] = time.perf_counter() - start
    state.timings["total"] = sum(
        v for k, v in state.timings.items() if k != "total"
    )
    doc.metrics["running_time"] = dict(state.timings)
    doc.provenance["timings"] = dict(state.timings)
    return PipelineResult(document=doc, svg=svg, state=state)


class MetroMapPipeline(BaseEstimator, TransformerMixin):
    """Estimator facade: transform a validated SetSystem into a LayoutDocument.

    Stateless between calls; fit validates the input and parameter choices.
    """

    def __init__(
        self,
        preset: str | None = None,
        support: str | None = None,
        insertion: str | None = None,
        layout: str | None = None,
        schematization: str | None = None,
        seed: int = 0,
        rounds: int = 3,
        anneal_budget: int = 500,
    ):
        self.preset = preset
        self.support = support
        self.insertion = insertion
        self.layout = layout
        self.schematization = schematization
        self.seed = seed
        self.rounds = rounds
        self.anneal_budget = anneal_budget

    def _options(self) -> dict:
        return resolve_options(
            preset=self.preset,
            support=self.support,
            insertion=self.insertion,
            layout=self.layout,
            schematization=self.schematization,
            seed=self.seed,
            rounds=self.rounds,
            anneal_budget=self.anneal_budget,
        )

    def fit(self, X: SetSystem, y=None):
        check_set_system(X)
        self._options()
        return self

    def transform(self, X: SetSystem) -> LayoutDocument:
        return run_pipeline(X, **{
            k: v for k, v in self._options().items()
            if k in ("preset", "support", "insertion", "layout",
                     "schematization", "seed", "rounds", "anneal_budget")
        }).document
