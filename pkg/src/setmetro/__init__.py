"""Metro-map style layouts for set systems.

Elements become stations, sets become metro lines, and the pipeline turns a
set system into an octolinear map: condense, extract a path-based support,
re-insert condensed elements, lay out, schematize, order the lines, label,
and render to SVG plus a JSON layout document.
"""

from .document import DocumentError, LayoutDocument, read_document, write_document
from .insertion import expand_merged, insert_first_viable, insert_split
from .layout import EmbeddedMap, refine_paths, spring_layout, stress_layout
from .metrics import MetricReport, compute_metrics
from .model import (
    CondensedSystem,
    InputError,
    SetSystem,
    check_set_system,
    condense,
    parse_set_system,
)
from .ordering import LineOrderMap, order_lines, terminator_heuristic
from .pipeline import (
    PRESETS,
    MetroMapPipeline,
    PipelineResult,
    StageError,
    run_pipeline,
)
from .render import render_svg
from .sampling import SampleResult, subsample
from .support import SupportGraph, extract_support_c1p, extract_support_two_opt

__version__ = "0.1.0"

__all__ = [
    "CondensedSystem",
    "DocumentError",
    "EmbeddedMap",
    "InputError",
    "LayoutDocument",
    "LineOrderMap",
    "MetricReport",
    "MetroMapPipeline",
    "PRESETS",
    "PipelineResult",
    "SampleResult",
    "SetSystem",
    "StageError",
    "SupportGraph",
    "check_set_system",
    "compute_metrics",
    "condense",
    "expand_merged",
    "extract_support_c1p",
    "extract_support_two_opt",
    "insert_first_viable",
    "insert_split",
    "order_lines",
    "parse_set_system",
    "read_document",
    "refine_paths",
    "render_svg",
    "run_pipeline",
    "spring_layout",
    "stress_layout",
    "subsample",
    "terminator_heuristic",
    "write_document",
    "__version__",
]
