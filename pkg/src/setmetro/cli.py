"""Command line interface: layout a set system, sample sub-systems from a
larger one, and batch-compute metrics over many inputs.

Exit codes: 0 success, 2 invalid input, 3 a pipeline stage failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .document import DocumentError, write_document
from .model import InputError, SetSystem, parse_set_system
from .pipeline import PRESETS, STAGE_CHOICES, StageError, run_pipeline
from .sampling import subsample

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_STAGE = 3

METRIC_COLUMNS = [
    "avg_octolinearity", "max_octolinearity", "avg_edge_uniformity",
    "max_edge_uniformity", "monotonicity", "gabriel_score",
    "consecutive_ones", "edge_crossings", "self_crossings", "line_crossings",
]
TIMING_COLUMNS = [
    "condense", "support", "insertion", "layout", "schematization",
    "ordering", "labeling", "render", "total",
]


def _infer_format(path: str, explicit: str | None) -> str:
    if explicit:
        return explicit
    return "csv" if Path(path).suffix.lower() == ".csv" else "json"


def _load_system(path: str, fmt: str | None, csv_header: bool) -> SetSystem:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read input file: {exc}", str(path)) from exc
    return parse_set_system(text, fmt=_infer_format(path, fmt), csv_header=csv_header)


def _add_input_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("input", help="set system file (JSON or CSV)")
    sub.add_argument("--format", choices=("json", "csv"), default=None,
                     help="input format; default inferred from the extension")
    sub.add_argument("--csv-header", action="store_true",
                     help="skip the first CSV row as a header")


def _add_pipeline_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--preset", choices=sorted(PRESETS), default="balanced")
    sub.add_argument("--support", choices=STAGE_CHOICES["support"], default=None)
    sub.add_argument("--insertion", choices=STAGE_CHOICES["insertion"], default=None)
    sub.add_argument("--layout", choices=STAGE_CHOICES["layout"], default=None)
    sub.add_argument("--schematization", choices=STAGE_CHOICES["schematization"], default=None)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--rounds", type=int, default=3,
                     help="path refinement rounds for the tsp-stress layout")
    sub.add_argument("--anneal-budget", type=int, default=500,
                     help="annealing sweeps for the c1p support strategy")


def _pipeline_kwargs(args: argparse.Namespace) -> dict:
    return {
        "preset": args.preset,
        "support": args.support,
        "insertion": args.insertion,
        "layout": args.layout,
        "schematization": args.schematization,
        "seed": args.seed,
        "rounds": args.rounds,
        "anneal_budget": args.anneal_budget,
    }


def _cmd_layout(args: argparse.Namespace) -> int:
    system = _load_system(args.input, args.format, args.csv_header)
    result = run_pipeline(system, **_pipeline_kwargs(args))
    metrics = dict(result.document.metrics)
    if not args.include_timings:
        metrics.pop("running_time", None)
    if args.metrics_only:
        print(json.dumps(metrics, indent=1))
        return EXIT_OK
    if args.out_json:
        Path(args.out_json).write_text(
            write_document(result.document, include_timings=args.include_timings),
            encoding="utf-8",
        )
    if args.out_svg:
        Path(args.out_svg).write_text(result.svg, encoding="utf-8")
    print(json.dumps(metrics, indent=1))
    return EXIT_OK


def _cmd_sample(args: argparse.Namespace) -> int:
    base = _load_system(args.input, args.format, args.csv_header)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.input).stem
    missed = 0
    for i in range(args.count):
        seed = args.seed + i
        res = subsample(base, args.elements, args.sets, seed=seed)
        if not res.achieved:
            missed += 1
        payload = {
            "sets": {s: list(res.system.members[s]) for s in res.system.sets},
        }
        path = out_dir / f"{stem}-e{args.elements}-s{args.sets}-seed{seed}.json"
        path.write_text(json.dumps(payload, indent=1, ensure_ascii=False) + "\n",
                        encoding="utf-8")
        flag = "" if res.achieved else f" (got {len(res.system.elements)} elements)"
        print(f"{path} sets={len(res.system.sets)} "
              f"elements={len(res.system.elements)}{flag}")
    if missed:
        print(f"warning: {missed}/{args.count} samples missed the element target",
              file=sys.stderr)
    return EXIT_OK


def _batch_one(task: tuple[str, dict]) -> dict:
    path, kwargs = task
    row: dict = {"input": path, "ok": 1, "error": ""}
    try:
        system = _load_system(path, kwargs.pop("format"), kwargs.pop("csv_header"))
        row["n_elements"] = len(system.elements)
        row["n_sets"] = len(system.sets)
        result = run_pipeline(system, **kwargs)
        metrics = result.document.metrics
        for col in METRIC_COLUMNS:
            row[col] = metrics.get(col, "")
        timings = result.state.timings
        for col in TIMING_COLUMNS:
            row[f"t_{col}"] = round(timings.get(col, 0.0), 6)
    except (InputError, DocumentError, StageError) as exc:
        row["ok"] = 0
        row["error"] = str(exc)
    return row


def _cmd_batch(args: argparse.Namespace) -> int:
    kwargs = _pipeline_kwargs(args)
    kwargs["format"] = args.format
    kwargs["csv_header"] = args.csv_header
    tasks = [(path, dict(kwargs)) for path in args.inputs]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_batch_one, tasks))
    else:
        rows = [_batch_one(t) for t in tasks]
    columns = (["input", "n_elements", "n_sets", "ok", "error"]
               + METRIC_COLUMNS + [f"t_{c}" for c in TIMING_COLUMNS])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, restval="")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    failed = [r for r in rows if not r["ok"]]
    if failed:
        print(f"warning: {len(failed)}/{len(rows)} inputs failed", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="setmetro",
        description="Metro-map style layouts for set systems",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    lay = subparsers.add_parser("layout", help="lay out one set system")
    _add_input_args(lay)
    _add_pipeline_args(lay)
    lay.add_argument("--out-svg", default=None, help="write the rendered SVG here")
    lay.add_argument("--out-json", default=None, help="write the layout document here")
    lay.add_argument("--metrics-only", action="store_true",
                     help="print metrics and skip writing outputs")
    lay.add_argument("--include-timings", action="store_true",
                     help="keep stage timings in the written document")
    lay.set_defaults(func=_cmd_layout)

    samp = subparsers.add_parser("sample", help="sample connected subsystems")
    _add_input_args(samp)
    samp.add_argument("--elements", type=int, required=True,
                      help="target number of elements")
    samp.add_argument("--sets", type=int, required=True,
                      help="number of sets to keep")
    samp.add_argument("--count", type=int, default=1,
                      help="how many samples to generate")
    samp.add_argument("--seed", type=int, default=0)
    samp.add_argument("--out-dir", default=".")
    samp.set_defaults(func=_cmd_sample)

    bat = subparsers.add_parser("batch", help="metrics CSV over many inputs")
    bat.add_argument("inputs", nargs="+", help="set system files")
    bat.add_argument("--format", choices=("json", "csv"), default=None)
    bat.add_argument("--csv-header", action="store_true")
    _add_pipeline_args(bat)
    bat.add_argument("--jobs", type=int, default=1,
                     help="parallel worker processes")
    bat.add_argument("--out", default=None, help="CSV output path (default stdout)")
    bat.set_defaults(func=_cmd_batch)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAGE


if __name__ == "__main__":
    sys.exit(main(argv=None))
