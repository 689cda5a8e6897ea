"""Command-line front end: extract -> centrality -> assign / train -> evaluate.

Each stage reads and writes files so that any stage can be fed by other
tools. Exit codes: 0 success, 2 input error, 3 empty result, 4 invalid
configuration. Diagnostics go to stderr; data only to the ``--out`` files.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .centrality import compute_table, emit_csv, parse_csv, parse_labels_csv
from .errors import (ArchLayersError, ConfigError, IncompleteAssignmentError,
                     ModelFormatError, ParseError, SchemaError, SpecError, TrainError)
from .evaluation import (SyntheticSpec, confusion, format_report, generate_synthetic,
                         metrics, report_csv, sweep_config)
from .extractor import extract
from .formats import emit_dot, emit_gml, parse_gml
from .layers import LayerAssignment
from .ml import LabeledDataset, accuracy_on, load_model, predict, save_model, train
from .rules import LayerConfig, assign_rules
from .settings import Settings, parse_settings

log = logging.getLogger("archlayers")

EXIT_OK, EXIT_INPUT, EXIT_EMPTY, EXIT_CONFIG = 0, 2, 3, 4
DEFAULT_SEED = 0


class CommandError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    moment = (datetime.fromtimestamp(int(epoch), timezone.utc) if epoch
              else datetime.now(timezone.utc))
    return moment.isoformat(timespec="seconds")


def write_manifest(out: str | Path, command: str, inputs: list, config: dict) -> None:
    manifest = {"command": command, "inputs": [str(p) for p in inputs],
                "config": config, "tool_version": __version__,
                "outputs": [str(out)], "timestamp": _timestamp()}
    write_atomic(f"{out}.manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _read(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CommandError(EXIT_INPUT, f"cannot read {path}: {exc.strerror or exc}") from None


def _settings(path: str | None) -> Settings:
    if path is None:
        return Settings()
    try:
        return parse_settings(_read(path))
    except (ConfigError, ValueError) as exc:
        raise CommandError(EXIT_CONFIG, f"invalid config {path}: {exc}") from None


def _load_network(path: str):
    try:
        net = parse_gml(_read(path))
    except ArchLayersError as exc:
        raise CommandError(EXIT_INPUT, f"{path}: {exc}") from None
    return net


def _load_table(path: str):
    try:
        return parse_csv(_read(path))
    except (ParseError, SchemaError) as exc:
        raise CommandError(EXIT_INPUT, f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_extract(args) -> int:
    root = Path(args.src_root)
    if not root.is_dir():
        raise CommandError(EXIT_INPUT, f"source root {root} is not a readable directory")
    settings = _settings(args.config)
    include = tuple(args.include or ["*.java"])
    network, report = extract(root, settings.extraction, include, tuple(args.exclude or ()))
    for line in report.summary().splitlines():
        log.info(line)
    if len(network) == 0:
        raise CommandError(EXIT_EMPTY, f"no source units found under {root}")
    write_atomic(args.out, emit_gml(network))
    write_manifest(args.out, "extract", [root], settings.snapshot()["extraction"])
    return EXIT_OK


def cmd_centrality(args) -> int:
    network = _load_network(args.in_gml)
    if len(network) == 0:
        raise CommandError(EXIT_INPUT, f"{args.in_gml}: graph has no nodes")
    table = compute_table(network, harmonic_closeness=args.harmonic)
    write_atomic(args.out, emit_csv(table))
    write_manifest(args.out, "centrality", [args.in_gml], {"harmonic": args.harmonic})
    return EXIT_OK


def _layer_config(args) -> LayerConfig:
    settings = _settings(args.config)
    overrides = {key: getattr(args, key) for key in LayerConfig.__dataclass_fields__
                 if getattr(args, key, None) is not None}
    try:
        return LayerConfig.from_mapping(overrides, settings.layer)
    except ConfigError as exc:
        raise CommandError(EXIT_CONFIG, str(exc)) from None


def cmd_assign(args) -> int:
    table = _load_table(args.in_csv)
    if args.mode == "rules":
        config = _layer_config(args)
        assignment = assign_rules(None, table, config)
        snapshot = config.as_dict()
        inputs = [args.in_csv] + ([args.config] if args.config else [])
    else:
        if not args.model:
            raise CommandError(EXIT_CONFIG, "--mode model needs --model")
        try:
            model = load_model(_read(args.model))
        except ModelFormatError as exc:
            raise CommandError(EXIT_CONFIG, f"{args.model}: {exc}") from None
        assignment = predict(model, table)
        snapshot = dict(assignment.source)
        inputs = [args.in_csv, args.model]
    write_atomic(args.out, emit_csv(table, assignment))
    write_manifest(args.out, f"assign --mode {args.mode}", inputs, snapshot)
    return EXIT_OK


def cmd_train(args) -> int:
    table = _load_table(args.in_csv)
    try:
        dataset = LabeledDataset.from_table(table)
    except TrainError as exc:
        raise CommandError(EXIT_INPUT, f"{args.in_csv}: {exc}") from None
    if len(dataset.classes) < 2:
        raise CommandError(EXIT_CONFIG, "training data holds a single layer")
    settings = _settings(args.config)
    hyper = dict(settings.hyperparameters)
    for key in ("k", "max_depth", "min_leaf", "epochs", "learning_rate", "regularization", "seed"):
        if getattr(args, key) is not None:
            hyper[key] = getattr(args, key)
    hyper.setdefault("seed", DEFAULT_SEED)
    try:
        model = train(dataset, args.algorithm, **hyper)
    except TrainError as exc:
        raise CommandError(EXIT_CONFIG, str(exc)) from None
    write_atomic(args.out, save_model(model))
    write_manifest(args.out, f"train --algorithm {args.algorithm}", [args.in_csv],
                   dict(model.hyperparameters))
    print(f"training accuracy: {accuracy_on(model, dataset):.4f}", file=sys.stderr)
    return EXIT_OK


def _labels(path: str):
    try:
        return parse_labels_csv(_read(path))
    except (ParseError, SchemaError) as exc:
        raise CommandError(EXIT_INPUT, f"{path}: {exc}") from None


def cmd_evaluate(args) -> int:
    predicted, actual = _labels(args.predicted_csv), _labels(args.actual_csv)
    if set(predicted) != set(actual):
        raise CommandError(EXIT_INPUT, "predicted and actual files cover different Id/Label keys")
    if not predicted:
        raise CommandError(EXIT_EMPTY, "no labelled rows to evaluate")
    matrix = confusion(predicted, actual)
    report = metrics(matrix)
    text = report_csv(matrix, report) if args.format == "csv" else format_report(matrix, report)
    write_atomic(args.out, text)
    write_manifest(args.out, "evaluate", [args.predicted_csv, args.actual_csv], {"format": args.format})
    return EXIT_OK


def _parse_grid(items: list[str]) -> dict[str, list[float]]:
    grid = {}
    for item in items or []:
        key, _, values = item.partition("=")
        try:
            grid[key.strip()] = [float(v) for v in values.split(",") if v.strip()]
        except ValueError:
            raise CommandError(EXIT_CONFIG, f"bad grid entry {item!r}") from None
    return grid


def cmd_sweep(args) -> int:
    table = _load_table(args.in_csv)
    actual_rows = _labels(args.actual_csv)
    keyed = {(r.node, r.label): r.node for r in table.records}
    if set(keyed) != set(actual_rows):
        raise CommandError(EXIT_INPUT, "score table and actual labels cover different Id/Label keys")
    actual = LayerAssignment({keyed[k]: v for k, v in actual_rows.items()})
    try:
        results = sweep_config(None, table, actual, _parse_grid(args.grid), _layer_config(args))
    except ConfigError as exc:
        raise CommandError(EXIT_CONFIG, str(exc)) from None
    if not results:
        raise CommandError(EXIT_EMPTY, "every grid cell was invalid")
    keys = list(LayerConfig.__dataclass_fields__)
    lines = [",".join(keys + ["accuracy", "macro_f1"])]
    for config, report in results:
        values = config.as_dict()
        lines.append(",".join([f"{values[k]:g}" for k in keys]
                              + [f"{report.accuracy:.6f}", f"{report.macro_f1:.6f}"]))
    write_atomic(args.out, "\n".join(lines) + "\n")
    write_manifest(args.out, "sweep", [args.in_csv, args.actual_csv], {"grid": args.grid})
    return EXIT_OK


def cmd_synth(args) -> int:
    spec = SyntheticSpec((args.lower, args.middle, args.upper), args.down_p,
                         args.violation_p, args.crosscut, args.seed)
    try:
        network, truth = generate_synthetic(spec)
    except SpecError as exc:
        raise CommandError(EXIT_CONFIG, str(exc)) from None
    write_atomic(args.out_gml, emit_gml(network))
    # Re-read so that CSV ids match the renumbered GML ids.
    renumbered = parse_gml(emit_gml(network))
    by_name = {renumbered.node(n).name: n for n in renumbered}
    labels = {by_name[node]: layer for node, layer in truth.items()}
    table = compute_table(renumbered).with_layers(labels)
    write_atomic(args.out_csv, emit_csv(table))
    snapshot = {"nodes_per_layer": list(spec.nodes_per_layer), "down_probability": spec.down_probability,
                "violation_probability": spec.violation_probability, "crosscut": spec.crosscut,
                "seed": spec.seed}
    write_manifest(args.out_gml, "synth", [], snapshot)
    return EXIT_OK


def cmd_export_dot(args) -> int:
    network = _load_network(args.in_gml)
    table = _load_table(args.assignment_csv)
    if set(table.node_ids) != set(network.node_ids):
        raise CommandError(EXIT_INPUT, "assignment does not cover the same nodes as the graph")
    try:
        text = emit_dot(network, LayerAssignment(table.layers))
    except IncompleteAssignmentError as exc:
        raise CommandError(EXIT_INPUT, str(exc)) from None
    write_atomic(args.out, text)
    write_manifest(args.out, "export-dot", [args.in_gml, args.assignment_csv], {})
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _add_delta_flags(parser: argparse.ArgumentParser) -> None:
    for key in LayerConfig.__dataclass_fields__:
        parser.add_argument(f"--{key.replace('_', '-')}", dest=key, type=float,
                            help=f"override {key}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="archlayers", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true", help="more diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="scan a source tree into a GML dependency graph")
    p.add_argument("src_root")
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.add_argument("--include", action="append", help="glob for files to scan (default *.java)")
    p.add_argument("--exclude", action="append", help="glob for files to skip")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("centrality", help="compute the centrality score table")
    p.add_argument("in_gml")
    p.add_argument("--out", required=True)
    p.add_argument("--harmonic", action="store_true", help="harmonic closeness variant")
    p.set_defaults(func=cmd_centrality)

    p = sub.add_parser("assign", help="fill the Layer column by rules or a trained model")
    p.add_argument("in_csv")
    p.add_argument("--mode", choices=("rules", "model"), default="rules")
    p.add_argument("--config")
    p.add_argument("--model")
    p.add_argument("--out", required=True)
    _add_delta_flags(p)
    p.set_defaults(func=cmd_assign)

    p = sub.add_parser("train", help="train a classifier on a labelled score table")
    p.add_argument("in_csv")
    p.add_argument("--algorithm", choices=("knn", "tree", "svm"), default="tree")
    p.add_argument("--config")
    p.add_argument("--k", type=int)
    p.add_argument("--max-depth", dest="max_depth", type=int)
    p.add_argument("--min-leaf", dest="min_leaf", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--learning-rate", dest="learning_rate", type=float)
    p.add_argument("--regularization", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="confusion matrix and metrics report")
    p.add_argument("predicted_csv")
    p.add_argument("actual_csv")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="grid search over the threshold parameters")
    p.add_argument("in_csv")
    p.add_argument("actual_csv")
    p.add_argument("--grid", action="append", help="e.g. delta_il=2,4,6 (repeatable)")
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    _add_delta_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("synth", help="generate a planted three-layer system")
    p.add_argument("--lower", type=int, default=5)
    p.add_argument("--middle", type=int, default=5)
    p.add_argument("--upper", type=int, default=5)
    p.add_argument("--down-p", dest="down_p", type=float, default=1.0)
    p.add_argument("--violation-p", dest="violation_p", type=float, default=0.0)
    p.add_argument("--crosscut", type=int, default=0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out-gml", dest="out_gml", required=True)
    p.add_argument("--out-csv", dest="out_csv", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("export-dot", help="render the graph with layer clusters")
    p.add_argument("in_gml")
    p.add_argument("assignment_csv")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except CommandError as exc:
        print(f"archlayers {args.command}: {exc}", file=sys.stderr)
        return exc.code
    except ConfigError as exc:
        print(f"archlayers {args.command}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ArchLayersError as exc:
        print(f"archlayers {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
