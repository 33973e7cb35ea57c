"""Command-line interface: synth, cv, train, predict, report, leakage."""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import sys
from pathlib import Path

from . import __version__
from .corpus import FORMATS, dumps_corpus, load_corpus
from .evaluation import grid_search
from .exceptions import DataValidationError, SerializationError, TrainingError
from .experiments import leakage_comparison, render_leakage
from .models import FAMILIES
from .pipeline import PipelineConfig, default_configs, fit_pipeline, load_pipeline, save_pipeline
from .report import combine_reports, cv_report, dumps, fingerprint, render_text
from .synth import SYNTHETIC_NOTE, SynthConfig, generate_synthetic_corpus

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_TRAINING = 4
EXIT_IO = 5

EXIT_CODES_HELP = """\
exit codes:
  0  success
  2  usage error (unknown flag, missing argument)
  3  data or config validation error
  4  training failure
  5  I/O error (missing/unreadable file, corrupt saved pipeline)
"""


class UsageError(Exception):
    pass


def _read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataValidationError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _file_fingerprint(path):
    return fingerprint(Path(path).read_text(encoding="utf-8"))


def _write(out_dir, name, text):
    path = out_dir / name
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    return name


def _write_manifest(out_dir, command, seed, resolved, inputs, outputs, extra=None):
    manifest = {
        "command": command,
        "toolkit_version": __version__,
        "seed": seed,
        "resolved_config": resolved,
        "inputs": inputs,
        "outputs": sorted(outputs),
    }
    manifest.update(extra or {})
    manifest["input_fingerprint"] = fingerprint(
        {k: manifest[k] for k in ("command", "toolkit_version", "seed", "resolved_config")}
        | {"inputs": [i.get("fingerprint") for i in inputs], **(extra or {})}
    )
    _write(out_dir, "manifest.json", dumps(manifest))
    return manifest["input_fingerprint"]


def _out_dir(path):
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_configs(paths, seed):
    if not paths:
        return default_configs(seed), []
    configs, inputs = [], []
    for path in paths:
        data = _read_json(path)
        items = data if isinstance(data, list) else [data]
        configs.extend(PipelineConfig.from_dict(item, default_seed=seed) for item in items)
        inputs.append({"role": "config", "path": str(path), "fingerprint": _file_fingerprint(path)})
    return configs, inputs


def cmd_synth(args):
    if args.config:
        config = SynthConfig.from_dict(_read_json(args.config), base_dir=Path(args.config).parent, seed=args.seed)
        inputs = [{"role": "synth_config", "path": args.config, "fingerprint": _file_fingerprint(args.config)}]
    else:
        config = SynthConfig(seed=args.seed)
        inputs = []
    corpus = generate_synthetic_corpus(config)
    out = _out_dir(args.out)
    name = _write(out, f"corpus.{args.format}", dumps_corpus(corpus, args.format))
    _write_manifest(out, "synth", args.seed, config.to_dict(), inputs, [name, "manifest.json"],
                    {"format": args.format, "corpus_fingerprint": corpus.fingerprint(), "data_note": SYNTHETIC_NOTE})
    print(f"wrote {out / name} ({len(corpus)} documents, class counts {corpus.class_counts})")


def cmd_cv(args):
    corpus = load_corpus(args.corpus, args.format)
    configs, inputs = _load_configs(args.config, args.seed)
    inputs = [{"role": "corpus", "path": args.corpus, "fingerprint": corpus.fingerprint()}] + inputs
    result = grid_search(configs, corpus, args.k, args.seed, resample_before_split=args.unsafe_resample_before_split)
    out = _out_dir(args.out)
    outputs = ["cv_report.json", "cv_report.txt", "manifest.json"]
    fp = _write_manifest(out, "cv", args.seed, [c.to_dict() for c in configs], inputs, outputs,
                         {"k": args.k, "unsafe_resample_before_split": args.unsafe_resample_before_split})
    report = cv_report(result.results, fp, corpus.fingerprint())
    _write(out, "cv_report.json", dumps(report))
    text = render_text(report)
    _write(out, "cv_report.txt", text)
    sys.stdout.write(text)


def _timestamp():
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    moment = (_dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc) if epoch
              else _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0))
    return moment.isoformat()


def cmd_train(args):
    corpus = load_corpus(args.corpus, args.format)
    if args.config:
        configs, inputs = _load_configs([args.config], args.seed)
        if len(configs) != 1:
            raise DataValidationError(f"{args.config}: train needs exactly one pipeline config, got {len(configs)}")
        config = configs[0]
    else:
        config = next(c for c in default_configs(args.seed) if c.model == args.model)
        inputs = []
    inputs = [{"role": "corpus", "path": args.corpus, "fingerprint": corpus.fingerprint()}] + inputs
    pipeline = fit_pipeline(config, corpus, timestamp=_timestamp())
    out = _out_dir(args.out)
    save_pipeline(pipeline, out / "pipeline.json")
    _write_manifest(out, "train", args.seed, config.to_dict(), inputs, ["pipeline.json", "manifest.json"])
    acc = pipeline.training["metrics"]["accuracy"]
    print(f"wrote {out / 'pipeline.json'} ({config.label}, vocabulary {pipeline.tfidf.dimension}, "
          f"training accuracy {acc:.4f})")


def cmd_predict(args):
    if bool(args.text) == bool(args.input):
        raise UsageError("give either --text (repeatable) or --input FILE")
    pipeline = load_pipeline(args.pipeline)
    if args.text:
        texts = args.text
    else:
        texts = [line for line in Path(args.input).read_text(encoding="utf-8").splitlines() if line.strip()]
    lines = []
    for text in texts:
        pred = pipeline.predict_one(text)
        lines.append(json.dumps({"label": pred.label, "score": pred.score, "text": text}, ensure_ascii=False))
    body = "\n".join(lines) + "\n"
    if args.out:
        out = _out_dir(args.out)
        _write(out, "predictions.jsonl", body)
        inputs = [{"role": "pipeline", "path": args.pipeline, "fingerprint": _file_fingerprint(args.pipeline)}]
        if args.input:
            inputs.append({"role": "texts", "path": args.input, "fingerprint": _file_fingerprint(args.input)})
        else:
            inputs.append({"role": "texts", "fingerprint": fingerprint(texts)})
        _write_manifest(out, "predict", None, None, inputs, ["predictions.jsonl", "manifest.json"])
    sys.stdout.write(body)


def cmd_report(args):
    reports = []
    for path in args.cv:
        data = _read_json(path)
        if data.get("kind") != "cv_report":
            raise DataValidationError(f"{path}: not a cv report")
        reports.append(data)
    combined = combine_reports(reports)
    out = _out_dir(args.out)
    _write(out, "report.json", dumps(combined))
    text = render_text(combined)
    _write(out, "report.txt", text)
    inputs = [{"role": "cv_report", "path": p, "fingerprint": _file_fingerprint(p)} for p in args.cv]
    _write_manifest(out, "report", None, None, inputs, ["report.json", "report.txt", "manifest.json"])
    sys.stdout.write(text)


def cmd_leakage(args):
    config = next(c for c in default_configs(args.seed) if c.model == args.model)
    seeds = [args.seed + i for i in range(args.seeds)]
    synth = SynthConfig(n_docs=args.n_docs, obfuscated_fraction=args.obfuscated_fraction)
    report = leakage_comparison(seeds, config, synth, args.k)
    out = _out_dir(args.out)
    fp = _write_manifest(out, "leakage", args.seed,
                         {"pipeline": config.to_dict(), "synth": synth.to_dict() | {"seed": None}, "seeds": seeds},
                         [], ["leakage_report.json", "leakage_report.txt", "manifest.json"], {"k": args.k})
    report["input_fingerprint"] = fp
    _write(out, "leakage_report.json", dumps(report))
    text = render_leakage(report)
    _write(out, "leakage_report.txt", text)
    sys.stdout.write(text)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="obfdetect",
        description="Obfuscated abusive-text detection experiments.",
        epilog=EXIT_CODES_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text, epilog=EXIT_CODES_HELP,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.set_defaults(func=func)
        return p

    p = add("synth", cmd_synth, "generate a synthetic labeled corpus")
    p.add_argument("--config", help="synth config JSON (defaults: 200 docs, 30%% obfuscated)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--format", choices=FORMATS, default="csv")

    p = add("cv", cmd_cv, "cross-validate one or more pipeline configs and write a metrics report")
    p.add_argument("--corpus", required=True)
    p.add_argument("--format", choices=FORMATS, help="corpus format (default: file suffix)")
    p.add_argument("--config", action="append", help="pipeline config JSON (object or list); repeatable; "
                   "default: the four standard families")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--unsafe-resample-before-split", action="store_true",
                   help="replication only: fit TF-IDF and SMOTE on the whole corpus before splitting (leaks)")

    p = add("train", cmd_train, "fit a pipeline on a corpus and save it")
    p.add_argument("--corpus", required=True)
    p.add_argument("--format", choices=FORMATS)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--config", help="pipeline config JSON")
    group.add_argument("--model", choices=[f for f in FAMILIES if f != "majority"],
                       help="use the default config of this family")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = add("predict", cmd_predict, "label texts with a saved pipeline (JSON lines on stdout)")
    p.add_argument("--pipeline", required=True)
    p.add_argument("--text", action="append", help="text to classify; repeatable")
    p.add_argument("--input", help="file with one text per line")
    p.add_argument("--out", help="also write predictions.jsonl and a manifest here")

    p = add("report", cmd_report, "combine cv reports into one metrics table and bar-chart data file")
    p.add_argument("--cv", action="append", required=True, help="cv_report.json; repeatable")
    p.add_argument("--out", required=True)

    p = add("leakage", cmd_leakage, "compare minority recall with SMOTE inside vs before the CV split")
    p.add_argument("--seed", type=int, required=True, help="first corpus seed")
    p.add_argument("--seeds", type=int, default=10, help="number of consecutive seeds")
    p.add_argument("--model", choices=[f for f in FAMILIES if f != "majority"], default="tree")
    p.add_argument("--n-docs", type=int, default=200)
    p.add_argument("--obfuscated-fraction", type=float, default=0.2)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--out", required=True)
    return parser


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"obfdetect {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SerializationError, OSError) as exc:
        print(f"obfdetect {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DataValidationError as exc:
        print(f"obfdetect {args.command}: invalid input: {exc}", file=sys.stderr)
        return EXIT_DATA
    except TrainingError as exc:
        print(f"obfdetect {args.command}: training failed: {exc}", file=sys.stderr)
        return EXIT_TRAINING
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
