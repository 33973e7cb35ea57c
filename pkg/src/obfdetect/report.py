"""Metric tables and bar-chart data built from cross-validation results."""

from __future__ import annotations

import hashlib
import json

from . import __version__
from .evaluation import select_best

SAFE_PROTOCOL = "leakage-safe: TF-IDF and SMOTE fitted on training folds only"
UNSAFE_PROTOCOL = "UNSAFE (--unsafe-resample-before-split): TF-IDF and SMOTE fitted on the full corpus before splitting"
METRIC_NOTE = (
    "precision, recall, F1 and accuracy are means over the test folds of stratified k-fold CV; "
    "positive class = 1 (obfuscated); ratios with a zero denominator count as 0"
)


def fingerprint(obj):
    """SHA-256 of the canonical JSON encoding of ``obj``."""
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def dumps(report):
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _row(result):
    mean, std = result.mean, result.std
    return {
        "model": result.config.label,
        "precision": mean["precision"],
        "recall": mean["recall"],
        "f1": mean["f1"],
        "mean_accuracy": mean["accuracy"],
        "std_accuracy": std["accuracy"],
        "train_accuracy_mean": result.train_mean["accuracy"],
        "train_accuracy_min": min(result.values("accuracy", "train")),
    }


def cv_report(results, input_fingerprint, corpus_fingerprint=None):
    """Report for one or more CV results over the same corpus/k/seed."""
    results = list(results)
    unsafe = any(r.resample_before_split for r in results)
    table = [_row(r) for r in results]
    return {
        "kind": "cv_report",
        "toolkit_version": __version__,
        "input_fingerprint": input_fingerprint,
        "corpus_fingerprint": corpus_fingerprint,
        "k": results[0].k,
        "seed": results[0].seed,
        "protocol": UNSAFE_PROTOCOL if unsafe else SAFE_PROTOCOL,
        "unsafe_resample_before_split": unsafe,
        "metric_note": METRIC_NOTE,
        "table": table,
        "bar_chart": {
            "title": "Mean cross-validation accuracy",
            "data": [{"model": row["model"], "mean_accuracy": row["mean_accuracy"]} for row in table],
        },
        "best_model": table[select_best(results)]["model"],
        "results": [r.to_dict() for r in results],
    }


def combine_reports(reports):
    """Merge several CV reports into one table, keeping each source's fingerprint."""
    table, bars, sources = [], [], []
    for rep in reports:
        tag = " [UNSAFE]" if rep.get("unsafe_resample_before_split") else ""
        for row in rep["table"]:
            row = dict(row, model=row["model"] + tag, source_fingerprint=rep["input_fingerprint"])
            table.append(row)
            bars.append({"model": row["model"], "mean_accuracy": row["mean_accuracy"]})
        sources.append({"input_fingerprint": rep["input_fingerprint"], "k": rep["k"], "seed": rep["seed"],
                        "protocol": rep["protocol"]})
    return {
        "kind": "combined_report",
        "toolkit_version": __version__,
        "input_fingerprint": fingerprint([s["input_fingerprint"] for s in sources]),
        "metric_note": METRIC_NOTE,
        "sources": sources,
        "table": table,
        "bar_chart": {"title": "Mean cross-validation accuracy", "data": bars},
    }


def render_table(report):
    headers = ("Model", "Precision", "Recall", "F1-Score", "Mean accuracy")
    rows = [
        (r["model"], f"{r['precision']:.4f}", f"{r['recall']:.4f}", f"{r['f1']:.4f}", f"{r['mean_accuracy']:.4f}")
        for r in report["table"]
    ]
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]

    def line(cells):
        first = cells[0].ljust(widths[0])
        return "  ".join([first] + [c.rjust(w) for c, w in zip(cells[1:], widths[1:])]).rstrip()

    out = [line(headers), line(tuple("-" * w for w in widths))]
    out.extend(line(r) for r in rows)
    return out


def render_text(report):
    lines = []
    if report["kind"] == "cv_report":
        lines.append(f"Cross-validated model evaluation ({report['k']} folds, seed {report['seed']})")
        lines.append(f"Protocol: {report['protocol']}")
    else:
        lines.append("Combined model evaluation")
        for src in report["sources"]:
            lines.append(f"Source {src['input_fingerprint'][:16]}: k={src['k']}, seed={src['seed']}; {src['protocol']}")
    lines.append("")
    lines.extend(render_table(report))
    lines.append("")
    if "best_model" in report:
        lines.append(f"Best by mean F1 (then accuracy): {report['best_model']}")
    lines.append(f"Note: {report['metric_note']}")
    lines.append(f"Input fingerprint: {report['input_fingerprint']}")
    return "\n".join(lines) + "\n"
