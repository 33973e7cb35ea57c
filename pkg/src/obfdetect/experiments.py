"""Replication experiments on synthetic data."""

from __future__ import annotations

import statistics
from dataclasses import replace

from . import __version__
from .evaluation import cross_validate
from .pipeline import PipelineConfig
from .report import SAFE_PROTOCOL, UNSAFE_PROTOCOL
from .resample import SmoteConfig
from .synth import SYNTHETIC_NOTE, SynthConfig, generate_synthetic_corpus


def leakage_comparison(seeds, config=None, synth=None, k=5):
    """Minority recall with SMOTE inside the folds versus before the split.

    One synthetic corpus per seed (imbalanced, 20% obfuscated by default);
    both protocols see the same corpus, fold seed and pipeline seed. No
    gate is applied; the numbers are for side-by-side reading.
    """
    config = config or PipelineConfig("tree", smote=SmoteConfig(), name="Decision Tree")
    synth = synth or SynthConfig(obfuscated_fraction=0.2)
    rows = []
    for seed in seeds:
        corpus = generate_synthetic_corpus(replace(synth, seed=seed))
        cfg = replace(config, seed=seed, smote=None if config.smote is None else replace(config.smote, seed=seed))
        safe = cross_validate(cfg, corpus, k, seed)
        unsafe = cross_validate(cfg, corpus, k, seed, resample_before_split=True)
        rows.append({
            "seed": seed,
            "corpus_fingerprint": corpus.fingerprint(),
            "safe_recall": safe.mean["recall"],
            "unsafe_recall": unsafe.mean["recall"],
            "safe_f1": safe.mean["f1"],
            "unsafe_f1": unsafe.mean["f1"],
        })
    return {
        "kind": "leakage_report",
        "toolkit_version": __version__,
        "model": config.label,
        "k": k,
        "obfuscated_fraction": synth.obfuscated_fraction,
        "n_docs": synth.n_docs,
        "safe_protocol": SAFE_PROTOCOL,
        "unsafe_protocol": UNSAFE_PROTOCOL,
        "data_note": SYNTHETIC_NOTE,
        "rows": rows,
        "mean_safe_recall": statistics.fmean(r["safe_recall"] for r in rows),
        "mean_unsafe_recall": statistics.fmean(r["unsafe_recall"] for r in rows),
    }


def render_leakage(report):
    lines = [
        f"Minority-class recall by SMOTE ordering ({report['model']}, {report['k']} folds, "
        f"{report['n_docs']} docs, obfuscated fraction {report['obfuscated_fraction']})",
        f"safe   = {report['safe_protocol']}",
        f"UNSAFE = {report['unsafe_protocol']}",
        f"Data: {report['data_note']}",
        "",
        f"{'seed':>6}  {'safe recall':>11}  {'UNSAFE recall':>13}",
    ]
    for r in report["rows"]:
        lines.append(f"{r['seed']:>6}  {r['safe_recall']:>11.4f}  {r['unsafe_recall']:>13.4f}")
    lines.append(f"{'mean':>6}  {report['mean_safe_recall']:>11.4f}  {report['mean_unsafe_recall']:>13.4f}")
    lines.append("")
    lines.append("Report only: no threshold is applied to either column.")
    return "\n".join(lines) + "\n"
