"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Runtimes are wall-clock and measured inside the test, so fixture setup
(for example generating the shared 200-document corpus) is excluded only
where the criterion is about a downstream step.
"""

import itertools
import json
import math
import random
import time

import numpy as np
import pytest

from obfdetect.cli import EXIT_OK, run
from obfdetect.corpus import stratified_k_fold
from obfdetect.evaluation import cross_validate, grid_search
from obfdetect.experiments import leakage_comparison, render_leakage
from obfdetect.metrics import ConfusionMatrix, compute_metrics
from obfdetect.models import DecisionTree, RandomForest
from obfdetect.models.linear import logistic_loss_and_grad
from obfdetect.pipeline import (
    PipelineConfig,
    default_configs,
    fit_pipeline,
    load_pipeline,
    save_pipeline,
    vectorize,
)
from obfdetect.report import cv_report
from obfdetect.resample import SmoteConfig, k_nearest_minority, smote_balance
from obfdetect.synth import SynthConfig, generate_synthetic_corpus
from obfdetect.textprep import fit_tfidf, transform_tfidf


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail, elapsed=None, limit=None):
        timing = ""
        if elapsed is not None:
            timing = f" [{elapsed:.2f}s" + (f" < {limit:g}s" if limit is not None else "") + "]"
        with capsys.disabled():
            print(f"\nCRITERION {number:>2}: {'PASS' if ok else 'FAIL'} {detail}{timing}")
        assert ok, detail

    return emit


def _timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


# 1 ------------------------------------------------------------------------

def _random_docs(rng):
    alphabet = ["habari", "h@bari", "mj1nga", "sawa", "karibu", "u.p.o", "n", "x"]
    return [[rng.choice(alphabet) for _ in range(rng.randint(1, 7))] for _ in range(rng.randint(1, 10))]


def _brute_tfidf(docs, query, mode):
    n = len(docs)
    vocab = sorted({t for d in docs for t in d})
    out = {}
    in_vocab = [t for t in query if t in vocab]
    for pos, term in enumerate(vocab):
        df = sum(1 for d in docs if term in d)
        idf = math.log(n / df) if mode == "raw" else math.log((1 + n) / (1 + df)) + 1
        tf = in_vocab.count(term) / len(in_vocab) if in_vocab else 0.0
        out[pos] = tf * idf
    return out


def test_criterion_01_tfidf_oracle(report):
    def check():
        rng = random.Random(1)
        worst = 0.0
        for _ in range(20):
            docs = _random_docs(rng)
            queries = docs + [["habari", "zzz"], ["zzz"], []]
            for mode in ("raw", "smoothed"):
                model = fit_tfidf(docs, mode)
                for q in queries:
                    got = transform_tfidf(model, q).weights
                    for col, want in _brute_tfidf(docs, q, mode).items():
                        have = got.get(col, 0.0)
                        if want == 0.0:
                            worst = max(worst, abs(have))
                        else:
                            worst = max(worst, abs(have - want) / abs(want))
        return worst

    worst, elapsed = _timed(check)
    report(1, worst <= 1e-12 and elapsed < 1.0,
           f"TF-IDF vs brute force, 20 corpora x 2 IDF modes, max rel err {worst:.2e} (tol 1e-12)", elapsed, 1)


# 2 ------------------------------------------------------------------------

def test_criterion_02_metric_identities(report):
    def check():
        rng = np.random.default_rng(2)
        failures = 0
        for s in range(1000):
            # every 4th matrix zeroes some cells to exercise the zero-denominator rules
            cells = rng.integers(0, 50, size=4)
            if s % 4 == 0:
                cells[rng.random(4) < 0.5] = 0
            if cells.sum() == 0:
                cells[1] = 1
            tp, tn, fp, fn = (int(c) for c in cells)
            m = compute_metrics(ConfusionMatrix(tp, tn, fp, fn))
            p = tp / (tp + fp) if tp + fp else 0.0
            r = tp / (tp + fn) if tp + fn else 0.0
            f = 2 * p * r / (p + r) if p + r else 0.0
            ok = (
                abs(m.accuracy - (tp + tn) / (tp + tn + fp + fn)) <= 1e-12
                and abs(m.precision - p) <= 1e-12
                and abs(m.recall - r) <= 1e-12
                and abs(m.f1 - f) <= 1e-12
            )
            if p > 0 and r > 0:
                ok &= min(p, r) - 1e-12 <= m.f1 <= max(p, r) + 1e-12
                ok &= m.f1 <= (p + r) / 2 + 1e-12
            failures += not ok
        return failures

    failures, elapsed = _timed(check)
    report(2, failures == 0 and elapsed < 1.0,
           f"metric identities on 1000 confusion matrices, {failures} failures (tol 1e-12)", elapsed, 1)


# 3 ------------------------------------------------------------------------

def test_criterion_03_smote_geometry(report):
    def check():
        rng = np.random.default_rng(3)
        bad_points = bad_counts = not_repro = n_points = 0
        for s in range(50):
            d = int(rng.integers(1, 7))
            n_min = int(rng.integers(2, 15))
            n_maj = int(rng.integers(n_min + 1, 60))
            minority_label = int(rng.integers(2))
            X = np.round(rng.normal(size=(n_min + n_maj, d)), 3)
            y = np.array([minority_label] * n_min + [1 - minority_label] * n_maj)
            order = rng.permutation(y.size)
            X, y = X[order], y[order]
            config = SmoteConfig(k_neighbors=int(rng.integers(1, 7)), target_ratio=float(rng.uniform(0.5, 1.0)),
                                 seed=s)
            res = smote_balance(X, y, config)
            again = smote_balance(X, y, config)
            not_repro += not (res.features.tobytes() == again.features.tobytes()
                              and res.labels.tobytes() == again.labels.tobytes())
            if np.sum(res.labels == minority_label) != max(n_min, math.ceil(config.target_ratio * n_maj)):
                bad_counts += 1
            if not np.array_equal(res.features[: y.size], X):
                bad_counts += 1
            min_idx = np.flatnonzero(y == minority_label)
            pos = {int(g): o for o, g in enumerate(min_idx)}
            for row, rec in zip(res.features[res.synthetic_flags], res.records):
                n_points += 1
                xi, xj = X[rec.i], X[rec.j]
                neighbours = k_nearest_minority(pos[rec.i], X[min_idx], config.k_neighbors)
                ok = (
                    0.0 <= rec.lam <= 1.0
                    and y[rec.i] == y[rec.j] == minority_label
                    and pos[rec.j] in neighbours
                    and np.allclose(row, xi + rec.lam * (xj - xi), rtol=0, atol=1e-12)
                    and np.all(row >= np.minimum(xi, xj)) and np.all(row <= np.maximum(xi, xj))
                )
                bad_points += not ok
        return bad_points, bad_counts, not_repro, n_points

    (bad_points, bad_counts, not_repro, n_points), elapsed = _timed(check)
    ok = bad_points == 0 and bad_counts == 0 and not_repro == 0 and elapsed < 5.0
    report(3, ok, f"SMOTE on 50 sets: {n_points - bad_points}/{n_points} synthetic points on their segment, "
                  f"{bad_counts} count mismatches, {not_repro} non-reproducible runs", elapsed, 5)


# 4 ------------------------------------------------------------------------

def test_criterion_04_logistic_gradient(report):
    def check():
        rng = np.random.default_rng(4)
        worst = 0.0
        h = 1e-6
        for _ in range(20):
            n, d = int(rng.integers(3, 30)), int(rng.integers(1, 8))
            X = rng.normal(size=(n, d))
            y = rng.integers(0, 2, size=n).astype(float)
            w, b, l2 = rng.normal(size=d), float(rng.normal()), float(rng.choice([0.0, 1e-4, 0.1]))
            _, gw, gb = logistic_loss_and_grad(w, b, X, y, l2)
            analytic = np.append(gw, gb)
            numeric = np.empty(d + 1)
            for j in range(d + 1):
                e = np.zeros(d + 1)
                e[j] = h
                plus = logistic_loss_and_grad(w + e[:d], b + e[d], X, y, l2)[0]
                minus = logistic_loss_and_grad(w - e[:d], b - e[d], X, y, l2)[0]
                numeric[j] = (plus - minus) / (2 * h)
            denom = max(np.linalg.norm(analytic), np.linalg.norm(numeric), 1e-12)
            worst = max(worst, np.linalg.norm(analytic - numeric) / denom)
        return worst

    worst, elapsed = _timed(check)
    report(4, worst < 1e-6 and elapsed < 1.0,
           f"logistic gradient vs central differences, 20 problems, max rel err {worst:.2e} (tol 1e-6)", elapsed, 1)


# 5 ------------------------------------------------------------------------

def _conflict_free(corpus, config):
    _, X = vectorize(config, corpus.texts)
    seen = {}
    for row, label in zip(X, corpus.labels):
        if seen.setdefault(row.tobytes(), label) != label:
            return False
    return True


def test_criterion_05_tree_memorization(report, synth_corpus):
    def check():
        config = PipelineConfig("tree", {"max_depth": None}, SmoteConfig(seed=0), name="Decision Tree")
        corpora = [synth_corpus] + [
            generate_synthetic_corpus(SynthConfig(n_docs=120, obfuscated_fraction=0.25, seed=s)) for s in (1, 2, 3)
        ]
        rows = []
        for corpus in corpora:
            assert _conflict_free(corpus, config)
            pipe = fit_pipeline(config, corpus)
            m = pipe.training["metrics"]
            preds = pipe.predict(corpus.texts)
            recall = float(np.mean(preds[corpus.labels == 1] == 1))
            rows.append((m["accuracy"], m["recall"], recall))
        return rows

    rows, elapsed = _timed(check)
    ok = all(acc == 1.0 and rec == 1.0 and direct == 1.0 for acc, rec, direct in rows) and elapsed < 5.0
    report(5, ok, f"unbounded tree training accuracy/recall on 4 conflict-free corpora "
                  f"(200-doc seed 42 first): {[(a, r) for a, r, _ in rows]}", elapsed, 5)


# 6 ------------------------------------------------------------------------

def test_criterion_06_forest_matches_tree(report):
    def check():
        rng = np.random.default_rng(6)
        grid = np.array(list(itertools.product(np.linspace(0, 1, 10), repeat=3)))  # 1000 inputs
        mismatches = 0
        for s in range(5):
            X = np.round(rng.random((int(rng.integers(20, 80)), 3)) * 9) / 9
            y = rng.integers(0, 2, size=X.shape[0])
            y[:2] = [0, 1]
            tree = DecisionTree(random_state=s).fit(X, y)
            forest = RandomForest(n_trees=1, bootstrap=False, max_features=None, random_state=s).fit(X, y)
            mismatches += int(np.sum(tree.predict(grid) != forest.predict(grid)))
        return mismatches, grid.shape[0]

    (mismatches, n_grid), elapsed = _timed(check)
    report(6, mismatches == 0 and elapsed < 5.0,
           f"1-tree forest vs lone tree on a {n_grid}-point grid x 5 datasets, {mismatches} mismatches",
           elapsed, 5)


# 7 ------------------------------------------------------------------------

def test_criterion_07_cv_protocol(report):
    def check():
        corpus = generate_synthetic_corpus(SynthConfig(n_docs=100, obfuscated_fraction=0.3, seed=7))
        problems = []
        for seed in range(5):
            plan = stratified_k_fold(corpus, 5, seed)
            tested = sorted(i for f in range(5) for i in plan.test_ids(f))
            if tested != list(range(100)):
                problems.append(f"seed {seed}: partition broken")
            for label in (0, 1):
                per_fold = [sum(corpus.labels[i] == label for i in plan.test_ids(f)) for f in range(5)]
                if max(per_fold) - min(per_fold) > 1:
                    problems.append(f"seed {seed}: class {label} fold counts {per_fold}")
        res = cross_validate(PipelineConfig("majority"), corpus, 5, 0)
        tested = sorted(i for f in res.folds for i in f.test_ids)
        if tested != list(range(100)):
            problems.append("cross_validate partition broken")
        return problems, res.mean["accuracy"]

    (problems, acc), elapsed = _timed(check)
    ok = not problems and acc == 0.7 and elapsed < 10.0
    report(7, ok, f"5-fold CV on 100 docs (70/30): partition+stratification problems={problems or 'none'}, "
                  f"majority-class mean accuracy {acc!r} (expected 0.7 exactly)", elapsed, 10)


# 8 ------------------------------------------------------------------------

def test_criterion_08_end_to_end(report, synth_corpus, capsys):
    def check():
        result = grid_search(default_configs(0), synth_corpus, k=5, seed=0)
        return result, cv_report(result.results, "acceptance", synth_corpus.fingerprint())

    (result, rep), elapsed = _timed(check)
    table = rep["table"]
    dt = next(r for r in result.results if r.config.model == "tree")
    dt_train = dt.values("accuracy", "train")
    shape_ok = len(table) == 4 and all(
        {"model", "precision", "recall", "f1", "mean_accuracy"} <= set(row) for row in table)
    ok = shape_ok and dt_train == [1.0] * 5 and elapsed < 60.0
    with capsys.disabled():
        for row in table:
            print(f"    {row['model']:<20} P={row['precision']:.3f} R={row['recall']:.3f} "
                  f"F1={row['f1']:.3f} acc={row['mean_accuracy']:.3f} train_acc={row['train_accuracy_mean']:.3f}")
    report(8, ok, f"default 200-doc corpus, 4 configs x 5 folds; DT training-fold accuracy {dt_train}",
           elapsed, 60)


# 9 ------------------------------------------------------------------------

def test_criterion_09_leakage_report(report, capsys):
    def check():
        rep = leakage_comparison(range(10), synth=SynthConfig(obfuscated_fraction=0.2))
        return rep, render_leakage(rep)

    (rep, text), elapsed = _timed(check)
    ok = (
        len(rep["rows"]) == 10
        and all({"safe_recall", "unsafe_recall"} <= set(r) for r in rep["rows"])
        and "UNSAFE" in text and "--unsafe-resample-before-split" in text
    )
    with capsys.disabled():
        print("\n" + "\n".join("    " + line for line in text.splitlines()))
    report(9, ok, f"leakage report over 10 seeds generated (report only): mean safe recall "
                  f"{rep['mean_safe_recall']:.3f}, mean UNSAFE recall {rep['mean_unsafe_recall']:.3f}", elapsed)


# 10 -----------------------------------------------------------------------

def _random_strings(vocab, n=100, seed=10):
    rng = random.Random(seed)
    pool = list(vocab) + ["zzz", "h@b@r1", "M.J.I.N.G.A", "sawa!!", "42", "ñandú"]
    return [" ".join(rng.choice(pool) for _ in range(rng.randint(0, 8))) for _ in range(n)]


def test_criterion_10_determinism_and_roundtrip(report, synth_corpus, tmp_path):
    def check():
        corpus_dir = tmp_path / "synth"
        assert run(["synth", "--seed", "42", "--out", str(corpus_dir)]) == EXIT_OK
        outs = []
        for name in ("run1", "run2"):
            out = tmp_path / name
            assert run(["cv", "--corpus", str(corpus_dir / "corpus.csv"), "--seed", "0", "--out", str(out)]) == EXIT_OK
            outs.append(out)
        identical = all((outs[0] / f).read_bytes() == (outs[1] / f).read_bytes()
                        for f in ("cv_report.json", "cv_report.txt", "manifest.json"))
        rep = json.loads((outs[0] / "cv_report.json").read_text())
        manifest = json.loads((outs[0] / "manifest.json").read_text())
        fingerprinted = rep["input_fingerprint"] == manifest["input_fingerprint"]

        mismatches = 0
        for config in default_configs(0):
            pipe = fit_pipeline(config, synth_corpus)
            loaded = load_pipeline(save_pipeline(pipe, tmp_path / f"{config.model}.json"))
            texts = _random_strings(pipe.tfidf.vocabulary.terms)
            a, b = pipe.predict(texts), loaded.predict(texts)
            mismatches += int(np.sum(a != b))
            sa, sb = pipe.decision_scores(texts), loaded.decision_scores(texts)
            if sa is not None and sa.tobytes() != sb.tobytes():
                mismatches += 1
        return identical, fingerprinted, mismatches

    (identical, fingerprinted, mismatches), elapsed = _timed(check)
    ok = identical and fingerprinted and mismatches == 0
    report(10, ok, f"cv reports byte-identical across runs={identical}, report carries manifest "
                   f"fingerprint={fingerprinted}, save/load mismatches on 100 random strings x 4 models={mismatches}",
           elapsed)
