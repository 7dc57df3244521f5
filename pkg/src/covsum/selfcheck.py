"""Runnable self-diagnostics.

Each check here is an executable statement about the library: the greedy
engine agrees with a brute-force oracle, probabilities behave like
probabilities, analytic gradients match finite differences, coverage-aware
selection beats pure relevance on the bundled planted corpus, and the whole
pipeline is bitwise deterministic. The CLI ``selftest`` subcommand runs all
of them and prints one line per check; the test suite runs the same
functions.
"""

from __future__ import annotations

import io
import json
import math
import time
from dataclasses import dataclass

import numpy as np

from . import oracles
from .corpus import Document, Sentence, build_vocabulary, load_bundled_corpus
from .embedding import (
    EmbeddingModel,
    TrainConfig,
    TrainingParagraph,
    build_training_paragraphs,
    dm_context,
    negative_sampling_gradients,
    negative_sampling_loss,
    positive_pair_loss,
    train,
)
from .rouge import evaluate, lcs_length, rouge_l, rouge_n
from .selection import (
    DocView,
    SelectorConfig,
    build_docview,
    build_subthemes,
    cov_jxdtd,
    cov_xdtd,
    dissatisfaction,
    greedy_select,
    summary_sentences,
)
from .synthetic import random_documents
from .vectors import DenseVector, cosine

ORACLE_SEED = 101
ORACLE_DOCS = 50
ALPHAS = (0.0, 0.5, 1.0, 5.0)
RATIOS = (0.10, 0.5)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _oracle_views() -> list[DocView]:
    docs = random_documents(ORACLE_DOCS, seed=ORACLE_SEED)
    vocab = build_vocabulary(docs)
    return [build_docview(d, "BOW", vocab) for d in docs]


def check_greedy_matches_oracle() -> CheckResult:
    """Every per-step pick (and score) of the engine equals the brute-force
    evaluator's, across methods, alphas, and two budgets."""
    start = time.perf_counter()
    views = _oracle_views()
    runs = 0
    for view in views:
        for method in ("MMR", "XDTD", "JXDTD"):
            for alpha in ALPHAS:
                for ratio in RATIOS:
                    got = greedy_select(
                        view, SelectorConfig(method=method, alpha=alpha, ratio=ratio)
                    )
                    want_sel, want_scores = oracles.brute_force_select(
                        view.rel, view.sim, list(view.word_counts), method, alpha, ratio
                    )
                    if list(got.selected) != want_sel:
                        return CheckResult(
                            "greedy-oracle-equivalence",
                            False,
                            f"pick mismatch: {view.doc_id} {method} alpha={alpha} "
                            f"ratio={ratio}: {list(got.selected)} != {want_sel}",
                        )
                    if list(got.scores) != [float(s) for s in want_scores]:
                        return CheckResult(
                            "greedy-oracle-equivalence",
                            False,
                            f"score mismatch: {view.doc_id} {method} alpha={alpha} "
                            f"ratio={ratio}",
                        )
                    runs += 1
    elapsed = time.perf_counter() - start
    return CheckResult(
        "greedy-oracle-equivalence",
        elapsed < 10.0,
        f"{runs} selections agree with the oracle",
    )


def check_first_pick_reduction() -> CheckResult:
    """With nothing selected yet the joint model's dissatisfaction factor is
    an empty product, so its first pick must equal the plain sub-theme
    model's first pick."""
    views = _oracle_views()
    compared = 0
    for view in views:
        for alpha in ALPHAS:
            x = greedy_select(view, SelectorConfig(method="XDTD", alpha=alpha))
            j = greedy_select(view, SelectorConfig(method="JXDTD", alpha=alpha))
            if x.selected[0] != j.selected[0]:
                return CheckResult(
                    "first-pick-reduction",
                    False,
                    f"{view.doc_id} alpha={alpha}: XDTD first pick "
                    f"{x.selected[0]} != JXDTD first pick {j.selected[0]}",
                )
            compared += 1
    return CheckResult(
        "first-pick-reduction", True, f"{compared} first picks identical"
    )


def check_probability_invariants(docs: list[Document] | None = None) -> CheckResult:
    """Sub-theme weights sum to 1, similarity columns normalize to 0 or 1,
    coverage and dissatisfaction stay inside [0, 1], and dissatisfaction
    never increases as the selection grows."""
    docs = docs if docs is not None else load_bundled_corpus()
    vocab = build_vocabulary(docs)
    tol = 1e-9
    checked = 0
    for doc in docs:
        view = build_docview(doc, "BOW", vocab)
        themes = build_subthemes(view)
        n = len(view.rel)
        if abs(float(np.sum(themes.subtheme_given_doc)) - 1.0) > tol:
            return CheckResult(
                "probability-invariants", False, f"{doc.id}: P(T|D) does not sum to 1"
            )
        for k in range(n):
            colsum = float(np.sum(themes.sentence_given_subtheme[:, k]))
            if not (abs(colsum) <= tol or abs(colsum - 1.0) <= tol):
                return CheckResult(
                    "probability-invariants",
                    False,
                    f"{doc.id}: column {k} sums to {colsum}",
                )
        picks = greedy_select(
            view, SelectorConfig(method="JXDTD", alpha=1.0, ratio=0.4)
        ).selected
        prev = np.ones(n)
        for t in range(len(picks) + 1):
            dis = dissatisfaction(themes, list(picks[:t]))
            if np.any(dis < 0.0) or np.any(dis > 1.0):
                return CheckResult(
                    "probability-invariants", False, f"{doc.id}: dissatisfaction outside [0,1]"
                )
            if np.any(dis > prev):
                return CheckResult(
                    "probability-invariants", False, f"{doc.id}: dissatisfaction increased"
                )
            for s in range(n):
                for cov in (cov_xdtd(themes, s), cov_jxdtd(themes, dis, s)):
                    if not (0.0 <= cov <= 1.0 + tol):
                        return CheckResult(
                            "probability-invariants",
                            False,
                            f"{doc.id}: coverage {cov} outside [0,1]",
                        )
            prev = dis
        checked += 1
    return CheckResult(
        "probability-invariants", True, f"{checked} documents satisfy all invariants"
    )


def check_rouge_golden() -> CheckResult:
    """Hand-derived ROUGE values, plus LCS against the exponential oracle
    (exhaustive over short sequences, sampled at lengths 5-7)."""
    start = time.perf_counter()
    tol = 1e-9
    if abs(rouge_n(["a", "b", "c"], ["a", "b", "d"], 1).f - 2.0 / 3.0) > tol:
        return CheckResult("rouge-golden-and-lcs", False, "unigram golden case failed")
    if abs(rouge_l(["a", "c", "b"], ["a", "b", "c"]).f - 2.0 / 3.0) > tol:
        return CheckResult("rouge-golden-and-lcs", False, "LCS golden case failed")

    symbols = ("x", "y", "z")
    short: list[tuple[str, ...]] = [()]
    frontier: list[tuple[str, ...]] = [()]
    for _ in range(4):
        frontier = [s + (c,) for s in frontier for c in symbols]
        short.extend(frontier)
    pairs = 0
    for a in short:
        for b in short:
            if lcs_length(a, b) != oracles.lcs_exponential(list(a), list(b)):
                return CheckResult(
                    "rouge-golden-and-lcs", False, f"LCS mismatch on {a!r} vs {b!r}"
                )
            pairs += 1
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        a = [symbols[i] for i in rng.integers(0, 3, int(rng.integers(5, 8)))]
        b = [symbols[i] for i in rng.integers(0, 3, int(rng.integers(5, 8)))]
        if lcs_length(a, b) != oracles.lcs_exponential(a, b):
            return CheckResult(
                "rouge-golden-and-lcs", False, f"LCS mismatch on {a!r} vs {b!r}"
            )
        pairs += 1
    elapsed = time.perf_counter() - start
    return CheckResult(
        "rouge-golden-and-lcs",
        elapsed < 5.0,
        f"golden cases and {pairs} LCS oracle pairs",
    )


def check_gradients() -> CheckResult:
    """Analytic negative-sampling gradients vs central differences on random
    tiny models of both kinds."""
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    step = 1e-4
    worst = 0.0
    for trial in range(20):
        kind = "dm" if trial % 2 == 0 else "dbow"
        d = int(rng.integers(2, 6))
        vocab_size = int(rng.integers(4, 11))
        n_paras = int(rng.integers(1, 4))
        ctx = int(rng.integers(0, 3)) if kind == "dm" else 0
        paras = [
            TrainingParagraph(
                i, tuple(int(t) for t in rng.integers(0, vocab_size, int(rng.integers(1, 7))))
            )
            for i in range(n_paras)
        ]
        model = EmbeddingModel(
            kind=kind,
            para_matrix=rng.normal(0.0, 1.0, (n_paras, d)),
            word_out=rng.normal(0.0, 1.0, (vocab_size, d)),
            word_in=rng.normal(0.0, 1.0, (vocab_size, d)) if kind == "dm" else None,
            context_size=ctx,
        )
        items = [
            (pi, j, tuple(int(x) for x in rng.integers(0, vocab_size, 3)))
            for pi, par in enumerate(paras)
            for j in range(len(par.tokens))
        ]
        grads = negative_sampling_gradients(model, paras, items)
        mats = (model.para_matrix, model.word_in, model.word_out)
        for mat, grad in zip(mats, grads):
            if mat is None:
                continue
            for idx in np.ndindex(mat.shape):
                orig = mat[idx]
                mat[idx] = orig + step
                up = negative_sampling_loss(model, paras, items)
                mat[idx] = orig - step
                down = negative_sampling_loss(model, paras, items)
                mat[idx] = orig
                fd = (up - down) / (2.0 * step)
                err = abs(grad[idx] - fd) / max(abs(grad[idx]) + abs(fd), 1e-3)
                worst = max(worst, err)
    elapsed = time.perf_counter() - start
    return CheckResult(
        "embedding-gradients",
        worst < 1e-4 and elapsed < 5.0,
        f"max relative error {worst:.2e} over 20 models",
    )


def check_dbow_invariances() -> CheckResult:
    """The DBOW objective ignores word order (exactly, with negatives pinned
    to their tokens), and a DM predictor with no context is bitwise the
    paragraph vector, i.e. DBOW's predictor."""
    rng = np.random.default_rng(19)
    par = TrainingParagraph(0, tuple(int(t) for t in rng.integers(0, 6, 9)))
    dbow = EmbeddingModel(
        kind="dbow",
        para_matrix=rng.normal(0.0, 1.0, (1, 8)),
        word_out=rng.normal(0.0, 1.0, (6, 8)),
        word_in=None,
        context_size=0,
    )
    negs = [tuple(int(x) for x in rng.integers(0, 6, 3)) for _ in par.tokens]
    items = [(0, j, negs[j]) for j in range(len(par.tokens))]
    perm = [int(p) for p in rng.permutation(len(par.tokens))]
    par_permuted = TrainingParagraph(0, tuple(par.tokens[p] for p in perm))
    items_permuted = [(0, j, negs[perm[j]]) for j in range(len(par.tokens))]

    loss_a = negative_sampling_loss(dbow, [par], items)
    loss_b = negative_sampling_loss(dbow, [par_permuted], items_permuted)
    if loss_a != loss_b:
        return CheckResult(
            "dbow-invariances", False, f"permuted loss differs: {loss_a} != {loss_b}"
        )
    if positive_pair_loss(dbow, [par]) != positive_pair_loss(dbow, [par_permuted]):
        return CheckResult("dbow-invariances", False, "positive objective differs")

    dm = EmbeddingModel(
        kind="dm",
        para_matrix=dbow.para_matrix,
        word_out=dbow.word_out,
        word_in=rng.normal(0.0, 1.0, (6, 8)),
        context_size=0,
    )
    for j in range(len(par.tokens)):
        h_dm = dm_context(dm, par, j).values
        h_db = dm_context(dbow, par, j).values
        if not (np.array_equal(h_dm, dbow.para_matrix[0]) and np.array_equal(h_db, h_dm)):
            return CheckResult(
                "dbow-invariances", False, f"predictor at position {j} not bitwise equal"
            )
    return CheckResult(
        "dbow-invariances", True, "objective permutation-exact; zero-context predictors bitwise equal"
    )


def _duplicate_view() -> DocView:
    u1 = DenseVector(np.array([1.0, 0.0, 0.0]))
    u2 = DenseVector(np.array([1.0, 0.0, 0.0]))
    w = DenseVector(np.array([0.0, 1.0, 0.0]))
    doc = DenseVector(np.array([0.6, 0.5, math.sqrt(0.39)]))
    vecs = [u1, u2, w]
    rel = np.array([cosine(v, doc) for v in vecs])
    sim = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            sim[i, j] = cosine(vecs[i], vecs[j])
    sentences = (Sentence(0, ("u",)), Sentence(1, ("u",)), Sentence(2, ("w",)))
    return DocView(
        doc_id="dup", sentences=sentences, word_counts=(1, 1, 1), rel=rel, sim=sim
    )


def check_duplicate_suppression() -> CheckResult:
    """On a {u, u, w} document with orthogonal u and w, pure relevance takes
    the duplicate second; redundancy- and dissatisfaction-aware coverage
    switch to w."""
    view = _duplicate_view()
    picks = {}
    for method in ("RELEVANCE_ONLY", "MMR", "JXDTD"):
        got = greedy_select(view, SelectorConfig(method=method, alpha=1.0, ratio=0.5))
        picks[method] = tuple(got.selected)
    want = {"RELEVANCE_ONLY": (0, 1), "MMR": (0, 2), "JXDTD": (0, 2)}
    if picks != want:
        return CheckResult("duplicate-suppression", False, f"picks {picks} != {want}")
    return CheckResult(
        "duplicate-suppression",
        True,
        "relevance keeps the duplicate; MMR and JXDTD switch to w",
    )


def check_coverage_beats_relevance(docs: list[Document] | None = None) -> CheckResult:
    """On the planted corpus, both sub-theme coverage models must beat pure
    relevance on mean unigram F."""
    start = time.perf_counter()
    docs = docs if docs is not None else load_bundled_corpus()
    vocab = build_vocabulary(docs)
    means = {}
    for method in ("RELEVANCE_ONLY", "XDTD", "JXDTD"):
        scores = []
        for doc in docs:
            view = build_docview(doc, "BOW", vocab)
            got = greedy_select(view, SelectorConfig(method=method, alpha=1.0, ratio=0.10))
            scores.append(evaluate(summary_sentences(view, got), doc.references).rouge1.f)
        means[method] = float(np.mean(scores))
    elapsed = time.perf_counter() - start
    x_margin = means["XDTD"] - means["RELEVANCE_ONLY"]
    j_margin = means["JXDTD"] - means["RELEVANCE_ONLY"]
    return CheckResult(
        "coverage-beats-relevance",
        x_margin > 0.0 and j_margin > 0.0 and elapsed < 30.0,
        f"mean R1-F rel={means['RELEVANCE_ONLY']:.3f} "
        f"xdtd={means['XDTD']:.3f} (+{x_margin:.3f}) "
        f"jxdtd={means['JXDTD']:.3f} (+{j_margin:.3f})",
    )


def _pipeline_bytes(docs: list[Document], seed: int) -> bytes:
    """One miniature end-to-end run, rendered to bytes: train both model
    kinds, summarize a small grid, score, and serialize everything."""
    vocab = build_vocabulary(docs)
    paragraphs, para_index = build_training_paragraphs(docs, vocab)
    cfg = TrainConfig(dim=12, context_size=2, epochs=2, negatives=3, seed=seed)
    models = {kind: train(paragraphs, cfg, kind, vocab.size) for kind in ("dm", "dbow")}

    out = io.BytesIO()
    for kind in ("dm", "dbow"):
        model = models[kind]
        out.write(model.para_matrix.tobytes())
        out.write(model.word_out.tobytes())
        if model.word_in is not None:
            out.write(model.word_in.tobytes())
    records = []
    for doc in docs:
        for representation in ("BOW", "DM", "DBOW", "BOW+DM", "BOW+DBOW"):
            kind = representation.split("+")[-1].lower()
            model = models[kind] if kind in models else None
            view = build_docview(
                doc,
                representation,
                vocab,
                model=model,
                para_ids=para_index[doc.id] if model else None,
            )
            for method in ("RELEVANCE_ONLY", "MMR", "XDTD", "JXDTD"):
                got = greedy_select(view, SelectorConfig(method=method, alpha=1.0))
                report = evaluate(summary_sentences(view, got), doc.references)
                records.append(
                    {
                        "summary": got.to_dict(),
                        "representation": representation,
                        "rouge1_f": report.rouge1.f,
                        "rouge2_f": report.rouge2.f,
                        "rougeL_f": report.rougeL.f,
                    }
                )
    out.write(json.dumps(records, sort_keys=True).encode())
    return out.getvalue()


def check_determinism(docs: list[Document] | None = None) -> CheckResult:
    """Two identically seeded end-to-end runs must produce identical bytes."""
    docs = docs if docs is not None else load_bundled_corpus()
    subset = docs[:4]
    first = _pipeline_bytes(subset, seed=3)
    second = _pipeline_bytes(subset, seed=3)
    if first != second:
        return CheckResult("determinism", False, "reruns differ")
    return CheckResult(
        "determinism", True, f"two runs produced identical {len(first)} bytes"
    )


def run_all(docs: list[Document] | None = None) -> list[CheckResult]:
    """Run every check; a crash inside one becomes a failed result."""
    docs = docs if docs is not None else load_bundled_corpus()
    checks = (
        check_greedy_matches_oracle,
        check_first_pick_reduction,
        lambda: check_probability_invariants(docs),
        check_rouge_golden,
        check_gradients,
        check_dbow_invariances,
        check_duplicate_suppression,
        lambda: check_coverage_beats_relevance(docs),
        lambda: check_determinism(docs),
    )
    names = (
        "greedy-oracle-equivalence",
        "first-pick-reduction",
        "probability-invariants",
        "rouge-golden-and-lcs",
        "embedding-gradients",
        "dbow-invariances",
        "duplicate-suppression",
        "coverage-beats-relevance",
        "determinism",
    )
    results = []
    for name, fn in zip(names, checks):
        try:
            results.append(fn())
        except Exception as exc:  # pragma: no cover - defensive
            results.append(CheckResult(name, False, f"crashed: {exc!r}"))
    return results
