"""Greedy sentence selection under a word budget.

Each step picks the unselected sentence maximizing

    rel(D, S) + alpha * cov(D, S, selected)

where cov is one of:

    RELEVANCE_ONLY  always 0 (alpha has no effect)
    MMR             minus the mean similarity to the already-selected
    XDTD            expected sub-theme coverage, selection-independent
    JXDTD           XDTD damped by how satisfied each sub-theme already is

Every sentence doubles as a sub-theme: P(S|T_k) is sentence-sentence
similarity normalized down each column, P(T_k|D) is relevance normalized
over the document. JXDTD tracks a per-sub-theme "dissatisfaction"
prod(1 - P(S'|T_k)) over selected S', so a sub-theme already covered well
stops attracting near-duplicates.

Selection stops once the selected word count reaches ceil(ratio * doc
words); the sentence that crosses the budget is kept. Ties go to the
lower sentence index.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .corpus import Document, Sentence, Vocabulary
from .embedding import EmbeddingModel, ParagraphIds, paragraph_vector
from .vectors import AnyVector, bow_vector, concat, cosine

METHODS = ("RELEVANCE_ONLY", "MMR", "XDTD", "JXDTD")
REPRESENTATIONS = ("BOW", "DM", "DBOW", "BOW+DM", "BOW+DBOW")


@dataclass(frozen=True)
class SelectorConfig:
    method: str = "JXDTD"
    alpha: float = 1.0
    ratio: float = 0.10
    budget_unit: str = "WORDS"

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if not (self.alpha >= 0.0 and math.isfinite(self.alpha)):
            raise ValueError("alpha must be finite and >= 0")
        if not 0.0 < self.ratio <= 1.0:
            raise ValueError("ratio must be in (0, 1]")
        if self.budget_unit != "WORDS":
            raise ValueError("only WORDS budgets are supported")


@dataclass(frozen=True, eq=False)
class DocView:
    """Everything selection needs to know about one document: precomputed
    relevance ``rel[s]`` and pairwise similarity ``sim[i, j]``, both in
    [0, 1], plus per-sentence word counts."""

    doc_id: str
    sentences: tuple[Sentence, ...]
    word_counts: tuple[int, ...]
    rel: np.ndarray
    sim: np.ndarray


@dataclass(frozen=True, eq=False)
class SubThemeModel:
    sentence_given_subtheme: np.ndarray  # [s, k] = P(S_s | T_k), columns sum to 1 or 0
    subtheme_given_doc: np.ndarray  # [k] = P(T_k | D), sums to 1


@dataclass(frozen=True)
class Summary:
    doc_id: str
    method: str
    alpha: float
    selected: tuple[int, ...]
    scores: tuple[float, ...]
    budget_words: int
    words_used: int

    def to_dict(self) -> dict:
        return {
            "id": self.doc_id,
            "method": self.method,
            "alpha": self.alpha,
            "selected": list(self.selected),
            "scores": list(self.scores),
            "budget_words": self.budget_words,
            "words_used": self.words_used,
        }

def _sentence_vectors(
    doc: Document,
    representation: str,
    vocab: Vocabulary | None,
    model: EmbeddingModel | None,
    para_ids: ParagraphIds | None,
) -> tuple[list[AnyVector], AnyVector]:
    parts = representation.split("+")
    if "BOW" in parts and vocab is None:
        raise ValueError("BOW representation requires a vocabulary")
    dense_part = next((p for p in parts if p != "BOW"), None)
    if dense_part is not None:
        if model is None or para_ids is None:
            raise ValueError(
                f"{representation} representation requires a trained model "
                "and the document's paragraph ids"
            )
        if model.kind != dense_part.lower():
            raise ValueError(
                f"model kind {model.kind!r} does not provide {dense_part} vectors"
            )
        if len(para_ids.sentences) != len(doc.sentences):
            raise ValueError(
                f"document {doc.id!r} has {len(doc.sentences)} sentences but "
                f"{len(para_ids.sentences)} sentence paragraphs"
            )

    def make(tokens, pid):
        built = []
        for part in parts:
            if part == "BOW":
                built.append(bow_vector(tokens, vocab))
            else:
                built.append(paragraph_vector(model, pid))
        return built[0] if len(built) == 1 else concat(built)

    sent_vecs = [
        make(s.tokens, para_ids.sentences[i] if para_ids else None)
        for i, s in enumerate(doc.sentences)
    ]
    doc_vec = make(doc.all_tokens(), para_ids.document if para_ids else None)
    return sent_vecs, doc_vec


def build_docview(
    doc: Document,
    representation: str,
    vocab: Vocabulary | None = None,
    model: EmbeddingModel | None = None,
    para_ids: ParagraphIds | None = None,
) -> DocView:
    """Vectorize a document and precompute its relevance/similarity tables."""
    if representation not in REPRESENTATIONS:
        raise ValueError(
            f"representation must be one of {REPRESENTATIONS}, got {representation!r}"
        )
    if not doc.sentences:
        raise ValueError(f"document {doc.id!r} has no sentences")

    sent_vecs, doc_vec = _sentence_vectors(doc, representation, vocab, model, para_ids)
    n = len(sent_vecs)
    rel = np.array([cosine(v, doc_vec) for v in sent_vecs])
    sim = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            sim[i, j] = sim[j, i] = cosine(sent_vecs[i], sent_vecs[j])

    return DocView(
        doc_id=doc.id,
        sentences=doc.sentences,
        word_counts=tuple(len(s.tokens) for s in doc.sentences),
        rel=rel,
        sim=sim,
    )


def rank_by_relevance(view: DocView) -> list[int]:
    """Sentence indices from most to least relevant, ties by index."""
    return sorted(range(len(view.rel)), key=lambda s: (-view.rel[s], s))


def sentence_given_subtheme(sim: np.ndarray) -> np.ndarray:
    """Column-normalize the similarity matrix into P(S | T_k).

    A column with zero mass (a sub-theme no sentence resembles, possible
    only with all-zero vectors) stays all-zero rather than uniform: such a
    sub-theme should attract nothing.
    """
    n = sim.shape[0]
    p = np.zeros((n, n))
    for k in range(n):
        mass = np.sum(sim[:, k])
        if mass > 0.0:
            p[:, k] = sim[:, k] / mass
    return p


def subtheme_given_doc(rel: np.ndarray) -> np.ndarray:
    """Normalize relevance into P(T_k | D); uniform if all relevance is zero."""
    mass = np.sum(rel)
    if mass > 0.0:
        return rel / mass
    warnings.warn(
        "document relevance mass is zero; falling back to uniform sub-theme weights",
        stacklevel=2,
    )
    return np.full(len(rel), 1.0 / len(rel))


def build_subthemes(view: DocView) -> SubThemeModel:
    return SubThemeModel(
        sentence_given_subtheme=sentence_given_subtheme(view.sim),
        subtheme_given_doc=subtheme_given_doc(view.rel),
    )


def cov_mmr(sim: np.ndarray, selected: list[int], s: int) -> float:
    """Negated mean similarity to the selected set; 0 while nothing is selected."""
    if not selected:
        return 0.0
    return -math.fsum(sim[sp, s] for sp in selected) / len(selected)


def cov_xdtd(themes: SubThemeModel, s: int) -> float:
    """Expected coverage sum_k P(S|T_k) P(T_k|D); independent of the selection."""
    return float(np.sum(themes.sentence_given_subtheme[s] * themes.subtheme_given_doc))


def dissatisfaction(themes: SubThemeModel, selected: list[int]) -> np.ndarray:
    """Per-sub-theme prod(1 - P(S'|T_k)) over the selected sentences."""
    dis = np.ones(len(themes.subtheme_given_doc))
    for sp in selected:
        dis = dis * (1.0 - themes.sentence_given_subtheme[sp])
    return dis


def cov_jxdtd(themes: SubThemeModel, dis: np.ndarray, s: int) -> float:
    """XDTD weighted by current dissatisfaction; equals XDTD when nothing
    is selected yet."""
    return float(
        np.sum(themes.sentence_given_subtheme[s] * dis * themes.subtheme_given_doc)
    )


def greedy_select(view: DocView, config: SelectorConfig) -> Summary:
    """Select sentences under the word budget.

    RELEVANCE_ONLY and XDTD scores never change as the selection grows, so
    those run as a single sort; MMR and JXDTD re-score every remaining
    sentence each step. Both paths share the budget rule: keep picking
    while the words used so far are below ceil(ratio * total words), and
    keep the pick that crosses the line.
    """
    n = len(view.word_counts)
    budget = math.ceil(config.ratio * sum(view.word_counts))
    method = config.method

    themes = build_subthemes(view) if method in ("XDTD", "JXDTD") else None

    selected: list[int] = []
    scores: list[float] = []
    words_used = 0

    if method in ("RELEVANCE_ONLY", "XDTD"):
        if method == "XDTD":
            base = [view.rel[s] + config.alpha * cov_xdtd(themes, s) for s in range(n)]
        else:
            base = [view.rel[s] + config.alpha * 0.0 for s in range(n)]
        for s in sorted(range(n), key=lambda s: (-base[s], s)):
            if words_used >= budget:
                break
            selected.append(s)
            scores.append(float(base[s]))
            words_used += view.word_counts[s]
    else:
        remaining = list(range(n))
        dis = np.ones(n)
        while remaining and words_used < budget:
            best, best_score = None, None
            for s in remaining:
                if method == "MMR":
                    cov = cov_mmr(view.sim, selected, s)
                else:
                    cov = cov_jxdtd(themes, dis, s)
                score = view.rel[s] + config.alpha * cov
                if best_score is None or score > best_score:
                    best, best_score = s, score
            selected.append(best)
            scores.append(float(best_score))
            remaining.remove(best)
            words_used += view.word_counts[best]
            if method == "JXDTD":
                dis = dis * (1.0 - themes.sentence_given_subtheme[best])

    return Summary(
        doc_id=view.doc_id,
        method=method,
        alpha=config.alpha,
        selected=tuple(selected),
        scores=tuple(scores),
        budget_words=budget,
        words_used=words_used,
    )


def summary_sentences(view: DocView, summary: Summary) -> list[tuple[str, ...]]:
    """Token tuples of the selected sentences, in selection order."""
    return [view.sentences[i].tokens for i in summary.selected]
