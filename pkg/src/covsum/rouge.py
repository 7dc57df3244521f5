"""ROUGE-1, ROUGE-2, and ROUGE-L scoring with multi-reference averaging.

Matching is on raw tokens exactly as produced by the tokenizer: no stemming,
no stopword removal. Candidate and reference summaries are flattened to
single token sequences (sentence order preserved) before scoring, and the
aggregate over several references is the component-wise arithmetic mean of
the per-reference scores (no jackknifing). ROUGE-L uses the balanced F-score,
consistent with the n-gram metrics.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass

TokenSeq = Sequence[str]


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f: float


@dataclass(frozen=True)
class ReferenceScores:
    """ROUGE-1/2/L triple for one candidate-reference pair."""

    rouge1: RougeScore
    rouge2: RougeScore
    rougeL: RougeScore


@dataclass(frozen=True)
class RougeReport:
    """Per-reference scores plus their component-wise arithmetic mean."""

    rouge1: RougeScore
    rouge2: RougeScore
    rougeL: RougeScore
    per_reference: tuple[ReferenceScores, ...]


def _prf(overlap: int, cand_total: int, ref_total: int) -> RougeScore:
    precision = overlap / cand_total if cand_total > 0 else 0.0
    recall = overlap / ref_total if ref_total > 0 else 0.0
    if precision + recall > 0.0:
        f = 2.0 * precision * recall / (precision + recall)
    else:
        f = 0.0
    return RougeScore(precision, recall, f)


def ngram_counts(tokens: TokenSeq, n: int) -> Counter:
    """Multiset of contiguous n-grams; empty if the sequence is too short."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: TokenSeq, reference: TokenSeq, n: int) -> RougeScore:
    """Clipped n-gram overlap precision/recall/F between two token sequences."""
    cand = ngram_counts(candidate, n)
    ref = ngram_counts(reference, n)
    overlap = sum(min(count, ref[gram]) for gram, count in cand.items())
    return _prf(overlap, sum(cand.values()), sum(ref.values()))


def lcs_length(a: TokenSeq, b: TokenSeq) -> int:
    """Longest common subsequence length via the classic two-row DP."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                curr.append(prev[j - 1] + 1)
            else:
                curr.append(max(prev[j], curr[j - 1]))
        prev = curr
    return prev[len(b)]


def rouge_l(candidate: TokenSeq, reference: TokenSeq) -> RougeScore:
    """LCS-based precision/recall/F between two token sequences."""
    length = lcs_length(candidate, reference)
    return _prf(length, len(candidate), len(reference))


def _flatten(sentences: Sequence[TokenSeq]) -> list[str]:
    return [tok for sent in sentences for tok in sent]


def evaluate(summary_sentences: Sequence[TokenSeq], references) -> RougeReport:
    """Score a candidate summary against every reference and average.

    ``summary_sentences`` are token lists in selection order;
    ``references`` is a non-empty sequence of ReferenceSummary.
    """
    if not references:
        raise ValueError("at least one reference summary is required")
    candidate = _flatten(summary_sentences)

    per_ref = []
    for ref in references:
        ref_tokens = _flatten(ref.sentences)
        per_ref.append(
            ReferenceScores(
                rouge1=rouge_n(candidate, ref_tokens, 1),
                rouge2=rouge_n(candidate, ref_tokens, 2),
                rougeL=rouge_l(candidate, ref_tokens),
            )
        )

    def mean(metric: str) -> RougeScore:
        triples = [getattr(r, metric) for r in per_ref]
        n = len(triples)
        return RougeScore(
            precision=sum(t.precision for t in triples) / n,
            recall=sum(t.recall for t in triples) / n,
            f=sum(t.f for t in triples) / n,
        )

    return RougeReport(
        rouge1=mean("rouge1"),
        rouge2=mean("rouge2"),
        rougeL=mean("rougeL"),
        per_reference=tuple(per_ref),
    )
