"""Corpus loading, tokenization, and vocabulary construction.

Corpus files are UTF-8 JSON Lines, one document per line:

    {"id": "...", "sentences": [["tok", ...], ...],
     "references": [[["tok", ...], ...], ...]}

``references`` is optional and only needed for evaluation. A document may
carry ``"raw_sentences": ["text", ...]`` instead of ``"sentences"``, in which
case each string is run through :func:`tokenize`.
"""

from __future__ import annotations

import importlib.resources
import json
import unicodedata
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path


class CorpusError(ValueError):
    """Raised for malformed corpus files or invariant violations."""


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> list[str]:
    """Split ``text`` on whitespace into lowercased tokens.

    Leading and trailing punctuation is stripped from each piece; pieces
    that become empty are dropped. No stemming or stopword removal.
    """
    tokens = []
    for piece in text.split():
        start, end = 0, len(piece)
        while start < end and _is_punct(piece[start]):
            start += 1
        while end > start and _is_punct(piece[end - 1]):
            end -= 1
        if start < end:
            tokens.append(piece[start:end].lower())
    return tokens


def _check_token(tok: str, where: str) -> str:
    if not tok:
        raise CorpusError(f"{where}: empty token")
    if any(c.isspace() for c in tok):
        raise CorpusError(f"{where}: token {tok!r} contains whitespace")
    return tok.lower()


@dataclass(frozen=True)
class Sentence:
    """One sentence of a document: a 0-based position and its tokens."""

    index: int
    tokens: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.tokens:
            raise CorpusError(f"sentence {self.index}: empty token list")


@dataclass(frozen=True)
class ReferenceSummary:
    """A gold summary, stored as a sequence of token lists."""

    sentences: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        if not self.sentences or any(not s for s in self.sentences):
            raise CorpusError("reference summary must have non-empty sentences")


@dataclass(frozen=True)
class Document:
    """A document to be summarized, plus any reference summaries."""

    id: str
    sentences: tuple[Sentence, ...]
    references: tuple[ReferenceSummary, ...] = ()

    def __post_init__(self) -> None:
        if not self.sentences:
            raise CorpusError(f"document {self.id!r}: no sentences")
        for pos, sent in enumerate(self.sentences):
            if sent.index != pos:
                raise CorpusError(
                    f"document {self.id!r}: sentence index {sent.index} at position {pos}"
                )

    @property
    def word_count(self) -> int:
        return sum(len(s.tokens) for s in self.sentences)

    def all_tokens(self) -> list[str]:
        return [t for s in self.sentences for t in s.tokens]


@dataclass(frozen=True)
class Vocabulary:
    """Dense term ids plus per-term document frequencies.

    ``doc_freq[i]`` counts documents (never references) containing term ``i``;
    terms that appear only in reference summaries are floored at 1 so their
    IDF stays finite.
    """

    term_to_id: dict[str, int]
    doc_freq: tuple[int, ...]
    num_docs: int

    def __post_init__(self) -> None:
        if len(self.term_to_id) != len(self.doc_freq):
            raise CorpusError("term_to_id and doc_freq sizes disagree")
        if any(df < 1 or df > self.num_docs for df in self.doc_freq):
            raise CorpusError("doc_freq entries must lie in [1, num_docs]")

    @property
    def size(self) -> int:
        return len(self.doc_freq)

    def ids(self, tokens: Iterable[str]) -> list[int]:
        """Map tokens to term ids, silently skipping out-of-vocabulary ones."""
        t2i = self.term_to_id
        return [t2i[t] for t in tokens if t in t2i]


def _parse_document(record: dict, line_no: int) -> Document:
    where = f"line {line_no}"
    if not isinstance(record, dict):
        raise CorpusError(f"{where}: expected a JSON object")
    doc_id = record.get("id")
    if not isinstance(doc_id, str) or not doc_id:
        raise CorpusError(f"{where}: missing or invalid 'id'")

    if "sentences" in record:
        raw = record["sentences"]
        if not isinstance(raw, list) or not raw:
            raise CorpusError(f"{where}: 'sentences' must be a non-empty list")
        sent_tokens = [
            tuple(_check_token(t, where) for t in sent) for sent in raw
        ]
    elif "raw_sentences" in record:
        raw = record["raw_sentences"]
        if not isinstance(raw, list) or not raw:
            raise CorpusError(f"{where}: 'raw_sentences' must be a non-empty list")
        sent_tokens = [tuple(tokenize(text)) for text in raw]
    else:
        raise CorpusError(f"{where}: missing 'sentences' key")

    for i, toks in enumerate(sent_tokens):
        if not toks:
            raise CorpusError(f"{where}: sentence {i} has no tokens")

    references = []
    for r, ref in enumerate(record.get("references", ())):
        if not isinstance(ref, list) or not ref:
            raise CorpusError(f"{where}: reference {r} must be a non-empty list")
        references.append(
            ReferenceSummary(
                tuple(
                    tuple(_check_token(t, where) for t in sent) for sent in ref
                )
            )
        )

    sentences = tuple(Sentence(i, toks) for i, toks in enumerate(sent_tokens))
    return Document(id=doc_id, sentences=sentences, references=tuple(references))


def load_corpus(path: str | Path) -> list[Document]:
    """Read a JSONL corpus file into Documents, in file order.

    Raises :class:`CorpusError` naming the offending line for malformed
    records; blank lines are skipped.
    """
    docs = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {line_no}: invalid JSON ({exc.msg})") from exc
            docs.append(_parse_document(record, line_no))
    return docs


def load_bundled_corpus() -> list[Document]:
    """Load the selftest corpus shipped inside the package."""
    ref = importlib.resources.files("covsum").joinpath("data/selftest_corpus.jsonl")
    if not ref.is_file():
        raise CorpusError(
            "bundled selftest corpus is missing; regenerate it with "
            "scripts/make_selftest_corpus.py"
        )
    with importlib.resources.as_file(ref) as path:
        return load_corpus(path)


def save_corpus(docs: Sequence[Document], path: str | Path) -> None:
    """Write documents back out in the canonical JSONL schema."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            record = {
                "id": doc.id,
                "sentences": [list(s.tokens) for s in doc.sentences],
            }
            if doc.references:
                record["references"] = [
                    [list(sent) for sent in ref.sentences] for ref in doc.references
                ]
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def build_vocabulary(docs: Sequence[Document]) -> Vocabulary:
    """Assign dense term ids and count per-term document frequencies.

    Every token occurring in a document body or a reference summary gets an
    id (first-seen order). Document frequency counts each document at most
    once and ignores references; reference-only terms get doc_freq 1.
    """
    if not docs:
        raise CorpusError("cannot build a vocabulary from an empty corpus")

    term_to_id: dict[str, int] = {}
    doc_freq: list[int] = []

    for doc in docs:
        seen: set[int] = set()
        for sent in doc.sentences:
            for tok in sent.tokens:
                tid = term_to_id.get(tok)
                if tid is None:
                    tid = len(doc_freq)
                    term_to_id[tok] = tid
                    doc_freq.append(0)
                seen.add(tid)
        for tid in seen:
            doc_freq[tid] += 1

    for doc in docs:
        for ref in doc.references:
            for sent in ref.sentences:
                for tok in sent:
                    if tok not in term_to_id:
                        term_to_id[tok] = len(doc_freq)
                        doc_freq.append(1)

    return Vocabulary(
        term_to_id=term_to_id, doc_freq=tuple(doc_freq), num_docs=len(docs)
    )
