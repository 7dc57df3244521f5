"""Sparse TF-IDF vectors, dense embedding vectors, and clamped cosine similarity.

All similarity in the selection engine flows through :func:`cosine`, which
normalizes its inputs and clamps the result into [0, 1] so that downstream
probability estimates stay well-defined even for dense embeddings whose raw
cosines can go negative.

Heterogeneous representations are combined with :func:`concat`: each part is
unit-normalized independently and similarity between two concatenated vectors
is the unweighted mean of the per-part cosines, which keeps every part's
contribution bounded and reduces to the plain cosine for a single part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corpus import Vocabulary

_UNIT_TOL = 1e-9


@dataclass(frozen=True)
class SparseVector:
    """Term-id -> weight map over a vocabulary of size ``dim``; zeros omitted."""

    entries: dict[int, float]
    dim: int

    def __post_init__(self) -> None:
        for tid, w in self.entries.items():
            if not 0 <= tid < self.dim:
                raise ValueError(f"term id {tid} out of range for dim {self.dim}")
            if w == 0.0 or not math.isfinite(w):
                raise ValueError(f"weight for term {tid} must be finite and nonzero")

    def norm(self) -> float:
        return math.sqrt(math.fsum(w * w for w in self.entries.values()))


@dataclass(frozen=True)
class DenseVector:
    """Fixed-length real vector (float64 numpy array under the hood)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("DenseVector requires a 1-D array")
        if not np.isfinite(arr).all():
            raise ValueError("DenseVector entries must be finite")
        object.__setattr__(self, "values", arr)

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


Vector = SparseVector | DenseVector


@dataclass(frozen=True)
class ConcatVector:
    """Ordered tuple of unit-normalized (or zero) parts."""

    parts: tuple[Vector, ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValueError("ConcatVector needs at least one part")
        for i, part in enumerate(self.parts):
            n = part.norm()
            if n != 0.0 and abs(n - 1.0) > _UNIT_TOL:
                raise ValueError(f"part {i} has norm {n}, expected 1 or 0")


AnyVector = SparseVector | DenseVector | ConcatVector


def idf(vocab: Vocabulary, term_id: int) -> float:
    """Inverse document frequency ln(N / df) for one term id."""
    if not 0 <= term_id < vocab.size:
        raise KeyError(f"term id {term_id} not in vocabulary of size {vocab.size}")
    return math.log(vocab.num_docs / vocab.doc_freq[term_id])


def bow_vector(tokens: list[str], vocab: Vocabulary) -> SparseVector:
    """TF-IDF bag-of-words vector; out-of-vocabulary tokens are skipped."""
    counts: dict[int, int] = {}
    for tid in vocab.ids(tokens):
        counts[tid] = counts.get(tid, 0) + 1
    entries = {}
    for tid, tf in counts.items():
        w = tf * idf(vocab, tid)
        if w != 0.0:
            entries[tid] = w
    return SparseVector(entries=entries, dim=vocab.size)


def normalize(v: Vector) -> Vector:
    """Scale to unit Euclidean norm; the zero vector passes through unchanged."""
    n = v.norm()
    if n == 0.0:
        return v
    if isinstance(v, SparseVector):
        return SparseVector({tid: w / n for tid, w in v.entries.items()}, v.dim)
    return DenseVector(v.values / n)


def concat(parts: list[Vector]) -> ConcatVector:
    """Unit-normalize each part independently and bundle them in order."""
    if not parts:
        raise ValueError("concat requires at least one part")
    return ConcatVector(tuple(normalize(p) for p in parts))


def _dot(a: Vector, b: Vector) -> float:
    if isinstance(a, SparseVector) and isinstance(b, SparseVector):
        small, big = (a.entries, b.entries) if len(a.entries) <= len(b.entries) else (b.entries, a.entries)
        return math.fsum(w * big[tid] for tid, w in small.items() if tid in big)
    if isinstance(a, DenseVector) and isinstance(b, DenseVector):
        return float(np.dot(a.values, b.values))
    # Mixed sparse/dense of equal dim.
    sparse, dense = (a, b) if isinstance(a, SparseVector) else (b, a)
    return math.fsum(w * float(dense.values[tid]) for tid, w in sparse.entries.items())


def _cosine_flat(a: Vector, b: Vector) -> float:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    na, nb = a.norm(), b.norm()
    if na == 0.0 or nb == 0.0:
        return 0.0
    return _dot(a, b) / (na * nb)


def cosine(a: AnyVector, b: AnyVector) -> float:
    """Similarity in [0, 1]: cosine of the normalized inputs, clamped at 0.

    For concatenated vectors the raw value is the mean of per-part cosines,
    clamped once at the end. Any comparison against a zero vector scores 0.
    Shape mismatches (dim, or part count / per-part dims) raise ValueError.
    """
    if isinstance(a, ConcatVector) != isinstance(b, ConcatVector):
        raise ValueError("cannot compare concatenated and flat vectors")
    if isinstance(a, ConcatVector):
        if len(a.parts) != len(b.parts):
            raise ValueError(
                f"part count mismatch: {len(a.parts)} vs {len(b.parts)}"
            )
        raw = math.fsum(
            _cosine_flat(pa, pb) for pa, pb in zip(a.parts, b.parts)
        ) / len(a.parts)
    else:
        raw = _cosine_flat(a, b)
    # Clamp: negatives would break the probability estimates built on top,
    # and rounding can push self-similarity a hair past 1.
    return min(1.0, max(0.0, raw))
