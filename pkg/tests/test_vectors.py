import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from covsum.corpus import build_vocabulary
from covsum.vectors import (
    ConcatVector,
    DenseVector,
    SparseVector,
    bow_vector,
    concat,
    cosine,
    idf,
    normalize,
)

from conftest import make_doc

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


def dense(n=4):
    return hnp.arrays(np.float64, n, elements=finite).map(DenseVector)


def test_sparse_vector_validation():
    with pytest.raises(ValueError):
        SparseVector({5: 1.0}, dim=3)  # id out of range
    with pytest.raises(ValueError):
        SparseVector({0: 0.0}, dim=3)  # explicit zero entry
    with pytest.raises(ValueError):
        SparseVector({0: math.inf}, dim=3)


def test_dense_vector_validation():
    with pytest.raises(ValueError):
        DenseVector(np.array([[1.0]]))
    with pytest.raises(ValueError):
        DenseVector(np.array([np.nan]))


def test_idf_and_bow_weights():
    docs = [
        make_doc("a", [["common", "rare"]]),
        make_doc("b", [["common"]]),
    ]
    vocab = build_vocabulary(docs)
    cid, rid = vocab.term_to_id["common"], vocab.term_to_id["rare"]
    assert idf(vocab, cid) == 0.0  # in every document
    assert idf(vocab, rid) == pytest.approx(math.log(2.0))

    vec = bow_vector(["rare", "rare", "common"], vocab)
    # tf * idf; the zero-idf term is dropped entirely
    assert vec.entries == {rid: pytest.approx(2.0 * math.log(2.0))}
    assert vec.dim == vocab.size


def test_bow_vector_skips_oov():
    vocab = build_vocabulary([make_doc("a", [["x"]]), make_doc("b", [["y"]])])
    vec = bow_vector(["x", "zzz"], vocab)
    assert set(vec.entries) == {vocab.term_to_id["x"]}


def test_cosine_golden():
    a = DenseVector(np.array([1.0, 0.0]))
    b = DenseVector(np.array([0.0, 1.0]))
    assert cosine(a, a) == 1.0
    assert cosine(a, b) == 0.0
    c = DenseVector(np.array([1.0, 1.0]))
    assert cosine(a, c) == pytest.approx(1 / math.sqrt(2))


def test_cosine_mixed_sparse_dense_agree():
    s = SparseVector({0: 2.0, 2: 1.0}, dim=3)
    d = DenseVector(np.array([2.0, 0.0, 1.0]))
    probe = DenseVector(np.array([1.0, 0.5, -0.25]))
    assert cosine(s, probe) == pytest.approx(cosine(d, probe))
    assert cosine(s, d) == pytest.approx(1.0)


def test_cosine_zero_vector_is_zero():
    z = DenseVector(np.zeros(3))
    a = DenseVector(np.array([1.0, 2.0, 3.0]))
    assert cosine(z, a) == 0.0
    assert cosine(z, z) == 0.0


@given(dense(), dense())
def test_cosine_symmetric_and_clamped(a, b):
    ab, ba = cosine(a, b), cosine(b, a)
    assert ab == ba
    assert 0.0 <= ab <= 1.0


@given(dense(), st.floats(1e-3, 1e3))
def test_cosine_scale_invariant(a, scale):
    assume(a.norm() > 1e-6)
    b = DenseVector(a.values * scale)
    assert cosine(a, b) == pytest.approx(1.0)


@given(dense())
def test_normalize_idempotent(v):
    # renormalizing can shift the last ulp (the first norm lands at 1 +/- 1ulp),
    # so idempotence holds to rounding, not bitwise
    n1 = normalize(v)
    n2 = normalize(n1)
    assert np.allclose(n1.values, n2.values, rtol=1e-14, atol=0.0)
    if v.norm() > 0.0:
        assert n1.norm() == pytest.approx(1.0)


def test_concat_normalizes_parts():
    c = concat([DenseVector(np.array([3.0, 4.0])), DenseVector(np.zeros(2))])
    assert isinstance(c, ConcatVector)
    assert c.parts[0].norm() == pytest.approx(1.0)
    assert c.parts[1].norm() == 0.0


def test_concat_cosine_is_mean_of_part_cosines():
    a1, a2 = DenseVector(np.array([1.0, 0.0])), DenseVector(np.array([1.0, 1.0]))
    b1, b2 = DenseVector(np.array([1.0, 1.0])), DenseVector(np.array([0.0, 1.0]))
    got = cosine(concat([a1, a2]), concat([b1, b2]))
    want = (cosine(a1, b1) + cosine(a2, b2)) / 2.0
    assert got == pytest.approx(want)


def test_concat_rejects_mismatched_arity():
    a = concat([DenseVector(np.array([1.0])), DenseVector(np.array([1.0]))])
    b = concat([DenseVector(np.array([1.0]))])
    with pytest.raises(ValueError):
        cosine(a, b)
