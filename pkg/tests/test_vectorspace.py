import math

import pytest
from hypothesis import given, strategies as st

from qsim.preprocess import PreprocessConfig, default_stopwords, preprocess
from qsim.vectorspace import TfVector, cosine_tf, tf_vectorize

tf_entries = st.dictionaries(
    st.text(alphabet="abcdefghijklmnopqrst", min_size=1, max_size=6),
    st.integers(min_value=1, max_value=9),
    max_size=20,
)


def dense_cosine(a: TfVector, b: TfVector) -> float:
    """Brute-force oracle: dense dot product over the union vocabulary."""
    vocab = sorted(set(a.entries) | set(b.entries))
    va = [a.entries.get(t, 0) for t in vocab]
    vb = [b.entries.get(t, 0) for t in vocab]
    na = math.sqrt(sum(x * x for x in va))
    nb = math.sqrt(sum(x * x for x in vb))
    if na == 0 or nb == 0:
        return 0.0
    return sum(x * y for x, y in zip(va, vb)) / (na * nb)


def test_tf_vectorize_counts():
    v = tf_vectorize(["read", "read", "java"])
    assert v.entries == {"read": 2, "java": 1}
    assert v.norm == pytest.approx(math.sqrt(5), rel=1e-12)


def test_tf_vectorize_single():
    v = tf_vectorize(["age"])
    assert v.entries == {"age": 1}
    assert v.norm == 1.0


def test_tf_vectorize_empty():
    v = tf_vectorize([])
    assert v.entries == {}
    assert v.norm == 0.0


def test_zero_counts_rejected():
    with pytest.raises(ValueError):
        TfVector({"a": 0})


def test_identical_vectors_score_one():
    v = tf_vectorize(["age"])
    assert cosine_tf(v, v) == 1.0


def test_disjoint_vocabulary_is_orthogonal():
    cfg = PreprocessConfig(stopwords=default_stopwords())
    a = tf_vectorize(preprocess("what is your age", cfg))
    b = tf_vectorize(preprocess("how old are you", cfg))
    assert a.entries and b.entries
    assert cosine_tf(a, b) == 0.0


def test_half_overlap():
    a = TfVector({"a": 1, "b": 1})
    b = TfVector({"b": 1, "c": 1})
    assert cosine_tf(a, b) == pytest.approx(0.5, abs=1e-12)


def test_zero_norm_convention():
    empty = tf_vectorize([])
    v = tf_vectorize(["x"])
    assert cosine_tf(empty, v) == 0.0
    assert cosine_tf(v, empty) == 0.0
    assert cosine_tf(empty, empty) == 0.0


@given(tf_entries, tf_entries)
def test_symmetry_exact(ea, eb):
    a = TfVector(ea)
    b = TfVector(eb)
    assert cosine_tf(a, b) == cosine_tf(b, a)


@given(tf_entries, tf_entries)
def test_range_and_dense_oracle(ea, eb):
    a = TfVector(ea)
    b = TfVector(eb)
    score = cosine_tf(a, b)
    assert 0.0 <= score <= 1.0
    assert score == pytest.approx(dense_cosine(a, b), abs=1e-12)


@given(tf_entries.filter(bool))
def test_self_similarity(entries):
    v = TfVector(entries)
    assert cosine_tf(v, v) == pytest.approx(1.0, abs=1e-12)


@given(tf_entries.filter(bool), st.integers(min_value=2, max_value=7))
def test_scale_invariance(entries, k):
    v = TfVector(entries)
    scaled = TfVector({t: c * k for t, c in entries.items()})
    assert cosine_tf(v, scaled) == pytest.approx(1.0, abs=1e-9)


@given(tf_entries, tf_entries, tf_entries)
def test_scaling_one_side_preserves_score(ea, eb, _):
    a = TfVector(ea)
    b = TfVector(eb)
    doubled = TfVector({t: 2 * c for t, c in ea.items()})
    assert cosine_tf(doubled, b) == pytest.approx(cosine_tf(a, b), abs=1e-9)
