import numpy as np
import pytest

from simtopics.corpus import bundle_from_tokens
from simtopics.descriptors import (
    RANKING_FREQUENCY_FALLBACK,
    RANKING_INFORMATION_GAIN,
    DescriptorConfig,
    descriptors_for_selection,
    extract_descriptors,
    information_gain,
    rank_documents,
    rank_terms,
    select_documents,
    selection_size,
)
from simtopics.errors import DegenerateLabelError, DomainError

import oracles


def two_theme_bundle():
    docs = []
    for i in range(10):
        docs.append(["sea", "wave", "salt", ["tide", "reef"][i % 2]])
    for i in range(10):
        docs.append(["coal", "mine", "shaft", ["lamp", "pick"][i % 2]])
    return bundle_from_tokens(docs)


def centroids_for(bundle, split=10):
    dense = bundle.matrix.to_dense()
    return np.vstack([dense[:split].mean(axis=0), dense[split:].mean(axis=0)])


def test_selection_size():
    assert selection_size(0.2, 20) == 4
    assert selection_size(0.03, 10) == 1  # ceil(0.3) with floor of 1
    assert selection_size(1.0, 7) == 7
    assert selection_size(0.21, 20) == 5


def test_config_domain():
    with pytest.raises(DomainError):
        DescriptorConfig(beta=0.0)
    with pytest.raises(DomainError):
        DescriptorConfig(beta=1.2)
    with pytest.raises(DomainError):
        DescriptorConfig(top_n=0)


def test_rank_documents_matches_sort_oracle(rng):
    docs = rng.normal(size=(15, 4))
    centroids = rng.normal(size=(3, 4))
    order = rank_documents(docs, centroids)
    assert order.shape == (3, 15)
    for t in range(3):
        assert order[t].tolist() == oracles.rank_by_similarity(docs, centroids[t])


def test_rank_documents_breaks_ties_by_index(rng):
    base = rng.normal(size=4)
    docs = np.vstack([base * 2.0, rng.normal(size=4), base])  # 0 and 2 tie
    order = rank_documents(docs, base[None, :])
    assert order[0].tolist()[:2] == [0, 2]


def test_select_documents_full_corpus_at_beta_one():
    bundle = two_theme_bundle()
    selected = select_documents(bundle, centroids_for(bundle), 1.0)
    assert all(len(rows) == bundle.n_docs for rows in selected)


def test_select_documents_minimum_one():
    docs = [["sun", "sand"], ["sun", "sun", "dune"], ["sand", "dune", "dune"]]
    bundle = bundle_from_tokens(docs)
    dense = bundle.matrix.to_dense()
    selected = select_documents(bundle, dense[1][None, :], 1e-9)
    assert selected == [[1]]  # the exact match and nothing else


def test_select_documents_tie_prefers_lower_index():
    # docs 1 and 3 are identical, both sit exactly at the probe centroid
    bundle = two_theme_bundle()
    dense = bundle.matrix.to_dense()
    selected = select_documents(bundle, dense[3][None, :], 1e-9)
    assert selected == [[1]]


def test_select_documents_separable():
    bundle = two_theme_bundle()
    selected = select_documents(bundle, centroids_for(bundle), 0.2)
    assert len(selected[0]) == len(selected[1]) == 4
    assert set(selected[0]) <= set(range(10))
    assert set(selected[1]) <= set(range(10, 20))


def test_select_documents_beta_domain():
    bundle = two_theme_bundle()
    with pytest.raises(DomainError):
        select_documents(bundle, centroids_for(bundle), 0.0)


def test_ig_constant_word_is_zero():
    docs = [["always", "one"], ["always", "two"], ["always", "three"], ["always", "four"]]
    bundle = bundle_from_tokens(docs)
    table = information_gain(bundle, [[0, 1], [2, 3]])
    w = bundle.vocabulary.index("always")
    assert table[w, 0] == 0.0 and table[w, 1] == 0.0


def test_ig_perfect_predictor_is_one_bit():
    docs = [["hit", "a"], ["hit", "b"], ["miss", "c"], ["miss", "d"]]
    bundle = bundle_from_tokens(docs)
    table = information_gain(bundle, [[0, 1], [2, 3]])
    w = bundle.vocabulary.index("hit")
    assert table[w, 0] == 1.0
    assert table[w, 1] == 1.0


def test_ig_matches_contingency_oracle(rng):
    words = [f"w{i}" for i in range(12)]
    for _ in range(5):
        docs = [
            [str(w) for w in rng.choice(words, size=rng.integers(2, 6))]
            for _ in range(25)
        ]
        bundle = bundle_from_tokens(docs)
        k = int(rng.integers(2, 5))
        selected = [
            sorted(rng.choice(25, size=rng.integers(2, 8), replace=False).tolist())
            for _ in range(k)
        ]
        table = information_gain(bundle, selected)
        assert table.shape == (len(bundle.vocabulary), k)
        assert np.all(table >= 0.0)
        instances = [(t, d) for t in range(k) for d in selected[t]]
        doc_sets = [set(doc) for doc in docs]
        for w, term in enumerate(bundle.vocabulary):
            for t in range(k):
                y = [1 if lab == t else 0 for lab, _ in instances]
                x = [1 if term in doc_sets[d] else 0 for _, d in instances]
                assert abs(table[w, t] - oracles.info_gain(y, x)) < 1e-12


def test_ig_bounded_by_label_entropy(rng):
    bundle = two_theme_bundle()
    table = information_gain(bundle, [[0, 1, 2], [10, 11, 12]])
    assert table.max() <= 1.0 + 1e-15


def test_ig_column_permutation_equivariance():
    bundle = two_theme_bundle()
    sel = [[0, 1, 2, 3], [10, 11, 12]]
    forward = information_gain(bundle, sel)
    swapped = information_gain(bundle, sel[::-1])
    assert np.array_equal(forward, swapped[:, ::-1])


def test_ig_single_topic_degenerates():
    bundle = two_theme_bundle()
    with pytest.raises(DegenerateLabelError):
        information_gain(bundle, [[0, 1, 2]])


def test_rank_terms_tie_break():
    scores = np.array([0.5, 0.9, 0.5, 0.1])
    assert rank_terms(scores, 3) == [1, 0, 2]
    assert rank_terms(scores, 99) == [1, 0, 2, 3]


def test_frequency_fallback_for_single_topic():
    docs = [["ore", "ore", "cart"], ["ore", "lamp"], ["cart", "ore"]]
    bundle = bundle_from_tokens(docs)
    ds = descriptors_for_selection(bundle, [[0, 1, 2]], top_n=2)
    assert ds.ranking == RANKING_FREQUENCY_FALLBACK
    assert ds.per_topic_words == (("ore", "cart"),)
    assert not ds.ig_table.any()


def test_extract_descriptors_separable_topics():
    bundle = two_theme_bundle()
    ds = extract_descriptors(bundle, centroids_for(bundle), DescriptorConfig(beta=0.2, top_n=5))
    assert ds.ranking == RANKING_INFORMATION_GAIN
    assert ds.k == 2
    sea_words = {"sea", "wave", "salt", "tide", "reef"}
    coal_words = {"coal", "mine", "shaft", "lamp", "pick"}
    assert set(ds.per_topic_words[0]) <= sea_words
    assert set(ds.per_topic_words[1]) <= coal_words


def test_descriptor_lists_clip_to_vocabulary():
    docs = [["a", "b"], ["a", "c"], ["b", "c"], ["a", "b"]]
    bundle = bundle_from_tokens(docs)
    ds = descriptors_for_selection(bundle, [[0, 1], [2, 3]], top_n=50)
    assert all(len(words) == 3 for words in ds.per_topic_words)
