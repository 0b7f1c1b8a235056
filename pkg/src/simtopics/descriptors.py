"""Topic descriptors: per-topic document selection and information-gain ranking.

For each topic the closest fraction ``beta`` of the whole corpus (by cosine
to the topic centroid) is selected. Each (topic, selected document) pair then
becomes a labeled instance; a term's score for topic t is the information
gain, in bits, of its binary presence for the one-vs-rest label "instance
belongs to t". High-gain terms separate a topic's documents from everyone
else's, which is exactly what a descriptor should do.
"""

import math
from dataclasses import dataclass

import numpy as np

from .corpus import CorpusBundle
from .errors import DegenerateLabelError, DomainError
from .similarity import cosine_cross
from .validation import as_float_matrix

RANKING_INFORMATION_GAIN = "information-gain"
RANKING_FREQUENCY_FALLBACK = "frequency-fallback"


@dataclass(frozen=True)
class DescriptorConfig:
    beta: float = 0.2
    top_n: int = 10

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise DomainError(f"beta must lie in (0, 1], got {self.beta!r}")
        if self.top_n < 1:
            raise DomainError(f"top_n must be >= 1, got {self.top_n!r}")


@dataclass(frozen=True)
class DescriptorSet:
    """Ranked words per topic plus the full |vocab| x k gain table."""

    per_topic_words: tuple
    ig_table: np.ndarray
    ranking: str = RANKING_INFORMATION_GAIN

    @property
    def k(self):
        return len(self.per_topic_words)


def rank_documents(doc_matrix, centroids, threads: int = 1) -> np.ndarray:
    """Full per-topic document ranking: cosine descending, ties by lower index.

    Returns an integer array of shape (k, n_docs) whose row t lists every
    document index in selection order for topic t.
    """
    docs = doc_matrix.to_dense() if hasattr(doc_matrix, "to_dense") else doc_matrix
    docs = as_float_matrix(docs)
    sims = cosine_cross(centroids, docs, threads=threads)
    n = docs.shape[0]
    order = np.empty_like(sims, dtype=np.int64)
    positions = np.arange(n)
    for t in range(sims.shape[0]):
        # lexsort's last key is primary: similarity descending, then index.
        order[t] = np.lexsort((positions, -sims[t]))
    return order


def selection_size(beta: float, n_docs: int) -> int:
    return max(1, math.ceil(beta * n_docs))


def select_documents(bundle_or_matrix, centroids, beta: float, threads: int = 1):
    """The beta-fraction of documents most similar to each centroid.

    Every topic selects from the whole corpus, so selections overlap freely.
    """
    if not 0.0 < beta <= 1.0:
        raise DomainError(f"beta must lie in (0, 1], got {beta!r}")
    matrix = (
        bundle_or_matrix.matrix
        if isinstance(bundle_or_matrix, CorpusBundle)
        else bundle_or_matrix
    )
    order = rank_documents(matrix, centroids, threads=threads)
    take = selection_size(beta, order.shape[1])
    return [row[:take].tolist() for row in order]


def _presence_counts(tokens, n_vocab, selected):
    """Per-topic counts of selected documents containing each term."""
    doc_presence = [np.unique(np.asarray(doc, dtype=np.int64)) for doc in tokens]
    counts = np.zeros((len(selected), n_vocab), dtype=np.int64)
    for t, docs in enumerate(selected):
        for d in docs:
            counts[t, doc_presence[d]] += 1
    return counts


def _binary_entropy(p: np.ndarray) -> np.ndarray:
    """Entropy in bits of a Bernoulli(p) variable, with 0 log 0 = 0."""
    p = np.clip(np.asarray(p, dtype=np.float64), 0.0, 1.0)
    out = np.zeros_like(p)
    mask = (p > 0.0) & (p < 1.0)
    pm = p[mask]
    out[mask] = -(pm * np.log2(pm) + (1.0 - pm) * np.log2(1.0 - pm))
    return out


def _h2(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def information_gain(bundle: CorpusBundle, selected) -> np.ndarray:
    """Information gain, in bits, of every (term, topic) pair.

    ``selected[t]`` lists the document indices selected for topic t. Returns
    a (|vocab|, k) table. Raises DegenerateLabelError with fewer than two
    topics, since a constant label has nothing to gain about.
    """
    k = len(selected)
    if k < 2:
        raise DegenerateLabelError(
            "information gain needs at least two topics; "
            "fall back to term frequency for a single topic"
        )
    n_vocab = len(bundle.vocabulary)
    counts = _presence_counts(bundle.tokens, n_vocab, selected)  # (k, V)
    per_topic = np.array([len(docs) for docs in selected], dtype=np.int64)
    total = int(per_topic.sum())
    word_present = counts.sum(axis=0)  # instances containing the word, (V,)

    ig = np.empty((k, n_vocab), dtype=np.float64)
    n1 = word_present.astype(np.float64)
    n0 = total - n1
    safe_n1 = np.where(n1 > 0, n1, 1.0)  # zero-count branches get weight 0 anyway
    safe_n0 = np.where(n0 > 0, n0, 1.0)
    for t in range(k):
        n_t = float(per_topic[t])
        label_entropy = _h2(n_t / total)
        a = counts[t].astype(np.float64)  # instances with label t and word present
        h_present = _binary_entropy(a / safe_n1)
        h_absent = _binary_entropy((n_t - a) / safe_n0)
        conditional = (n1 / total) * h_present + (n0 / total) * h_absent
        ig[t] = np.maximum(label_entropy - conditional, 0.0)
    return np.ascontiguousarray(ig.T)  # (|vocab|, k)


def rank_terms(scores: np.ndarray, top_n: int):
    """Indices of the top_n scores, descending, ties by lower term index."""
    order = np.lexsort((np.arange(scores.shape[0]), -scores))
    return order[: min(top_n, scores.shape[0])].tolist()


def _positive_association(counts, per_topic):
    """Boolean (k, V) mask: term rate inside topic t exceeds the rate outside.

    Integer cross-multiplication keeps the comparison exact. A term that
    marks a topic only by its absence is as informative as one marking it by
    presence (for two topics the gain table is even symmetric), but it does
    not describe the topic, so list selection ranks such terms last.
    """
    total = int(per_topic.sum())
    word_present = counts.sum(axis=0)
    inside = counts * (total - per_topic)[:, None]
    outside = (word_present[None, :] - counts) * per_topic[:, None]
    return inside > outside


def _rank_topic_terms(ig_col, positive, top_n):
    order = np.lexsort((np.arange(ig_col.shape[0]), -ig_col, ~positive))
    return order[: min(top_n, ig_col.shape[0])].tolist()


def _frequency_fallback(bundle, selected, top_n):
    counts = np.zeros(len(bundle.vocabulary), dtype=np.int64)
    for d in selected[0]:
        for idx in bundle.tokens[d]:
            counts[idx] += 1
    picked = rank_terms(counts.astype(np.float64), top_n)
    words = tuple(bundle.vocabulary[i] for i in picked)
    ig_table = np.zeros((len(bundle.vocabulary), 1), dtype=np.float64)
    return DescriptorSet((words,), ig_table, RANKING_FREQUENCY_FALLBACK)


def descriptors_for_selection(bundle, selected, top_n: int) -> DescriptorSet:
    """Rank terms for an already-made document selection.

    Each topic's list takes its positively associated terms first, by gain
    descending, then any remaining terms the same way; the gain table keeps
    raw one-vs-rest values for all terms. With a single topic the label
    degenerates, so ranking falls back to raw term frequency over the
    selected documents and the result is marked accordingly.
    """
    try:
        ig_table = information_gain(bundle, selected)
    except DegenerateLabelError:
        return _frequency_fallback(bundle, selected, top_n)
    counts = _presence_counts(bundle.tokens, len(bundle.vocabulary), selected)
    per_topic = np.array([len(docs) for docs in selected], dtype=np.int64)
    positive = _positive_association(counts, per_topic)
    words = tuple(
        tuple(
            bundle.vocabulary[i]
            for i in _rank_topic_terms(ig_table[:, t], positive[t], top_n)
        )
        for t in range(len(selected))
    )
    return DescriptorSet(words, ig_table, RANKING_INFORMATION_GAIN)


def extract_descriptors(
    bundle: CorpusBundle,
    centroids,
    config: DescriptorConfig = DescriptorConfig(),
    threads: int = 1,
) -> DescriptorSet:
    """Select documents, score terms, return ranked descriptors per topic."""
    centroids = as_float_matrix(centroids)
    selected = select_documents(bundle, centroids, config.beta, threads=threads)
    return descriptors_for_selection(bundle, selected, config.top_n)
