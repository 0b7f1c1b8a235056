"""Soft topic assignment for unseen documents and words.

A document's affinity is the softmax of its cosine similarities to the topic
centroids, divided by a temperature; lower temperatures sharpen toward the
nearest topic. A word's affinity is its gain-table row renormalized into a
distribution, with a uniform fallback when the word carries no gain at all.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnknownWordError
from .similarity import cosine_cross
from .validation import as_float_matrix, check_width


@dataclass(frozen=True)
class AffinityDistribution:
    probabilities: np.ndarray
    uniform_fallback: bool = False


def _softmax_rows(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)  # shift for overflow safety
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def affinity_matrix(centroids, docs, temperature: float = 1.0, threads: int = 1):
    """Softmax affinity rows for a batch of document vectors."""
    if temperature <= 0.0:
        raise DomainError(f"temperature must be positive, got {temperature!r}")
    centroids = as_float_matrix(centroids)
    docs = as_float_matrix(docs)
    check_width(docs, centroids.shape[1], "document batch")
    sims = cosine_cross(docs, centroids, threads=threads)
    return _softmax_rows(sims / temperature)


def affinity(centroids, doc, temperature: float = 1.0) -> AffinityDistribution:
    """Topic distribution for a single unseen document vector."""
    probs = affinity_matrix(centroids, np.asarray(doc, dtype=np.float64), temperature)
    return AffinityDistribution(probs[0])


def word_affinity(ig_table, vocabulary, word) -> AffinityDistribution:
    """Topic distribution for a vocabulary word from its gain-table row.

    An all-zero row (the word separates nothing) yields the uniform
    distribution with ``uniform_fallback`` set.
    """
    index = {term: i for i, term in enumerate(vocabulary)}
    if word not in index:
        raise UnknownWordError(f"word {word!r} not in vocabulary")
    row = np.asarray(ig_table, dtype=np.float64)[index[word]]
    total = row.sum()
    if total == 0.0:
        k = row.shape[0]
        return AffinityDistribution(np.full(k, 1.0 / k), uniform_fallback=True)
    return AffinityDistribution(row / total)
