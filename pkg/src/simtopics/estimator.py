"""Estimator facade over the discovery pipeline.

Wraps discover/extract/affinity behind the usual fit/transform/predict
surface so the model slots into sklearn-style tooling (clone, grid helpers,
pipelines operating on document vectors).
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .corpus import bundle_from_tokens
from .descriptors import DescriptorConfig, extract_descriptors
from .discovery import discover
from .errors import AlignmentError, DomainError
from .inference import affinity_matrix
from .schedule import ThresholdSchedule
from .validation import as_float_matrix, check_width


class ProgressiveThresholdTopics(BaseEstimator, TransformerMixin):
    """Topic discovery by progressively raising a cosine merge threshold.

    Parameters
    ----------
    alpha : float, default=0.02
        Threshold offset; iteration i merges at (i - alpha) / i.
    beta : float, default=0.2
        Fraction of the corpus selected per topic for descriptor ranking.
    top_n : int, default=10
        Descriptor words kept per topic.
    k : int or None, default=None
        Pick the earliest snapshot with exactly k topics; None keeps the
        final snapshot.
    temperature : float, default=1.0
        Softmax temperature used by transform/predict.
    max_iters : int, default=1000
        Iteration cap for the discovery loop.
    threads : int, default=1
        Worker threads for the pairwise kernels. Results do not depend on it.

    Attributes
    ----------
    trace_ : DiscoveryTrace from the last fit.
    centroids_ : (k, d) array of topic centroids.
    membership_ : per-topic frozensets of training document indices.
    k_ : number of topics in the selected snapshot.
    descriptors_ : DescriptorSet, only when fit received tokens.
    vocabulary_ : tuple of terms, only when fit received tokens.
    """

    def __init__(
        self,
        alpha=0.02,
        beta=0.2,
        top_n=10,
        k=None,
        temperature=1.0,
        max_iters=1000,
        threads=1,
    ):
        self.alpha = alpha
        self.beta = beta
        self.top_n = top_n
        self.k = k
        self.temperature = temperature
        self.max_iters = max_iters
        self.threads = threads

    def fit(self, X, y=None, tokens=None):
        """Discover topics over document vectors.

        ``tokens``, when given, is the aligned list of token-string lists and
        enables descriptor extraction (descriptors_, vocabulary_).
        """
        X = as_float_matrix(X)
        schedule = ThresholdSchedule(self.alpha, self.max_iters)
        self.trace_ = discover(X, schedule, threads=self.threads)
        self.snapshot_ = self._pick_snapshot(self.trace_)
        self.centroids_ = self.snapshot_.centroids
        self.membership_ = self.snapshot_.membership
        self.k_ = self.snapshot_.k
        self.descriptors_ = None
        self.vocabulary_ = None
        if tokens is not None:
            if len(tokens) != X.shape[0]:
                raise AlignmentError(
                    f"{len(tokens)} token documents for {X.shape[0]} rows"
                )
            bundle = bundle_from_tokens(tokens, X)
            self.vocabulary_ = bundle.vocabulary
            self.descriptors_ = extract_descriptors(
                bundle,
                self.centroids_,
                DescriptorConfig(beta=self.beta, top_n=self.top_n),
                threads=self.threads,
            )
        return self

    def _pick_snapshot(self, trace):
        if self.k is None:
            return trace.final
        for snapshot in trace.snapshots:
            if snapshot.k == self.k:
                return snapshot
        raise DomainError(
            f"no snapshot with k={self.k}; trace has k values "
            f"{[s.k for s in trace.snapshots]}"
        )

    def transform(self, X) -> np.ndarray:
        """Softmax affinity rows, one per document, columns per topic."""
        self._check_fitted()
        X = as_float_matrix(X)
        check_width(X, self.centroids_.shape[1], "document batch")
        return affinity_matrix(
            self.centroids_, X, temperature=self.temperature, threads=self.threads
        )

    def predict(self, X) -> np.ndarray:
        """Hardened topic index per document (argmax of transform)."""
        return np.argmax(self.transform(X), axis=1)

    def _check_fitted(self):
        if not hasattr(self, "centroids_"):
            raise DomainError("estimator is not fitted; call fit first")
