"""Deterministic topic discovery by progressive cosine-similarity thresholds."""

__version__ = "0.1.0"

from .corpus import (
    CorpusBundle,
    DocMatrix,
    build_bow,
    build_vocabulary,
    bundle_from_tokens,
    load_corpus,
)
from .descriptors import DescriptorConfig, DescriptorSet, extract_descriptors
from .discovery import DiscoveryTrace, TopicSnapshot, discover
from .errors import (
    AlignmentError,
    DegenerateLabelError,
    DimensionMismatchError,
    DomainError,
    EmptyDocumentError,
    EmptyGroupError,
    EmptyStoreError,
    FormatError,
    LengthMismatchError,
    NoGroupsError,
    SimtopicsError,
    SingleTopicError,
    UnknownWordError,
    ZeroVectorError,
)
from .estimator import ProgressiveThresholdTopics
from .inference import AffinityDistribution, affinity, affinity_matrix, word_affinity
from .metrics import EmbeddingStore, MetricConfig, MetricReport, evaluate
from .model import TopicModel, load_model, save_model
from .schedule import ThresholdSchedule
from .similarity import SimilarityMatrix, cosine_cross, cosine_matrix, dedup
from .tuning import GridCell, GridResult, GridSpec, run_grid

__all__ = [
    "AffinityDistribution",
    "AlignmentError",
    "CorpusBundle",
    "DegenerateLabelError",
    "DescriptorConfig",
    "DescriptorSet",
    "DimensionMismatchError",
    "DiscoveryTrace",
    "DocMatrix",
    "DomainError",
    "EmbeddingStore",
    "EmptyDocumentError",
    "EmptyGroupError",
    "EmptyStoreError",
    "FormatError",
    "GridCell",
    "GridResult",
    "GridSpec",
    "LengthMismatchError",
    "MetricConfig",
    "MetricReport",
    "NoGroupsError",
    "ProgressiveThresholdTopics",
    "SimilarityMatrix",
    "SimtopicsError",
    "SingleTopicError",
    "ThresholdSchedule",
    "TopicModel",
    "TopicSnapshot",
    "UnknownWordError",
    "ZeroVectorError",
    "affinity",
    "affinity_matrix",
    "build_bow",
    "build_vocabulary",
    "bundle_from_tokens",
    "cosine_cross",
    "cosine_matrix",
    "dedup",
    "discover",
    "evaluate",
    "extract_descriptors",
    "load_corpus",
    "load_model",
    "run_grid",
    "save_model",
    "word_affinity",
    "__version__",
]
