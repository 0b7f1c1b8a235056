"""Six-way evaluation of descriptor sets.

Coherence (npmi, coherence_cv, embedding_coherence) asks whether a topic's
words belong together; diversity (inverted_rbo) asks whether topics differ
from each other; the distribution pair (topic_specificity,
topic_dissimilarity) compares smoothed topic word distributions against the
corpus and against each other. All scores are plain functions of their
inputs; nothing here mutates the model.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import CorpusBundle
from .descriptors import select_documents
from .errors import (
    DomainError,
    EmptyStoreError,
    FormatError,
    LengthMismatchError,
    SingleTopicError,
)
from .validation import as_float_matrix


@dataclass(frozen=True)
class MetricConfig:
    npmi_epsilon: float = 1e-12
    cv_window: int = 110
    rbo_p: float = 0.9
    kl_smoothing: float = 1e-9

    def __post_init__(self):
        if self.npmi_epsilon <= 0:
            raise DomainError("npmi_epsilon must be positive")
        if self.cv_window < 1:
            raise DomainError("cv_window must be >= 1")
        if not 0.0 < self.rbo_p < 1.0:
            raise DomainError(f"rbo_p must lie in (0, 1), got {self.rbo_p!r}")
        if self.kl_smoothing <= 0:
            raise DomainError("kl_smoothing must be positive")


@dataclass
class MetricReport:
    """All six scores plus per-topic breakdowns and degeneracy notes.

    A score is None when it could not be computed at all (weco without a
    store, td with a single topic); the notes say why.
    """

    cv: float = None
    npmi: float = None
    irbo: float = None
    weco: float = None
    ts: float = None
    td: float = None
    per_topic: dict = field(default_factory=dict)
    notes: tuple = ()


def _distinct_known(words, known):
    """Distinct words in order, split into (known, unknown)."""
    seen = []
    missing = []
    for w in words:
        if w in seen or w in missing:
            continue
        (seen if w in known else missing).append(w)
    return seen, missing


def _doc_occurrence_sets(reference_tokens):
    """word -> set of document ids containing it."""
    occs = {}
    for d, doc in enumerate(reference_tokens):
        for w in doc:
            occs.setdefault(w, set()).add(d)
    return occs


def _npmi_value(joint, p_i, p_j, eps):
    """ln((P(i,j)+eps) / (P(i)P(j))) / -ln(P(i,j)+eps)."""
    return math.log((joint + eps) / (p_i * p_j)) / -math.log(joint + eps)


def npmi(topics, reference_tokens, config: MetricConfig = MetricConfig()):
    """Mean pairwise NPMI per topic from document-level co-occurrence.

    Words missing from the reference corpus are skipped; a topic left with
    fewer than two known words scores 0 and is flagged. Returns
    (overall, per_topic, notes).
    """
    if not topics:
        raise DomainError("no topics to score")
    occs = _doc_occurrence_sets(reference_tokens)
    n_docs = len(reference_tokens)
    if n_docs == 0:
        raise FormatError("reference corpus is empty")
    eps = config.npmi_epsilon
    per_topic = []
    notes = []
    for t, words in enumerate(topics):
        known, missing = _distinct_known(words, occs)
        if missing:
            notes.append(f"npmi: topic {t}: skipped unknown words {missing}")
        if len(known) < 2:
            per_topic.append(0.0)
            notes.append(f"npmi: topic {t}: fewer than two known words, scored 0")
            continue
        vals = []
        for i in range(len(known)):
            set_i = occs[known[i]]
            p_i = len(set_i) / n_docs
            for j in range(i + 1, len(known)):
                set_j = occs[known[j]]
                joint = len(set_i & set_j) / n_docs
                vals.append(_npmi_value(joint, p_i, len(set_j) / n_docs, eps))
        per_topic.append(sum(vals) / len(vals))
    overall = sum(per_topic) / len(per_topic)
    return overall, per_topic, tuple(notes)


def _window_occurrence_sets(reference_tokens, width):
    """Boolean sliding windows: word -> set of window ids, plus window count.

    Documents shorter than the window contribute themselves as one window.
    """
    occs = {}
    window_id = 0
    for doc in reference_tokens:
        if len(doc) <= width:
            spans = [doc] if doc else []
        else:
            spans = [doc[s : s + width] for s in range(len(doc) - width + 1)]
        for span in spans:
            for w in span:
                occs.setdefault(w, set()).add(window_id)
            window_id += 1
    return occs, window_id


def coherence_cv(topics, reference_tokens, config: MetricConfig = MetricConfig()):
    """Sliding-window coherence with indirect (context vector) confirmation.

    Each known topic word gets a vector of NPMI values against the topic's
    own word set, estimated over boolean windows of ``cv_window`` tokens.
    The topic score is the mean cosine between each word's vector and the
    summed vector, negatives clipped at 0. Returns (overall, per_topic, notes).
    """
    if not topics:
        raise DomainError("no topics to score")
    occs, n_windows = _window_occurrence_sets(reference_tokens, config.cv_window)
    if n_windows == 0:
        raise FormatError("reference corpus has no usable windows")
    eps = config.npmi_epsilon
    per_topic = []
    notes = []
    for t, words in enumerate(topics):
        known, missing = _distinct_known(words, occs)
        if missing:
            notes.append(f"cv: topic {t}: skipped unknown words {missing}")
        m = len(known)
        if m < 2:
            per_topic.append(0.0)
            notes.append(f"cv: topic {t}: fewer than two known words, scored 0")
            continue
        sets = [occs[w] for w in known]
        probs = [len(s) / n_windows for s in sets]
        vectors = np.empty((m, m), dtype=np.float64)
        for i in range(m):
            for j in range(m):
                joint = (
                    probs[i] if i == j else len(sets[i] & sets[j]) / n_windows
                )
                vectors[i, j] = _npmi_value(joint, probs[i], probs[j], eps)
        summed = vectors.sum(axis=0)
        sum_norm = math.sqrt(float(summed @ summed))
        sims = []
        for i in range(m):
            norm_i = math.sqrt(float(vectors[i] @ vectors[i]))
            denom = norm_i * sum_norm
            cos = float(vectors[i] @ summed) / denom if denom > 0 else 0.0
            sims.append(max(cos, 0.0))
        per_topic.append(sum(sims) / m)
    overall = sum(per_topic) / len(per_topic)
    return overall, per_topic, tuple(notes)


def ranked_overlap(list_a, list_b, p: float) -> float:
    """Truncated rank-biased overlap, normalized so identical lists score 1.

    Both lists must share one length L; the score is
    sum_d p^(d-1) * |head_d(a) & head_d(b)| / d over d = 1..L, divided by
    the same sum with full agreement.
    """
    if len(list_a) != len(list_b):
        raise LengthMismatchError(
            f"ranked lists differ in length: {len(list_a)} vs {len(list_b)}"
        )
    depth = len(list_a)
    if depth == 0:
        raise LengthMismatchError("ranked lists must be non-empty")
    seen_a = set()
    seen_b = set()
    raw = 0.0
    norm = 0.0
    weight = 1.0
    for d in range(1, depth + 1):
        seen_a.add(list_a[d - 1])
        seen_b.add(list_b[d - 1])
        raw += weight * len(seen_a & seen_b) / d
        norm += weight
        weight *= p
    return raw / norm


def inverted_rbo(topics, config: MetricConfig = MetricConfig()):
    """1 minus the mean pairwise ranked overlap across topics.

    Identical topic lists give 0, fully disjoint ones give 1. A single topic
    has no pairs and reports 0 with a note. Returns (score, notes).
    """
    k = len(topics)
    if k < 2:
        return 0.0, ("irbo: single topic, no pairs; scored 0",)
    total = 0.0
    pairs = 0
    for i in range(k):
        for j in range(i + 1, k):
            total += ranked_overlap(topics[i], topics[j], config.rbo_p)
            pairs += 1
    return 1.0 - total / pairs, ()


class EmbeddingStore:
    """Read-only word -> vector map loaded from the text format."""

    def __init__(self, vectors: dict, dim: int):
        if not vectors:
            raise EmptyStoreError("embedding store holds no vectors")
        self.dim = dim
        self._vectors = vectors

    def __contains__(self, word):
        return word in self._vectors

    def __len__(self):
        return len(self._vectors)

    def vector(self, word) -> np.ndarray:
        return self._vectors[word]


def load_embedding_store(path) -> EmbeddingStore:
    """Parse ``<count> <dim>`` then ``word v1 ... vdim`` lines."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise FormatError(f"{path}: line 1: bad embedding header")
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError:
            raise FormatError(f"{path}: line 1: bad embedding header") from None
        if dim < 1:
            raise FormatError(f"{path}: line 1: dimension must be positive")
        vectors = {}
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != dim + 1:
                raise FormatError(
                    f"{path}: line {lineno}: expected {dim + 1} fields, "
                    f"got {len(parts)}"
                )
            try:
                vec = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError:
                raise FormatError(f"{path}: line {lineno}: bad float") from None
            vectors[parts[0]] = vec
        if len(vectors) != count:
            raise FormatError(
                f"{path}: header promised {count} vectors, found {len(vectors)}"
            )
    return EmbeddingStore(vectors, dim)


def embedding_coherence(topics, store: EmbeddingStore):
    """Mean pairwise cosine between a topic's words in an external embedding.

    Out-of-store words are skipped with a note; topics left with fewer than
    two words are flagged and excluded from the overall mean. Returns
    (overall, per_topic, notes) where excluded topics carry None.
    """
    per_topic = []
    notes = []
    kept = []
    for t, words in enumerate(topics):
        known, missing = _distinct_known(words, store)
        if missing:
            notes.append(f"weco: topic {t}: skipped out-of-store words {missing}")
        if len(known) < 2:
            per_topic.append(None)
            notes.append(
                f"weco: topic {t}: fewer than two in-store words, excluded"
            )
            continue
        vecs = [store.vector(w) for w in known]
        sims = []
        for i in range(len(vecs)):
            for j in range(i + 1, len(vecs)):
                denom = math.sqrt(float(vecs[i] @ vecs[i])) * math.sqrt(
                    float(vecs[j] @ vecs[j])
                )
                sims.append(float(vecs[i] @ vecs[j]) / denom if denom > 0 else 0.0)
        score = sum(sims) / len(sims)
        per_topic.append(score)
        kept.append(score)
    if kept:
        overall = sum(kept) / len(kept)
    else:
        overall = 0.0
        notes.append("weco: no topic had two in-store words; scored 0")
    return overall, per_topic, tuple(notes)


def topic_word_distributions(
    bundle: CorpusBundle,
    centroids,
    beta: float,
    config: MetricConfig = MetricConfig(),
    threads: int = 1,
):
    """Smoothed P(word | topic) over each topic's selected documents.

    Counts are term frequencies over the beta-selection, smoothed additively
    by ``kl_smoothing`` and normalized. Also returns the corpus-wide
    distribution computed the same way. Rows sum to 1.
    """
    centroids = as_float_matrix(centroids)
    selected = select_documents(bundle, centroids, beta, threads=threads)
    return distributions_for_selection(bundle, selected, config)


def distributions_for_selection(
    bundle: CorpusBundle, selected, config: MetricConfig = MetricConfig()
):
    """Same as topic_word_distributions, for an already-made selection."""
    n_vocab = len(bundle.vocabulary)
    # Per-document term counts kept sparse: (indices, counts) per document.
    per_doc = [
        np.unique(np.asarray(doc, dtype=np.int64), return_counts=True)
        for doc in bundle.tokens
    ]
    s = config.kl_smoothing
    dists = np.empty((len(selected), n_vocab), dtype=np.float64)
    for t, docs in enumerate(selected):
        counts = np.zeros(n_vocab, dtype=np.int64)
        for d in sorted(docs):
            idx, cnt = per_doc[d]
            counts[idx] += cnt
        counts = counts.astype(np.float64)
        dists[t] = (counts + s) / (counts.sum() + s * n_vocab)
    corpus_counts = np.zeros(n_vocab, dtype=np.int64)
    for idx, cnt in per_doc:
        corpus_counts[idx] += cnt
    corpus_counts = corpus_counts.astype(np.float64)
    corpus_dist = (corpus_counts + s) / (corpus_counts.sum() + s * n_vocab)
    return dists, corpus_dist


def topic_specificity(dists: np.ndarray, corpus_dist: np.ndarray) -> float:
    """Mean KL divergence, in nats, from each topic distribution to the corpus."""
    dists = np.atleast_2d(np.asarray(dists, dtype=np.float64))
    q = np.asarray(corpus_dist, dtype=np.float64)
    kls = []
    for row in dists:
        kls.append(float(np.sum(row * (np.log(row) - np.log(q)))))
    return sum(kls) / len(kls)


def topic_dissimilarity(dists: np.ndarray) -> float:
    """Mean pairwise total variation distance between topic distributions."""
    dists = np.atleast_2d(np.asarray(dists, dtype=np.float64))
    k = dists.shape[0]
    if k < 2:
        raise SingleTopicError("topic dissimilarity needs at least two topics")
    vals = []
    for i in range(k):
        for j in range(i + 1, k):
            vals.append(0.5 * float(np.abs(dists[i] - dists[j]).sum()))
    return sum(vals) / len(vals)


def evaluate(
    bundle: CorpusBundle,
    centroids,
    topics,
    beta: float,
    config: MetricConfig = MetricConfig(),
    store: EmbeddingStore = None,
    threads: int = 1,
    selected=None,
) -> MetricReport:
    """Compute all six metrics for one model against a reference corpus.

    ``topics`` are the descriptor word lists; coherence metrics read the
    bundle's token text, the distribution metrics re-select documents with
    ``beta`` (or reuse ``selected`` when the caller already ranked them).
    weco is skipped without a store; td degrades to a note when only one
    topic exists.
    """
    notes = []
    reference = bundle.token_strings()
    cv_score, cv_per_topic, cv_notes = coherence_cv(topics, reference, config)
    npmi_score, npmi_per_topic, npmi_notes = npmi(topics, reference, config)
    irbo_score, irbo_notes = inverted_rbo(topics, config)
    notes.extend(cv_notes)
    notes.extend(npmi_notes)
    notes.extend(irbo_notes)
    per_topic = {"cv": cv_per_topic, "npmi": npmi_per_topic}
    if store is not None:
        weco_score, weco_per_topic, weco_notes = embedding_coherence(topics, store)
        notes.extend(weco_notes)
        per_topic["weco"] = weco_per_topic
    else:
        weco_score = None
        notes.append("weco: no embedding store supplied")
    if selected is None:
        dists, corpus_dist = topic_word_distributions(
            bundle, centroids, beta, config, threads=threads
        )
    else:
        dists, corpus_dist = distributions_for_selection(bundle, selected, config)
    ts_score = topic_specificity(dists, corpus_dist)
    try:
        td_score = topic_dissimilarity(dists)
    except SingleTopicError:
        td_score = None
        notes.append("td: SingleTopicError: needs at least two topics")
    return MetricReport(
        cv=cv_score,
        npmi=npmi_score,
        irbo=irbo_score,
        weco=weco_score,
        ts=ts_score,
        td=td_score,
        per_topic=per_topic,
        notes=tuple(notes),
    )
