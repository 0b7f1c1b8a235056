"""Corpus loading, bag-of-words construction, and the text file formats.

Two small text formats cover every matrix artifact in the package:

dense matrix file::

    dense <n_rows> <n_cols>
    <float> <float> ... <float>        (one row per line)

sparse counts file::

    sparse <n_rows> <n_cols>
    <idx>:<count> <idx>:<count> ...    (one row per line, ascending idx)

Tokens files hold one pre-processed document per line, whitespace-separated.
Floats are written with ``repr`` so a write/read round trip is bit-exact.
"""

import hashlib
from dataclasses import dataclass

import numpy as np
from scipy import sparse as sp

from .errors import (
    AlignmentError,
    EmptyDocumentError,
    FormatError,
    UnknownWordError,
    ZeroVectorError,
)

DENSE = "dense"
SPARSE = "sparse"


class DocMatrix:
    """Document-by-feature matrix, dense reals or sparse nonnegative counts.

    Promotion from sparse to dense is explicit via :meth:`to_dense`; no
    operation mixes the two kinds silently.
    """

    def __init__(self, kind, data):
        if kind == DENSE:
            arr = np.ascontiguousarray(data, dtype=np.float64)
            if arr.ndim != 2:
                raise FormatError(f"dense matrix must be 2-D, got ndim={arr.ndim}")
            if not np.all(np.isfinite(arr)):
                raise FormatError("dense matrix contains non-finite values")
            _check_nonzero_rows(np.abs(arr).sum(axis=1))
            self._dense = arr
            self._sparse = None
        elif kind == SPARSE:
            csr = sp.csr_matrix(data, dtype=np.int64)
            csr.sort_indices()
            if csr.data.size and csr.data.min() < 0:
                raise FormatError("sparse counts must be nonnegative")
            csr.eliminate_zeros()
            _check_nonzero_rows(np.diff(csr.indptr))
            self._dense = None
            self._sparse = csr
        else:
            raise FormatError(f"unknown matrix kind {kind!r}")
        self.kind = kind

    @property
    def shape(self):
        m = self._dense if self._dense is not None else self._sparse
        return m.shape

    @property
    def n_rows(self):
        return self.shape[0]

    @property
    def n_cols(self):
        return self.shape[1]

    def to_dense(self) -> np.ndarray:
        """Explicit promotion to a float64 array (returns the backing array
        for dense matrices, so treat the result as read-only)."""
        if self._dense is not None:
            return self._dense
        return np.ascontiguousarray(self._sparse.toarray(), dtype=np.float64)

    def csr(self):
        if self._sparse is None:
            raise FormatError("matrix is dense; no sparse view available")
        return self._sparse

    def row_fingerprint_bytes(self, i: int) -> bytes:
        """Canonical bytes for row i, used for hashing and exact dedup."""
        if self._dense is not None:
            return self._dense[i].astype("<f8").tobytes()
        start, stop = self._sparse.indptr[i], self._sparse.indptr[i + 1]
        idx = self._sparse.indices[start:stop].astype("<i8").tobytes()
        cnt = self._sparse.data[start:stop].astype("<i8").tobytes()
        return idx + b"/" + cnt


def _check_nonzero_rows(row_weights):
    zero = np.flatnonzero(row_weights == 0)
    if zero.size:
        raise ZeroVectorError(f"row {zero[0]} is all-zero")


@dataclass(frozen=True)
class CorpusBundle:
    """Aligned view of one corpus: ids, matrix, token index lists, vocabulary.

    ``tokens[d]`` is the ordered list of vocabulary indices for document d;
    ``vocabulary`` is in first-occurrence order over the tokens file.
    """

    doc_ids: tuple
    matrix: DocMatrix
    tokens: tuple
    vocabulary: tuple

    def __post_init__(self):
        n = self.matrix.n_rows
        if not len(self.doc_ids) == n == len(self.tokens):
            raise AlignmentError(
                f"doc_ids ({len(self.doc_ids)}), matrix rows ({n}) and token "
                f"documents ({len(self.tokens)}) must agree"
            )
        if len(set(self.vocabulary)) != len(self.vocabulary):
            raise FormatError("vocabulary contains repeated terms")

    @property
    def n_docs(self):
        return len(self.doc_ids)

    def token_strings(self):
        """Documents as lists of term strings (inverse of the index form)."""
        return [[self.vocabulary[i] for i in doc] for doc in self.tokens]


# ---------------------------------------------------------------------------
# file primitives


def read_matrix(path) -> DocMatrix:
    """Parse a dense or sparse matrix file, validating layout line by line."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 3 or parts[0] not in (DENSE, SPARSE):
            raise FormatError(f"{path}: line 1: bad header {header.strip()!r}")
        try:
            n_rows, n_cols = int(parts[1]), int(parts[2])
        except ValueError:
            raise FormatError(f"{path}: line 1: non-integer shape in header") from None
        if n_rows < 1 or n_cols < 1:
            raise FormatError(f"{path}: line 1: shape must be positive")
        if parts[0] == DENSE:
            return DocMatrix(DENSE, _read_dense_rows(fh, path, n_rows, n_cols))
        return DocMatrix(SPARSE, _read_sparse_rows(fh, path, n_rows, n_cols))


def _read_dense_rows(fh, path, n_rows, n_cols):
    out = np.empty((n_rows, n_cols), dtype=np.float64)
    row = 0
    for lineno, line in enumerate(fh, start=2):
        if not line.strip():
            if row < n_rows:
                raise FormatError(f"{path}: line {lineno}: blank row line")
            continue
        if row >= n_rows:
            raise FormatError(f"{path}: header promised {n_rows} rows, found more")
        cells = line.split()
        if len(cells) != n_cols:
            raise FormatError(
                f"{path}: line {lineno}: expected {n_cols} columns, got {len(cells)}"
            )
        for col, cell in enumerate(cells):
            try:
                out[row, col] = float(cell)
            except ValueError:
                raise FormatError(
                    f"{path}: line {lineno}: column {col + 1}: bad float {cell!r}"
                ) from None
        row += 1
    if row != n_rows:
        raise FormatError(f"{path}: header promised {n_rows} rows, found {row}")
    return out


def _read_sparse_rows(fh, path, n_rows, n_cols):
    indptr = [0]
    indices = []
    data = []
    row = 0
    for lineno, line in enumerate(fh, start=2):
        if not line.strip():
            if row < n_rows:
                # A blank line is an explicitly empty row: no direction at all.
                raise ZeroVectorError(
                    f"{path}: line {lineno}: row {row} has no entries"
                )
            continue
        if row >= n_rows:
            raise FormatError(f"{path}: header promised {n_rows} rows, found more")
        for col_pos, pair in enumerate(line.split(), start=1):
            idx_s, sep, cnt_s = pair.partition(":")
            if not sep:
                raise FormatError(
                    f"{path}: line {lineno}: column {col_pos}: bad pair {pair!r}"
                )
            try:
                idx, cnt = int(idx_s), int(cnt_s)
            except ValueError:
                raise FormatError(
                    f"{path}: line {lineno}: column {col_pos}: bad pair {pair!r}"
                ) from None
            if not 0 <= idx < n_cols:
                raise FormatError(
                    f"{path}: line {lineno}: column {col_pos}: index {idx} outside "
                    f"[0, {n_cols})"
                )
            if cnt <= 0:
                raise FormatError(
                    f"{path}: line {lineno}: column {col_pos}: count must be positive"
                )
            indices.append(idx)
            data.append(cnt)
        indptr.append(len(indices))
        row += 1
    if row != n_rows:
        raise FormatError(f"{path}: header promised {n_rows} rows, found {row}")
    return sp.csr_matrix(
        (
            np.asarray(data, dtype=np.int64),
            np.asarray(indices, dtype=np.int64),
            np.asarray(indptr, dtype=np.int64),
        ),
        shape=(n_rows, n_cols),
    )


def read_dense_file(path) -> np.ndarray:
    """Dense matrix file as a raw float64 array, no document invariants."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 3 or header[0] != DENSE:
            raise FormatError(f"{path}: line 1: expected a dense matrix header")
        try:
            n_rows, n_cols = int(header[1]), int(header[2])
        except ValueError:
            raise FormatError(f"{path}: line 1: non-integer shape in header") from None
        if n_rows < 1 or n_cols < 1:
            raise FormatError(f"{path}: line 1: shape must be positive")
        return _read_dense_rows(fh, path, n_rows, n_cols)


def write_dense_file(arr: np.ndarray, path) -> None:
    """Write any float64 2-D array in the dense matrix format."""
    arr = np.asarray(arr, dtype=np.float64)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{DENSE} {arr.shape[0]} {arr.shape[1]}\n")
        for i in range(arr.shape[0]):
            fh.write(" ".join(repr(v) for v in arr[i].tolist()))
            fh.write("\n")


def write_matrix(matrix: DocMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        n_rows, n_cols = matrix.shape
        fh.write(f"{matrix.kind} {n_rows} {n_cols}\n")
        if matrix.kind == DENSE:
            dense = matrix.to_dense()
            for i in range(n_rows):
                fh.write(" ".join(repr(v) for v in dense[i].tolist()))
                fh.write("\n")
        else:
            csr = matrix.csr()
            for i in range(n_rows):
                start, stop = csr.indptr[i], csr.indptr[i + 1]
                pairs = (
                    f"{int(j)}:{int(c)}"
                    for j, c in zip(csr.indices[start:stop], csr.data[start:stop])
                )
                fh.write(" ".join(pairs))
                fh.write("\n")


def read_tokens(path):
    """Tokens file -> list of token-string lists (empty lines allowed here;
    downstream consumers decide whether an empty document is an error)."""
    docs = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            docs.append(line.split())
    return docs


def write_tokens(token_docs, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in token_docs:
            fh.write(" ".join(doc))
            fh.write("\n")


# ---------------------------------------------------------------------------
# bundle-level operations


def build_vocabulary(token_docs):
    """Distinct terms in first-occurrence order."""
    seen = {}
    for doc in token_docs:
        for term in doc:
            if term not in seen:
                seen[term] = len(seen)
    return tuple(seen)


def build_bow(token_docs, vocabulary) -> DocMatrix:
    """Raw term counts per document as a sparse-counts matrix.

    Counts are left unweighted; any tf-idf style reweighting is the caller's
    business. Raises EmptyDocumentError for token-less documents and
    UnknownWordError for terms outside the vocabulary.
    """
    index = {term: i for i, term in enumerate(vocabulary)}
    indptr = [0]
    indices = []
    data = []
    for d, doc in enumerate(token_docs):
        if not doc:
            raise EmptyDocumentError(f"document {d} has no tokens")
        counts = {}
        for term in doc:
            try:
                counts[index[term]] = counts.get(index[term], 0) + 1
            except KeyError:
                raise UnknownWordError(
                    f"document {d}: term {term!r} not in vocabulary"
                ) from None
        for idx in sorted(counts):
            indices.append(idx)
            data.append(counts[idx])
        indptr.append(len(indices))
    csr = sp.csr_matrix(
        (
            np.asarray(data, dtype=np.int64),
            np.asarray(indices, dtype=np.int64),
            np.asarray(indptr, dtype=np.int64),
        ),
        shape=(len(token_docs), len(vocabulary)),
    )
    return DocMatrix(SPARSE, csr)


def bundle_from_tokens(token_docs, matrix=None) -> CorpusBundle:
    """Bundle a token corpus, building the bag-of-words matrix if none given.

    Document ids are the 0-based positions as strings; the vocabulary is in
    first-occurrence order. ``matrix`` may be a DocMatrix or a dense array.
    """
    vocabulary = build_vocabulary(token_docs)
    if matrix is None:
        matrix = build_bow(token_docs, vocabulary)
    elif not isinstance(matrix, DocMatrix):
        matrix = DocMatrix(DENSE, matrix)
    index = {term: i for i, term in enumerate(vocabulary)}
    tokens = tuple(tuple(index[t] for t in doc) for doc in token_docs)
    doc_ids = tuple(str(i) for i in range(matrix.n_rows))
    return CorpusBundle(doc_ids, matrix, tokens, vocabulary)


def load_corpus(matrix_path, tokens_path) -> CorpusBundle:
    """Load and align a matrix file with its tokens file."""
    matrix = read_matrix(matrix_path)
    token_docs = read_tokens(tokens_path)
    if len(token_docs) != matrix.n_rows:
        raise AlignmentError(
            f"matrix has {matrix.n_rows} rows but tokens file has "
            f"{len(token_docs)} documents"
        )
    return bundle_from_tokens(token_docs, matrix)


def save_corpus(bundle: CorpusBundle, matrix_path, tokens_path) -> None:
    write_matrix(bundle.matrix, matrix_path)
    write_tokens(bundle.token_strings(), tokens_path)


def fingerprint(bundle: CorpusBundle) -> str:
    """Stable sha256 digest over matrix content plus tokens.

    The matrix kind and shape are hashed too, so two corpora with equal
    shapes but different storage kinds do not collide; permuting documents
    changes the digest.
    """
    h = hashlib.sha256()
    n_rows, n_cols = bundle.matrix.shape
    h.update(f"{bundle.matrix.kind} {n_rows} {n_cols}\n".encode())
    for i in range(n_rows):
        h.update(bundle.matrix.row_fingerprint_bytes(i))
        h.update(b"\n")
    h.update(b"tokens\n")
    for doc in bundle.token_strings():
        h.update(" ".join(doc).encode("utf-8"))
        h.update(b"\n")
    return "sha256:" + h.hexdigest()
