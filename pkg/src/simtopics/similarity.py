"""Cosine geometry over document rows.

Every pairwise kernel here follows the same discipline: each output cell is
produced by exactly one sequential dot product that accumulates feature
index 0, 1, ..., d-1 in that order. Worker threads only split disjoint row
blocks, so results are bit-identical for any thread count. The square kernel
fills the strict upper triangle (n(n-1)/2 dot products), mirrors it, and
forces the diagonal to exactly 1.0.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .corpus import DocMatrix
from .errors import DimensionMismatchError, DomainError, ZeroVectorError
from .validation import as_float_matrix

# Rows per work item handed to the thread pool. Fixed, so the partitioning
# never depends on the worker count.
_BLOCK_ROWS = 128


@njit(nogil=True, cache=True)
def _dense_norms(points):
    n, d = points.shape
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        acc = 0.0
        for t in range(d):
            acc += points[i, t] * points[i, t]
        out[i] = np.sqrt(acc)
    return out


@njit(nogil=True, cache=True)
def _dense_upper_block(points, norms, start, stop, out, pair_counts):
    n, d = points.shape
    for i in range(start, stop):
        done = 0
        for j in range(i + 1, n):
            acc = 0.0
            for t in range(d):
                acc += points[i, t] * points[j, t]
            v = acc / (norms[i] * norms[j])
            if v > 1.0:
                v = 1.0
            elif v < -1.0:
                v = -1.0
            out[i, j] = v
            done += 1
        pair_counts[i] = done


@njit(nogil=True, cache=True)
def _sparse_norms(indptr, data):
    n = indptr.shape[0] - 1
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        acc = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            acc += data[p] * data[p]
        out[i] = np.sqrt(acc)
    return out


@njit(nogil=True, cache=True)
def _sparse_upper_block(indptr, indices, data, norms, start, stop, out, pair_counts):
    n = indptr.shape[0] - 1
    for i in range(start, stop):
        done = 0
        for j in range(i + 1, n):
            # Two-pointer merge over ascending column indices keeps the
            # accumulation order identical to the dense kernel's.
            a, a_end = indptr[i], indptr[i + 1]
            b, b_end = indptr[j], indptr[j + 1]
            acc = 0.0
            while a < a_end and b < b_end:
                ca = indices[a]
                cb = indices[b]
                if ca == cb:
                    acc += data[a] * data[b]
                    a += 1
                    b += 1
                elif ca < cb:
                    a += 1
                else:
                    b += 1
            v = acc / (norms[i] * norms[j])
            if v > 1.0:
                v = 1.0
            elif v < -1.0:
                v = -1.0
            out[i, j] = v
            done += 1
        pair_counts[i] = done


@njit(nogil=True, cache=True)
def _mirror_upper(out):
    n = out.shape[0]
    for i in range(n):
        out[i, i] = 1.0
        for j in range(i + 1, n):
            out[j, i] = out[i, j]


@njit(nogil=True, cache=True)
def _cross_block(left, right, left_norms, right_norms, start, stop, out, pair_counts):
    nr, d = right.shape
    for i in range(start, stop):
        for j in range(nr):
            acc = 0.0
            for t in range(d):
                acc += left[i, t] * right[j, t]
            v = acc / (left_norms[i] * right_norms[j])
            if v > 1.0:
                v = 1.0
            elif v < -1.0:
                v = -1.0
            out[i, j] = v
        pair_counts[i] = nr


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric cosine matrix plus the kernel work actually performed."""

    values: np.ndarray
    pair_dot_products: int

    @property
    def n(self):
        return self.values.shape[0]


def _run_blocks(fn, n_rows, threads, *args):
    """Dispatch fn over fixed row blocks; returns the total pair count."""
    pair_counts = np.zeros(n_rows, dtype=np.int64)
    blocks = [
        (s, min(s + _BLOCK_ROWS, n_rows)) for s in range(0, n_rows, _BLOCK_ROWS)
    ]
    if threads <= 1 or len(blocks) == 1:
        for start, stop in blocks:
            fn(*args, start, stop, pair_counts=pair_counts)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(fn, *args, start, stop, pair_counts=pair_counts)
                for start, stop in blocks
            ]
            for f in futures:
                f.result()
    return int(pair_counts.sum())


def _validate_threads(threads):
    if int(threads) != threads or threads < 1:
        raise DomainError(f"threads must be a positive integer, got {threads!r}")
    return int(threads)


def cosine_matrix(matrix, threads: int = 1) -> SimilarityMatrix:
    """Pairwise cosine similarities between all rows.

    Accepts a DocMatrix (either kind) or a raw 2-D array. Raises
    ZeroVectorError when a row has no direction.
    """
    threads = _validate_threads(threads)
    if isinstance(matrix, DocMatrix) and matrix.kind == "sparse":
        csr = matrix.csr()
        n = csr.shape[0]
        data = csr.data.astype(np.float64)
        norms = _sparse_norms(csr.indptr, data)
        _raise_on_zero_norm(norms)
        out = np.zeros((n, n), dtype=np.float64)
        pairs = _run_blocks(
            _sparse_blockcall, n, threads, csr.indptr, csr.indices, data, norms, out
        )
    else:
        points = matrix.to_dense() if isinstance(matrix, DocMatrix) else matrix
        points = as_float_matrix(points)
        n = points.shape[0]
        norms = _dense_norms(points)
        _raise_on_zero_norm(norms)
        out = np.zeros((n, n), dtype=np.float64)
        pairs = _run_blocks(_dense_blockcall, n, threads, points, norms, out)
    _mirror_upper(out)
    return SimilarityMatrix(out, pairs)


def _dense_blockcall(points, norms, out, start, stop, pair_counts):
    _dense_upper_block(points, norms, start, stop, out, pair_counts)


def _sparse_blockcall(indptr, indices, data, norms, out, start, stop, pair_counts):
    _sparse_upper_block(indptr, indices, data, norms, start, stop, out, pair_counts)


def _cross_blockcall(left, right, lnorms, rnorms, out, start, stop, pair_counts):
    _cross_block(left, right, lnorms, rnorms, start, stop, out, pair_counts)


def _raise_on_zero_norm(norms):
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise ZeroVectorError(f"row {zero[0]} is all-zero; cosine is undefined")


def cosine_cross(left, right, threads: int = 1) -> np.ndarray:
    """Rectangular cosine matrix between the rows of two dense arrays."""
    threads = _validate_threads(threads)
    left = as_float_matrix(left)
    right = as_float_matrix(right)
    if left.shape[1] != right.shape[1]:
        raise DimensionMismatchError(
            f"width mismatch: {left.shape[1]} vs {right.shape[1]}"
        )
    lnorms = _dense_norms(left)
    rnorms = _dense_norms(right)
    _raise_on_zero_norm(lnorms)
    _raise_on_zero_norm(rnorms)
    out = np.empty((left.shape[0], right.shape[0]), dtype=np.float64)
    _run_blocks(_cross_blockcall, left.shape[0], threads, left, right, lnorms, rnorms, out)
    return out


def dedup(matrix):
    """Drop exact-duplicate rows (bytewise equality), keeping first occurrences.

    Returns (unique_matrix, dup_map) where dup_map sends each removed row
    index to the kept index it duplicated. Order of survivors is preserved.
    """
    if isinstance(matrix, DocMatrix):
        n = matrix.n_rows
        row_bytes = matrix.row_fingerprint_bytes
    else:
        arr = as_float_matrix(matrix)
        n = arr.shape[0]
        row_bytes = lambda i: arr[i].tobytes()
    first_seen = {}
    keep = []
    dup_map = {}
    for i in range(n):
        key = row_bytes(i)
        if key in first_seen:
            dup_map[i] = first_seen[key]
        else:
            first_seen[key] = i
            keep.append(i)
    kept_positions = {orig: pos for pos, orig in enumerate(keep)}
    dup_map = {i: kept_positions[j] for i, j in dup_map.items()}
    if isinstance(matrix, DocMatrix):
        if not dup_map:
            return matrix, {}
        if matrix.kind == "sparse":
            return DocMatrix("sparse", matrix.csr()[keep]), dup_map
        return DocMatrix("dense", matrix.to_dense()[keep]), dup_map
    if not dup_map:
        return arr, {}
    return arr[keep], dup_map
