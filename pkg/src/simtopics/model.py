"""Fitted model container plus its on-disk directory layout.

A model directory holds the selected snapshot and everything inference or
evaluation needs later::

    model_manifest.txt   key = value (alpha, beta, k, top_n, ranking, ...)
    centroids.txt        dense matrix format
    membership.txt       one line per topic: original doc indices, ascending
    descriptors.txt      one line per topic: comma-separated terms
    ig_table.txt         dense matrix format, |vocab| x k
    vocabulary.txt       one term per line, first-occurrence order
"""

import os
from dataclasses import dataclass

import numpy as np

from .corpus import read_dense_file, write_dense_file
from .errors import FormatError


@dataclass(frozen=True)
class TopicModel:
    centroids: np.ndarray
    membership: tuple
    descriptors: tuple
    ig_table: np.ndarray
    vocabulary: tuple
    alpha: float
    beta: float
    top_n: int
    k: int
    ranking: str
    fingerprint: str

    @property
    def topics(self):
        return [list(words) for words in self.descriptors]


def write_manifest(path, entries) -> None:
    """Write ``key = value`` lines atomically (tmp file + rename)."""
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        for key, value in entries:
            fh.write(f"{key} = {value}\n")
    os.replace(tmp, path)


def read_manifest(path) -> dict:
    entries = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            key, sep, value = line.partition(" = ")
            if not sep:
                raise FormatError(f"{path}: line {lineno}: expected 'key = value'")
            entries[key.strip()] = value.rstrip("\n")
    return entries


def write_membership(membership, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for topic in membership:
            fh.write(" ".join(str(i) for i in sorted(topic)))
            fh.write("\n")


def read_membership(path):
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                out.append(frozenset(int(tok) for tok in line.split()))
            except ValueError:
                raise FormatError(
                    f"{path}: line {lineno}: bad membership index"
                ) from None
    return tuple(out)


def write_descriptors(descriptors, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for words in descriptors:
            fh.write(",".join(words))
            fh.write("\n")


def read_descriptors(path):
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line:
                out.append(tuple(line.split(",")))
    return tuple(out)


def save_model(model: TopicModel, out_dir, created_utc: str, version: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    write_dense_file(model.centroids, os.path.join(out_dir, "centroids.txt"))
    write_membership(model.membership, os.path.join(out_dir, "membership.txt"))
    write_descriptors(model.descriptors, os.path.join(out_dir, "descriptors.txt"))
    write_dense_file(model.ig_table, os.path.join(out_dir, "ig_table.txt"))
    with open(os.path.join(out_dir, "vocabulary.txt"), "w", encoding="utf-8") as fh:
        for term in model.vocabulary:
            fh.write(f"{term}\n")
    write_manifest(
        os.path.join(out_dir, "model_manifest.txt"),
        [
            ("artifact", "model"),
            ("version", version),
            ("fingerprint", model.fingerprint),
            ("alpha", repr(model.alpha)),
            ("beta", repr(model.beta)),
            ("top_n", model.top_n),
            ("k", model.k),
            ("ranking", model.ranking),
            ("created_utc", created_utc),
        ],
    )


def load_model(model_dir) -> TopicModel:
    manifest = read_manifest(os.path.join(model_dir, "model_manifest.txt"))
    if manifest.get("artifact") != "model":
        raise FormatError(f"{model_dir}: not a model directory")
    centroids = read_dense_file(os.path.join(model_dir, "centroids.txt"))
    membership = read_membership(os.path.join(model_dir, "membership.txt"))
    descriptors = read_descriptors(os.path.join(model_dir, "descriptors.txt"))
    ig_table = read_dense_file(os.path.join(model_dir, "ig_table.txt"))
    with open(os.path.join(model_dir, "vocabulary.txt"), encoding="utf-8") as fh:
        vocabulary = tuple(line.rstrip("\n") for line in fh if line.strip())
    try:
        return TopicModel(
            centroids=centroids,
            membership=membership,
            descriptors=descriptors,
            ig_table=ig_table,
            vocabulary=vocabulary,
            alpha=float(manifest["alpha"]),
            beta=float(manifest["beta"]),
            top_n=int(manifest["top_n"]),
            k=int(manifest["k"]),
            ranking=manifest["ranking"],
            fingerprint=manifest["fingerprint"],
        )
    except (KeyError, ValueError) as exc:
        raise FormatError(f"{model_dir}: bad model manifest: {exc}") from None
