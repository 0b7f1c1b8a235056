import os

import numpy as np
import pytest

from simtopics.errors import FormatError
from simtopics.model import (
    TopicModel,
    load_model,
    read_descriptors,
    read_manifest,
    read_membership,
    save_model,
    write_descriptors,
    write_manifest,
    write_membership,
)


def sample_model():
    return TopicModel(
        centroids=np.array([[1.5, 0.0, 0.25], [0.0, 2.0, 0.125]]),
        membership=(frozenset({0, 2}), frozenset({1, 3, 4})),
        descriptors=(("sea", "wave"), ("coal", "mine")),
        ig_table=np.array([[0.5, 0.5], [0.25, 0.25], [0.0, 0.0], [1.0, 1.0]]),
        vocabulary=("sea", "wave", "coal", "mine"),
        alpha=0.02,
        beta=0.1,
        top_n=2,
        k=2,
        ranking="information-gain",
        fingerprint="sha256:feed",
    )


def test_manifest_roundtrip(tmp_path):
    path = tmp_path / "m.txt"
    entries = [("artifact", "model"), ("alpha", repr(0.02)), ("note", "a = b = c")]
    write_manifest(path, entries)
    got = read_manifest(path)
    assert got == {"artifact": "model", "alpha": "0.02", "note": "a = b = c"}
    assert not os.path.exists(f"{path}.tmp")  # temp file renamed away


def test_manifest_preserves_order_and_skips_blanks(tmp_path):
    path = tmp_path / "m.txt"
    path.write_text("a = 1\n\nb = 2\n")
    assert list(read_manifest(path)) == ["a", "b"]


def test_manifest_bad_line(tmp_path):
    path = tmp_path / "m.txt"
    path.write_text("a = 1\nbroken-line\n")
    with pytest.raises(FormatError, match="line 2"):
        read_manifest(path)


def test_membership_roundtrip(tmp_path):
    path = tmp_path / "mem.txt"
    membership = (frozenset({5, 1, 3}), frozenset({0}))
    write_membership(membership, path)
    assert path.read_text() == "1 3 5\n0\n"  # ascending within each topic
    assert read_membership(path) == membership


def test_membership_bad_token(tmp_path):
    path = tmp_path / "mem.txt"
    path.write_text("1 2\n3 x\n")
    with pytest.raises(FormatError, match="line 2"):
        read_membership(path)


def test_descriptors_roundtrip(tmp_path):
    path = tmp_path / "d.txt"
    descriptors = (("sea", "wave", "tide"), ("coal",))
    write_descriptors(descriptors, path)
    assert path.read_text() == "sea,wave,tide\ncoal\n"
    assert read_descriptors(path) == descriptors


def test_model_roundtrip(tmp_path):
    model = sample_model()
    save_model(model, tmp_path / "model", "2026-08-15T00:00:00+00:00", "0.1.0")
    back = load_model(tmp_path / "model")
    np.testing.assert_array_equal(back.centroids, model.centroids)
    np.testing.assert_array_equal(back.ig_table, model.ig_table)
    assert back.membership == model.membership
    assert back.descriptors == model.descriptors
    assert back.vocabulary == model.vocabulary
    assert (back.alpha, back.beta, back.top_n, back.k) == (0.02, 0.1, 2, 2)
    assert back.ranking == "information-gain"
    assert back.fingerprint == "sha256:feed"


def test_model_roundtrip_bit_exact_floats(tmp_path):
    model = sample_model()
    awkward = model.centroids * np.pi / 3.0
    model = TopicModel(**{**model.__dict__, "centroids": awkward})
    save_model(model, tmp_path / "model", "2026-08-15T00:00:00+00:00", "0.1.0")
    back = load_model(tmp_path / "model")
    assert np.array_equal(back.centroids, awkward)  # repr round-trips exactly


def test_frequency_fallback_model_roundtrip(tmp_path):
    model = sample_model()
    model = TopicModel(
        **{
            **model.__dict__,
            "ranking": "frequency-fallback",
            "ig_table": np.zeros((4, 2)),
        }
    )
    save_model(model, tmp_path / "model", "2026-08-15T00:00:00+00:00", "0.1.0")
    back = load_model(tmp_path / "model")
    assert back.ranking == "frequency-fallback"
    assert not back.ig_table.any()


def test_load_rejects_wrong_artifact(tmp_path):
    model = sample_model()
    save_model(model, tmp_path / "model", "2026-08-15T00:00:00+00:00", "0.1.0")
    manifest = (tmp_path / "model" / "model_manifest.txt").read_text()
    (tmp_path / "model" / "model_manifest.txt").write_text(
        manifest.replace("artifact = model", "artifact = trace")
    )
    with pytest.raises(FormatError, match="not a model directory"):
        load_model(tmp_path / "model")


def test_load_rejects_broken_manifest(tmp_path):
    model = sample_model()
    save_model(model, tmp_path / "model", "2026-08-15T00:00:00+00:00", "0.1.0")
    manifest = (tmp_path / "model" / "model_manifest.txt").read_text()
    (tmp_path / "model" / "model_manifest.txt").write_text(
        manifest.replace("alpha = 0.02", "alpha = lots")
    )
    with pytest.raises(FormatError, match="bad model manifest"):
        load_model(tmp_path / "model")


def test_topics_property():
    model = sample_model()
    assert model.topics == [["sea", "wave"], ["coal", "mine"]]
