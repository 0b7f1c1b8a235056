import numpy as np
import pytest

from simtopics.corpus import bundle_from_tokens

from synth import tweets_like_docs


@pytest.fixture(scope="session")
def tweets_docs():
    return tweets_like_docs()


@pytest.fixture(scope="session")
def tweets_bundle(tweets_docs):
    return bundle_from_tokens(tweets_docs)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260815)
