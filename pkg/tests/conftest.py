import numpy as np
import pytest

from eeglog import pipeline, synthgen
from eeglog.datamodel import get_profile
from eeglog.store import Store


@pytest.fixture(scope="session")
def muse_profile():
    return get_profile("muse2")


@pytest.fixture(scope="session")
def muse_corpus(muse_profile):
    """Small balanced corpus for unit tests."""
    return synthgen.generate_corpus(muse_profile, total=120, seed=7)


@pytest.fixture(scope="session")
def public_root(tmp_path_factory):
    """Full 32x40 public-layout fixture tree (generated once per run)."""
    root = tmp_path_factory.mktemp("public") / "deap"
    synthgen.generate_public_fixture(root, seed=3)
    return root


@pytest.fixture(scope="session")
def populated_store(tmp_path_factory, muse_corpus):
    """Store holding the ingested small corpus plus trained device models."""
    root = tmp_path_factory.mktemp("store")
    store = Store(root)
    out = tmp_path_factory.mktemp("fixture")
    synthgen.write_corpus(muse_corpus, out)
    for session, _recording in muse_corpus.sessions:
        pipeline.ingest_session(store, session, out / session.recording_ref)
    pipeline.train_and_store(store, "muse2", "device", seed=0)
    return store


def rng(seed=0):
    return np.random.default_rng(seed)
