import numpy as np
import pytest

from rasterleak.chunking import ChunkParams
from rasterleak.sim import SimParams, get_profile, null_fingerprint


@pytest.fixture(scope="session")
def desk22():
    return get_profile("desk22")


@pytest.fixture(scope="session")
def ideal22():
    return get_profile("desk22-ideal")


@pytest.fixture(scope="session")
def portrait22():
    return get_profile("portrait22")


@pytest.fixture(scope="session")
def nullfp():
    return null_fingerprint()


@pytest.fixture(scope="session")
def clean_params():
    return SimParams(seed=1)


@pytest.fixture(scope="session")
def noisy_params():
    return SimParams(jitter_w_prob=0.3, noise_snr_db=20.0, seed=1)


@pytest.fixture(scope="session")
def default_chunk_params():
    return ChunkParams(S=3200, d=1, T=0.9)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
