import numpy as np
import pytest

from haraux import cli


@pytest.fixture
def rng():
    return np.random.default_rng(0x48415241)


@pytest.fixture(scope="session")
def figure1_dir(tmp_path_factory):
    """Run the figure command once per session; several tests read it."""
    out = tmp_path_factory.mktemp("figure1")
    code = cli.main(["figure1", "--out", str(out)])
    assert code == 0
    return out
