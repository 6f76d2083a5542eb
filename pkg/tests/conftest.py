import numpy as np
import pytest

from rkhsdensity import run_canonical


@pytest.fixture(scope="session")
def canonical_run(tmp_path_factory):
    """Run a canonical experiment at most once per test session.

    The expensive configurations take about a minute each, and several
    acceptance criteria look at the same run, so results are cached by
    name for the whole session.
    """
    cache = {}

    def get(name: str):
        if name not in cache:
            out = tmp_path_factory.mktemp(f"run_{name.replace('-', '_')}")
            cache[name] = run_canonical(name, out)
        return cache[name]

    return get


@pytest.fixture(scope="session")
def rng():
    return np.random.Generator(np.random.Philox(key=20260819))
