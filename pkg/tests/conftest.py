import pytest

from eislab.lattice import ModelConfig, psl2z_model


@pytest.fixture(scope="session")
def model():
    # one shared sieve across the whole run
    return psl2z_model(ModelConfig(sieve_limit=1_000_000))


@pytest.fixture(scope="session")
def lspec(model):
    from eislab.lfunc import LSpec
    return LSpec(t0=1.0, model=model)
