import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from majlat import config
from majlat.schmidt import canonicalize

settings.register_profile(
    "majlat", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("majlat")


@pytest.fixture(autouse=True)
def _restore_epsilon():
    eps = config.get_epsilon()
    yield
    config.set_epsilon(eps)


@pytest.fixture
def worked_pair():
    return canonicalize([0.5, 0.4, 0.1]), canonicalize([0.6, 0.2, 0.2])


@st.composite
def prob_vecs(draw, min_dim=1, max_dim=8):
    dim = draw(st.integers(min_dim, max_dim))
    raw = draw(
        st.lists(st.floats(min_value=1e-3, max_value=1.0), min_size=dim, max_size=dim)
    )
    arr = np.asarray(raw)
    return canonicalize(arr / arr.sum())


@st.composite
def prob_vec_pairs(draw, min_dim=2, max_dim=8):
    """Two canonical vectors of the same dimension."""
    dim = draw(st.integers(min_dim, max_dim))
    make = st.lists(
        st.floats(min_value=1e-3, max_value=1.0), min_size=dim, max_size=dim
    )
    a = np.asarray(draw(make))
    b = np.asarray(draw(make))
    return canonicalize(a / a.sum()), canonicalize(b / b.sum())


@st.composite
def rngs(draw):
    return np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
