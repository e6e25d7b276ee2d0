# tests/conftest.py
import numpy as np
import pytest

from halg.catalog import get_group, resolve_subgroup
from halg.group_core import coset_space


def make_space(group: str, generators):
    return coset_space(resolve_subgroup(get_group(group), list(generators)))


@pytest.fixture
def space_of():
    return make_space


@pytest.fixture
def seed():
    return 7


@pytest.fixture
def rng(seed):
    return np.random.default_rng(seed)


@pytest.fixture
def s3():
    return get_group("S3")


@pytest.fixture
def s3_transposition():
    """S3 / <(0 1)>: three cosets, not normal."""
    return make_space("S3", ["(0 1)"])


@pytest.fixture
def s3_rotations():
    """S3 / A3: two cosets, normal."""
    return make_space("S3", ["(0 1 2)"])


@pytest.fixture
def z4_half():
    """Z4 / {0, 2}."""
    return make_space("Z4", ["2"])
