import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sumset_forge import ESet, make_field


@pytest.fixture(scope="session")
def f4():
    return make_field(2, 2)


@pytest.fixture(scope="session")
def f5():
    return make_field(5, 1)


@pytest.fixture(scope="session")
def f7():
    return make_field(7, 1)


@pytest.fixture(scope="session")
def f9():
    return make_field(3, 2)


@pytest.fixture(scope="session")
def f11():
    return make_field(11, 1)


@pytest.fixture(scope="session")
def f16():
    return make_field(2, 4)


@pytest.fixture(scope="session")
def f64():
    return make_field(2, 6)


@pytest.fixture(scope="session")
def f101():
    return make_field(101, 1)


@pytest.fixture(scope="session")
def f256():
    return make_field(2, 8)


def eset(ctx, elems):
    return ESet.from_indices(ctx, elems)


def rand_eset(rng: random.Random, ctx, lo, hi, exclude_zero=False) -> ESet:
    pool = range(1, ctx.q) if exclude_zero else range(ctx.q)
    size = rng.randint(lo, min(hi, len(pool)))
    return ESet.from_indices(ctx, rng.sample(pool, size))
