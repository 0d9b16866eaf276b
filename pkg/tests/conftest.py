import random

import pytest

from sidonkit import available_backends, use_backend


@pytest.fixture(params=available_backends())
def backend(request):
    with use_backend(request.param):
        yield request.param


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_set(rng, max_size, lo=1, hi=30, min_size=1):
    n = rng.randint(min_size, max_size)
    return sorted(rng.sample(range(lo, hi + 1), n))
