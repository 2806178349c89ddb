from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from entwined import complexes, corpus, morita
from entwined.linalg import QQ

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(params=corpus.SMALL)
def small(request):
    return corpus.load(request.param, QQ)


@pytest.fixture
def point():
    return corpus.point(QQ)


@pytest.fixture
def dual_flip():
    return corpus.dual_flip(QQ)


@pytest.fixture(autouse=True, scope="module")
def _fresh_caches():
    yield
    complexes.clear_caches()
    morita.clear_caches()
