import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from fimkit import module as md
from fimkit.linalg import Field

settings.register_profile(
    "fimkit",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("fimkit")

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "fimkit" / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def fuzz_corpus(m, box, count, seed, field=None, **kw):
    """Seeded random presented modules shared by several tests."""
    rng = random.Random(seed)
    F = field or Field(0)
    out = []
    for _ in range(count):
        p = md.random_presentation(rng, F, m, box, **kw)
        out.append(md.from_presentation(p))
    return out
