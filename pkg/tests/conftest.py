from pathlib import Path

import numpy as np
import pytest

from naimark.dilation import build_dilation, prepare
from naimark.povms import random_family, tetrahedral_povm

GOLDEN = Path(__file__).resolve().parent.parent / "golden"


@pytest.fixture
def rng():
    return np.random.default_rng(20150901)


@pytest.fixture
def golden():
    return GOLDEN


@pytest.fixture
def tetra():
    p = prepare(tetrahedral_povm())
    return p, build_dilation(p)


def random_dilation(rng, m, k, scale=1.0):
    p = prepare(random_family(rng, m, k, scale))
    return p, build_dilation(p)
