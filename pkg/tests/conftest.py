"""Shared test fixtures and configuration."""

import itertools
import logging
from typing import Callable, Dict, Tuple

import numpy as np
import pytest

from scripts.corpus import CORPUS, CorpusEntry
from scripts.walk_model import WalkModel, classify, permute_axes
from scripts.walk_model.symmetry import Unsupported


@pytest.fixture(params=sorted(CORPUS))
def corpus_entry(request) -> CorpusEntry:
    """Every built-in example model, one test instance each."""
    return CORPUS[request.param]


@pytest.fixture
def cardinal_model() -> WalkModel:
    return CORPUS["cardinal-2d"].model


@pytest.fixture
def negative_drift_model() -> WalkModel:
    return CORPUS["negdrift-2d"].model


@pytest.fixture
def positive_drift_model() -> WalkModel:
    return CORPUS["posdrift-2d"].model


@pytest.fixture
def weighted_zero_drift_model() -> WalkModel:
    return CORPUS["zerodrift-2d-weighted"].model


@pytest.fixture
def model_3d_a() -> WalkModel:
    return CORPUS["zerodrift-3d-a"].model


@pytest.fixture
def model_3d_b() -> WalkModel:
    return CORPUS["zerodrift-3d-b"].model


def _symmetric_orbit(vector: Tuple[int, ...], axes: Tuple[int, ...]) -> Tuple[Tuple[int, ...], ...]:
    """All sign flips of ``vector`` over ``axes``."""
    orbit = set()
    for signs in itertools.product((1, -1), repeat=len(axes)):
        flipped = list(vector)
        for axis, sign in zip(axes, signs):
            flipped[axis] *= sign
        orbit.add(tuple(flipped))
    return tuple(sorted(orbit))


def random_model(rng: np.random.Generator, dimension: int, highly_symmetric: bool = False) -> WalkModel:
    """
    Random highly or mostly symmetric model.

    Steps are drawn as orbits under reflection of the first d - 1 axes (and of
    the last axis too when ``highly_symmetric``), each orbit with one random
    integer weight, until every axis has forward and backward steps. The
    asymmetric axis is then moved to a random position.
    """
    symmetric_axes = tuple(range(dimension)) if highly_symmetric else tuple(range(dimension - 1))
    vectors = [v for v in itertools.product((-1, 0, 1), repeat=dimension) if any(v)]

    while True:
        steps: Dict[Tuple[int, ...], int] = {}
        for _ in range(int(rng.integers(2, 6))):
            vector = vectors[int(rng.integers(len(vectors)))]
            weight = int(rng.integers(1, 4))
            for member in _symmetric_orbit(vector, symmetric_axes):
                steps[member] = weight
        has_both = all(
            any(v[axis] == 1 for v in steps) and any(v[axis] == -1 for v in steps) for axis in range(dimension)
        )
        if not has_both:
            continue
        model = WalkModel.from_steps(dimension, steps)
        if isinstance(classify(model)[0], Unsupported):
            continue
        if not highly_symmetric:
            permutation = [int(p) for p in rng.permutation(dimension)]
            model = permute_axes(model, permutation)
        return model


@pytest.fixture
def model_factory() -> Callable[..., WalkModel]:
    """Seeded random model generator for the property suites."""
    return random_model


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def reset_logging():
    """Drop handlers added during a test and restore the root level."""
    yield
    root_logger = logging.getLogger()
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)
    root_logger.setLevel(logging.WARNING)


@pytest.fixture
def temp_log_file(tmp_path) -> str:
    return str(tmp_path / "logs" / "walk_asymptotics.log")
