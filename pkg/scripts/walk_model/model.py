"""
Weighted short-step walk models.

A model is a dimension together with a map from step vectors in
{-1, 0, 1}^d to strictly positive exact weights. Every coordinate must have a
step moving forward and a step moving backward.
"""

import hashlib
import json
import logging
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Mapping, Sequence, Tuple

from scripts.errors import (
    EntryOutOfRange,
    InvalidModelFormat,
    MissingForwardOrBackwardStep,
    NonPositiveWeight,
    ZeroStep,
)
from scripts.walk_model.laurent import LaurentPoly, to_fraction

Step = Tuple[int, ...]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WalkModel:
    """
    Dimension plus weighted step set.

    ``steps`` is a tuple of ``(vector, weight)`` pairs sorted by vector, so two
    models with the same weighted steps compare equal and hash alike. Build
    instances with :func:`parse_and_validate` or :meth:`from_steps`; the
    invariants are checked on construction.
    """

    dimension: int
    steps: Tuple[Tuple[Step, Fraction], ...]

    def __post_init__(self) -> None:
        _check_invariants(self.dimension, self.steps)

    @classmethod
    def from_steps(cls, dimension: int, steps: Mapping[Sequence[int], Any]) -> "WalkModel":
        """Build a model from a ``{vector: weight}`` mapping."""
        pairs = sorted((tuple(int(e) for e in vector), to_fraction(weight)) for vector, weight in steps.items())
        return cls(dimension, tuple(pairs))

    @property
    def step_map(self) -> Dict[Step, Fraction]:
        return dict(self.steps)

    @property
    def vectors(self) -> List[Step]:
        return [vector for vector, _ in self.steps]

    def weight(self, vector: Sequence[int]) -> Fraction:
        return self.step_map.get(tuple(vector), Fraction(0))

    def total_weight(self) -> Fraction:
        """S(1), the total step weight."""
        return sum((w for _, w in self.steps), Fraction(0))

    def forward_weight(self, axis: int) -> Fraction:
        """Total weight of steps with entry +1 on ``axis`` (0-based)."""
        return sum((w for v, w in self.steps if v[axis] == 1), Fraction(0))

    def backward_weight(self, axis: int) -> Fraction:
        """Total weight of steps with entry -1 on ``axis`` (0-based)."""
        return sum((w for v, w in self.steps if v[axis] == -1), Fraction(0))

    def common_denominator(self) -> int:
        """Least common denominator D of the weights."""
        return math.lcm(*(weight.denominator for _, weight in self.steps))

    def __iter__(self) -> Iterator[Tuple[Step, Fraction]]:
        return iter(self.steps)

    def __len__(self) -> int:
        return len(self.steps)


def _check_invariants(dimension: int, steps: Sequence[Tuple[Step, Fraction]]) -> None:
    if not isinstance(dimension, int) or dimension < 1:
        raise InvalidModelFormat(f"Dimension must be a positive integer, got {dimension!r}")
    if not steps:
        raise InvalidModelFormat("A model needs at least one step")
    seen = set()
    for vector, weight in steps:
        if len(vector) != dimension:
            raise InvalidModelFormat(f"Step {list(vector)} does not have {dimension} entries")
        if any(entry not in (-1, 0, 1) for entry in vector):
            raise EntryOutOfRange(f"Step {list(vector)} has an entry outside {{-1, 0, 1}}")
        if not any(vector):
            raise ZeroStep("The zero vector is not a valid step")
        if weight <= 0:
            raise NonPositiveWeight(f"Step {list(vector)} has non-positive weight {weight}")
        if vector in seen:
            raise InvalidModelFormat(f"Step {list(vector)} is listed twice; merge duplicates first")
        seen.add(vector)
    for axis in range(dimension):
        if not any(vector[axis] == 1 for vector, _ in steps):
            raise MissingForwardOrBackwardStep(axis + 1, "forward")
        if not any(vector[axis] == -1 for vector, _ in steps):
            raise MissingForwardOrBackwardStep(axis + 1, "backward")


def _parse_weight(raw: Any, vector: Sequence[int]) -> Fraction:
    if isinstance(raw, float):
        raw = repr(raw)
    try:
        return to_fraction(raw)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise InvalidModelFormat(f"Weight {raw!r} of step {list(vector)} is not an exact number: {e}") from e


def parse_and_validate(spec: Mapping[str, Any]) -> WalkModel:
    """
    Validate a model description record and build the model.

    The record has the shape ``{"dimension": d, "steps": [{"vector": [...],
    "weight": "p/q"}, ...]}``. Weights may be ints, decimal strings or fraction
    strings and default to 1. Duplicate step vectors have their weights summed.

    Args:
        spec: Model description record

    Returns:
        A WalkModel satisfying every model invariant

    Raises:
        InvalidModelFormat: If the record is malformed
        ZeroStep: If the zero vector is listed
        NonPositiveWeight: If a weight is zero or negative
        EntryOutOfRange: If a step entry lies outside {-1, 0, 1}
        MissingForwardOrBackwardStep: If a coordinate lacks a forward or backward step
    """
    if not isinstance(spec, Mapping):
        raise InvalidModelFormat("A model description must be a mapping")
    if "dimension" not in spec or "steps" not in spec:
        raise InvalidModelFormat("A model description needs 'dimension' and 'steps'")

    dimension = spec["dimension"]
    if isinstance(dimension, bool) or not isinstance(dimension, int) or dimension < 1:
        raise InvalidModelFormat(f"Dimension must be a positive integer, got {dimension!r}")

    raw_steps = spec["steps"]
    if not isinstance(raw_steps, list) or not raw_steps:
        raise InvalidModelFormat("'steps' must be a non-empty list")

    merged: Dict[Step, Fraction] = {}
    for entry in raw_steps:
        if not isinstance(entry, Mapping) or "vector" not in entry:
            raise InvalidModelFormat(f"Step entry {entry!r} needs a 'vector'")
        raw_vector = entry["vector"]
        if not isinstance(raw_vector, (list, tuple)) or not all(
            isinstance(e, int) and not isinstance(e, bool) for e in raw_vector
        ):
            raise InvalidModelFormat(f"Step vector {raw_vector!r} must be a list of integers")
        vector = tuple(raw_vector)
        if len(vector) != dimension:
            raise InvalidModelFormat(f"Step {list(vector)} does not have {dimension} entries")
        if any(e not in (-1, 0, 1) for e in vector):
            raise EntryOutOfRange(f"Step {list(vector)} has an entry outside {{-1, 0, 1}}")
        if not any(vector):
            raise ZeroStep("The zero vector is not a valid step")
        weight = _parse_weight(entry.get("weight", 1), vector)
        if weight <= 0:
            raise NonPositiveWeight(f"Step {list(vector)} has non-positive weight {weight}")
        if vector in merged:
            logger.debug(f"Merging duplicate step {list(vector)}")
        merged[vector] = merged.get(vector, Fraction(0)) + weight

    model = WalkModel(dimension, tuple(sorted(merged.items())))
    logger.debug(f"Parsed {dimension}-dimensional model with {len(model)} steps")
    return model


def load_model_file(path: str) -> WalkModel:
    """
    Read a JSON model file and validate it.

    Args:
        path: Path to the JSON model description

    Returns:
        The validated WalkModel

    Raises:
        InvalidModelFormat: If the file is missing or is not valid JSON
    """
    if not os.path.exists(path):
        raise InvalidModelFormat(f"Model file not found: {path}")
    try:
        with open(path, "r") as f:
            spec = json.load(f)
    except json.JSONDecodeError as e:
        raise InvalidModelFormat(f"Model file {path} is not valid JSON: {e}") from e
    return parse_and_validate(spec)


def model_to_dict(model: WalkModel) -> Dict[str, Any]:
    """Inverse of the JSON model format, with weights as exact fraction strings."""
    return {
        "dimension": model.dimension,
        "steps": [{"vector": list(vector), "weight": str(weight)} for vector, weight in model.steps],
    }


def fingerprint(model: WalkModel) -> str:
    """SHA-256 of the canonical JSON form of the model."""
    canonical = json.dumps(model_to_dict(model), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def char_poly(model: WalkModel) -> LaurentPoly:
    """The characteristic Laurent polynomial S(z) = sum of w_i z^i."""
    return LaurentPoly(model.dimension, {vector: weight for vector, weight in model.steps})


# Model transformations


def permute_axes(model: WalkModel, permutation: Sequence[int]) -> WalkModel:
    """New axis i is old axis ``permutation[i]`` (0-based)."""
    if sorted(permutation) != list(range(model.dimension)):
        raise ValueError(f"{list(permutation)} is not a permutation of {model.dimension} axes")
    return WalkModel.from_steps(
        model.dimension, {tuple(vector[p] for p in permutation): weight for vector, weight in model.steps}
    )


def reflect_axis(model: WalkModel, axis: int) -> WalkModel:
    """Negate coordinate ``axis`` (0-based) of every step."""
    steps = {}
    for vector, weight in model.steps:
        flipped = list(vector)
        flipped[axis] = -flipped[axis]
        steps[tuple(flipped)] = weight
    return WalkModel.from_steps(model.dimension, steps)


def scale_weights(model: WalkModel, factor: Any) -> WalkModel:
    """Multiply every weight by a positive rational."""
    scale = to_fraction(factor)
    if scale <= 0:
        raise NonPositiveWeight(f"Scale factor must be positive, got {scale}")
    return WalkModel.from_steps(model.dimension, {vector: weight * scale for vector, weight in model.steps})
