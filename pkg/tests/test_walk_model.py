"""Unit tests for walk model parsing, validation and transformations."""

import json
from fractions import Fraction

import pytest

from scripts.errors import (
    EntryOutOfRange,
    InvalidModelFormat,
    MissingForwardOrBackwardStep,
    ModelValidationError,
    NonPositiveWeight,
    ZeroStep,
)
from scripts.walk_model import (
    WalkModel,
    char_poly,
    fingerprint,
    load_model_file,
    model_to_dict,
    parse_and_validate,
    permute_axes,
    reflect_axis,
    scale_weights,
)


def _spec(steps, dimension=2):
    return {"dimension": dimension, "steps": [{"vector": list(v), "weight": w} for v, w in steps]}


CARDINAL = [((1, 0), 1), ((-1, 0), 1), ((0, 1), 1), ((0, -1), 1)]


class TestParseAndValidate:
    """Test model validation."""

    def test_valid_model(self):
        """Test the cardinal-direction model."""
        model = parse_and_validate(_spec(CARDINAL))
        assert model.dimension == 2
        assert len(model) == 4
        assert model.total_weight() == 4

    def test_weight_formats(self):
        """Test integer, fraction-string and decimal weights."""
        model = parse_and_validate(_spec([((1, 0), "1/3"), ((-1, 0), 0.5), ((0, 1), 2), ((0, -1), "0.25")]))
        assert model.weight((1, 0)) == Fraction(1, 3)
        assert model.weight((-1, 0)) == Fraction(1, 2)
        assert model.weight((0, -1)) == Fraction(1, 4)

    def test_default_weight_is_one(self):
        """Test that an omitted weight counts as 1."""
        spec = {"dimension": 1, "steps": [{"vector": [1]}, {"vector": [-1]}]}
        assert parse_and_validate(spec).total_weight() == 2

    def test_duplicate_steps_are_merged(self):
        """Test that repeated vectors add their weights."""
        model = parse_and_validate(_spec(CARDINAL + [((1, 0), 2)]))
        assert model.weight((1, 0)) == 3
        assert len(model) == 4

    def test_zero_step(self):
        """Test that the zero vector is rejected."""
        with pytest.raises(ZeroStep):
            parse_and_validate(_spec(CARDINAL + [((0, 0), 1)]))

    def test_non_positive_weight(self):
        """Test that zero and negative weights are rejected."""
        with pytest.raises(NonPositiveWeight):
            parse_and_validate(_spec([((1, 0), 1), ((-1, 0), 0), ((0, 1), 1), ((0, -1), 1)]))
        with pytest.raises(NonPositiveWeight):
            parse_and_validate(_spec([((1, 0), 1), ((-1, 0), "-1/2"), ((0, 1), 1), ((0, -1), 1)]))

    def test_entry_out_of_range(self):
        """Test that long steps are rejected."""
        with pytest.raises(EntryOutOfRange):
            parse_and_validate(_spec(CARDINAL + [((2, 0), 1)]))

    def test_missing_backward_step(self):
        """Test that each coordinate needs a backward step; the axis is reported 1-based."""
        with pytest.raises(MissingForwardOrBackwardStep) as excinfo:
            parse_and_validate(_spec([((1, 0), 1), ((-1, 0), 1), ((0, 1), 1), ((1, 1), 1)]))
        assert excinfo.value.axis == 2
        assert excinfo.value.code == "MissingForwardOrBackwardStep"

    def test_missing_forward_step(self):
        """Test that each coordinate needs a forward step."""
        with pytest.raises(MissingForwardOrBackwardStep) as excinfo:
            parse_and_validate(_spec([((-1, 0), 1), ((0, 1), 1), ((0, -1), 1)]))
        assert excinfo.value.axis == 1

    @pytest.mark.parametrize(
        "spec",
        [
            [],
            {"dimension": 2},
            {"dimension": 0, "steps": [{"vector": []}]},
            {"dimension": True, "steps": [{"vector": [1]}]},
            {"dimension": 2, "steps": []},
            {"dimension": 2, "steps": [{"weight": 1}]},
            {"dimension": 2, "steps": [{"vector": [1, 0, 0]}]},
            {"dimension": 2, "steps": [{"vector": ["1", 0]}]},
            {"dimension": 2, "steps": [{"vector": [1, 0], "weight": "heavy"}]},
        ],
    )
    def test_malformed_records(self, spec):
        """Test structural validation."""
        with pytest.raises(InvalidModelFormat):
            parse_and_validate(spec)

    def test_validation_errors_are_value_errors(self):
        """Test that validation errors can be caught as ValueError."""
        assert issubclass(ModelValidationError, ValueError)
        with pytest.raises(ValueError):
            parse_and_validate(_spec(CARDINAL + [((0, 0), 1)]))

    def test_direct_construction_checks_invariants(self):
        """Test that WalkModel rejects invalid step tuples."""
        with pytest.raises(MissingForwardOrBackwardStep):
            WalkModel.from_steps(1, {(1,): 1})


class TestModelFile:
    """Test the JSON model file format."""

    def test_round_trip(self, tmp_path):
        """Test that model_to_dict output loads back to the same model."""
        model = parse_and_validate(_spec([((1, 0), "1/3"), ((-1, 0), 1), ((0, 1), 2), ((0, -1), 1)]))
        path = tmp_path / "model.json"
        path.write_text(json.dumps(model_to_dict(model)))
        assert load_model_file(str(path)) == model

    def test_missing_file(self, tmp_path):
        """Test that a missing file is an input error."""
        with pytest.raises(InvalidModelFormat):
            load_model_file(str(tmp_path / "absent.json"))

    def test_invalid_json(self, tmp_path):
        """Test that malformed JSON is an input error."""
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(InvalidModelFormat):
            load_model_file(str(path))

    def test_fingerprint_is_order_independent(self):
        """Test that the fingerprint depends only on the weighted step set."""
        a = parse_and_validate(_spec(CARDINAL))
        b = parse_and_validate(_spec(list(reversed(CARDINAL))))
        assert fingerprint(a) == fingerprint(b)
        assert len(fingerprint(a)) == 64
        assert fingerprint(scale_weights(a, 2)) != fingerprint(a)


class TestModelAccessors:
    """Test weights and the characteristic polynomial."""

    def test_forward_and_backward_weights(self, weighted_zero_drift_model):
        """Test per-axis weight sums."""
        model = weighted_zero_drift_model
        assert model.forward_weight(0) == 1
        assert model.backward_weight(0) == 1
        assert model.forward_weight(1) == 2
        assert model.backward_weight(1) == 2

    def test_common_denominator(self):
        """Test the least common denominator of the weights."""
        model = parse_and_validate(_spec([((1, 0), "1/4"), ((-1, 0), "1/6"), ((0, 1), 1), ((0, -1), 1)]))
        assert model.common_denominator() == 12

    def test_char_poly(self, weighted_zero_drift_model):
        """Test S(x, y) = x/y + 1/(xy) + 2y."""
        poly = char_poly(weighted_zero_drift_model)
        assert poly.terms == {(1, -1): 1, (-1, -1): 1, (0, 1): 2}
        assert poly.total() == weighted_zero_drift_model.total_weight()


class TestTransformations:
    """Test axis permutations, reflections and weight scaling."""

    def test_permute_axes(self, negative_drift_model):
        """Test swapping the two axes."""
        swapped = permute_axes(negative_drift_model, [1, 0])
        assert swapped.weight((-1, -1)) == 1
        assert swapped.weight((-1, 1)) == 1
        assert swapped.weight((1, 0)) == 1
        assert permute_axes(swapped, [1, 0]) == negative_drift_model

    def test_permute_rejects_non_permutation(self, cardinal_model):
        """Test the permutation check."""
        with pytest.raises(ValueError):
            permute_axes(cardinal_model, [0, 0])

    def test_reflect_axis(self, negative_drift_model):
        """Test reflecting the second axis turns negative drift into positive drift."""
        reflected = reflect_axis(negative_drift_model, 1)
        assert reflected.forward_weight(1) == 2
        assert reflected.backward_weight(1) == 1
        assert reflect_axis(reflected, 1) == negative_drift_model

    def test_scale_weights(self, cardinal_model):
        """Test scaling by a positive rational."""
        scaled = scale_weights(cardinal_model, "3/2")
        assert scaled.total_weight() == 6
        with pytest.raises(NonPositiveWeight):
            scale_weights(cardinal_model, 0)
