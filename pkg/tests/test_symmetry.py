"""Unit tests for symmetry classification and the axis decomposition."""

from fractions import Fraction

import pytest

from scripts.errors import UnsupportedClass
from scripts.walk_model import (
    DriftSign,
    HighlySymmetric,
    LaurentPoly,
    MostlySymmetric,
    Unsupported,
    WalkModel,
    canonicalize,
    char_poly,
    classify,
    decompose,
    permute_axes,
)


class TestClassify:
    """Test the symmetry classes of the corpus models."""

    def test_cardinal_is_highly_symmetric(self, cardinal_model):
        model_class, permutation = classify(cardinal_model)
        assert isinstance(model_class, HighlySymmetric)
        assert permutation == (0, 1)

    def test_negative_drift(self, negative_drift_model):
        model_class, _ = classify(negative_drift_model)
        assert isinstance(model_class, MostlySymmetric)
        assert model_class.asymmetric_axis == 2
        assert model_class.drift == -1
        assert model_class.drift_sign == DriftSign.NEGATIVE

    def test_positive_drift(self, positive_drift_model):
        model_class, _ = classify(positive_drift_model)
        assert model_class.drift == 1
        assert model_class.drift_sign == DriftSign.POSITIVE

    def test_zero_drift(self, weighted_zero_drift_model, model_3d_a, model_3d_b):
        for model in (weighted_zero_drift_model, model_3d_a, model_3d_b):
            model_class, _ = classify(model)
            assert isinstance(model_class, MostlySymmetric)
            assert model_class.drift_sign == DriftSign.ZERO

    def test_asymmetric_axis_moves_last(self, negative_drift_model):
        """Test that the asymmetric axis is reported in input numbering and moved last."""
        swapped = permute_axes(negative_drift_model, [1, 0])
        model_class, permutation = classify(swapped)
        assert model_class.asymmetric_axis == 1
        assert permutation == (1, 0)

        _, canonical = canonicalize(swapped)
        assert canonical == negative_drift_model

    def test_unsupported(self):
        """Test a model asymmetric over both axes."""
        model = WalkModel.from_steps(2, {(1, 1): 1, (-1, 0): 1, (0, -1): 1})
        model_class, _ = classify(model)
        assert isinstance(model_class, Unsupported)
        assert "1, 2" in model_class.reason
        with pytest.raises(UnsupportedClass):
            decompose(model)

    def test_weights_break_symmetry(self):
        """Test that unequal weights on mirrored steps break the symmetry."""
        model = WalkModel.from_steps(2, {(1, 0): 2, (-1, 0): 1, (0, 1): 1, (0, -1): 1})
        model_class, _ = classify(model)
        assert isinstance(model_class, MostlySymmetric)
        assert model_class.asymmetric_axis == 1
        assert model_class.drift == 1

    def test_to_dict(self, negative_drift_model):
        model_class, _ = classify(negative_drift_model)
        assert model_class.to_dict() == {
            "class": "MostlySymmetric",
            "asymmetricAxis": 2,
            "driftSign": "negative",
            "drift": "-1",
        }


class TestDecompose:
    """Test the A, Q, B sections and the per-axis data."""

    def test_negative_drift_sections(self, negative_drift_model):
        """Test A = x + 1/x, B = 1, Q = 0."""
        decomposition = decompose(negative_drift_model)
        assert decomposition.A.terms == {(1,): 1, (-1,): 1}
        assert decomposition.A.total() == 2
        assert decomposition.B == LaurentPoly.constant(1, 1)
        assert decomposition.Q.is_zero()
        assert decomposition.drift == -1

    def test_weighted_zero_drift_data(self, weighted_zero_drift_model):
        """Test b = (1, 2) and S(1) = 4."""
        decomposition = decompose(weighted_zero_drift_model)
        assert decomposition.forward_weights == (1, 2)
        assert decomposition.model.total_weight() == 4
        assert decomposition.B == LaurentPoly.constant(1, 2)

    def test_3d_forward_weights(self, model_3d_a, model_3d_b):
        """Test b = (3, 3, 4) and b = (1, 1, 2)."""
        assert decompose(model_3d_a).forward_weights == (3, 3, 4)
        assert decompose(model_3d_b).forward_weights == (1, 1, 2)

    def test_sectionals_have_d_minus_one_variables(self, model_3d_a):
        """Test that B_k is a polynomial in the other d - 1 variables, z_d last."""
        decomposition = decompose(model_3d_a)
        assert len(decomposition.sectionals) == 2
        for sectional in decomposition.sectionals:
            assert sectional.nvars == 2
        # [x] S = 1/z + (y + 1/y) z
        assert decomposition.sectionals[0].terms == {(0, -1): 1, (1, 1): 1, (-1, 1): 1}

    def test_reassemble(self, corpus_entry):
        """Test that z_d^-1 A + Q + z_d B recovers S for every corpus model."""
        decomposition = decompose(corpus_entry.model)
        assert decomposition.reassemble() == char_poly(decomposition.model)

    def test_s_bar(self, positive_drift_model):
        """Test that S-bar flips the last exponent."""
        decomposition = decompose(positive_drift_model)
        assert decomposition.s_bar().terms == {(-1, -1): 1, (1, -1): 1, (0, 1): 1}

    def test_drift_matches_classification(self, corpus_entry):
        """Test that B(1) - A(1) equals the classified drift."""
        decomposition = decompose(corpus_entry.model)
        if isinstance(decomposition.model_class, MostlySymmetric):
            assert decomposition.drift == decomposition.model_class.drift
        else:
            assert decomposition.drift == Fraction(0)

    def test_to_dict(self, weighted_zero_drift_model):
        document = decompose(weighted_zero_drift_model).to_dict()
        assert document["forwardWeights"] == ["1", "2"]
        assert document["B"] == "2"
        assert document["drift"] == "0"
