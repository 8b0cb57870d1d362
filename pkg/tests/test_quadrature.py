"""Unit tests for the residue integral quadrature."""

import math
from fractions import Fraction

import pytest

from scripts.asymptotics.quadrature import MAX_HALF_WIDTH, QuadratureSpec, residue_integral_estimate
from scripts.enumerate_walks import count_walks
from scripts.errors import InvalidQuadratureSpec, NonZeroDrift, QuadratureUnderResolved
from scripts.metrics import PipelineMetrics


class TestQuadratureSpec:
    """Test contour parameter validation."""

    def test_defaults(self):
        spec = QuadratureSpec()
        assert spec.epsilon(100) == pytest.approx(100**-0.7)
        assert spec.delta(1000) == pytest.approx(math.pi * 1000**-0.4)
        assert spec.nodes(100) == 201
        assert spec.nodes(400) == 400

    def test_delta_is_capped(self):
        assert QuadratureSpec().delta(1) == MAX_HALF_WIDTH

    @pytest.mark.parametrize("n", [10**5, 10**6, 10**7])
    def test_default_nodes_resolve_large_n(self, n):
        """Test that the default node count keeps the spacing within 1/n."""
        spec = QuadratureSpec()
        assert 2 * spec.delta(n) / (spec.nodes(n) - 1) <= 1 / n

    @pytest.mark.parametrize(
        "epsilon_exponent,delta_exponent",
        [
            (Fraction(1, 2), Fraction(2, 5)),
            (Fraction(9, 10), Fraction(2, 5)),
            (Fraction(3, 5), Fraction(1, 3)),
            (Fraction(3, 5), Fraction(1, 2)),
        ],
    )
    def test_invalid_exponents(self, epsilon_exponent, delta_exponent):
        with pytest.raises(InvalidQuadratureSpec):
            QuadratureSpec(epsilon_exponent=epsilon_exponent, delta_exponent=delta_exponent)

    def test_invalid_nodes(self):
        with pytest.raises(InvalidQuadratureSpec):
            QuadratureSpec(nodes_per_axis=2)

    def test_from_config(self):
        """Test the configuration section, including fraction strings."""
        spec = QuadratureSpec.from_config({"epsilon_exponent": "3/5", "delta_exponent": 0.45, "nodes_per_axis": 301})
        assert spec.epsilon_exponent == Fraction(3, 5)
        assert spec.delta_exponent == Fraction(9, 20)
        assert spec.nodes_per_axis == 301
        assert QuadratureSpec.from_config(None) == QuadratureSpec()

    def test_from_config_rejects_garbage(self):
        with pytest.raises(InvalidQuadratureSpec):
            QuadratureSpec.from_config({"epsilon_exponent": "seven tenths"})


class TestResidueIntegral:
    """Test the numerical residue integral against exact counts."""

    def test_weighted_zero_drift_accuracy(self, weighted_zero_drift_model):
        """Test the estimate at n = 200 is within 3% and improves on n = 50."""
        oracle = count_walks(weighted_zero_drift_model, 200, "float64")
        late = residue_integral_estimate(weighted_zero_drift_model, 200, oracle=oracle)
        early = residue_integral_estimate(weighted_zero_drift_model, 50, oracle=oracle)
        assert late.relative_error < 0.03
        assert late.relative_error < early.relative_error

    def test_all_ones_dominates(self, weighted_zero_drift_model):
        """Test that the all-ones point carries the leading contribution."""
        estimate = residue_integral_estimate(weighted_zero_drift_model, 200)
        leading = estimate.contribution("1,1")
        assert len(estimate.contributions) == 4
        assert leading > 0
        for w, value in estimate.contributions:
            if w != "1,1":
                assert abs(value) < 0.25 * leading
        assert estimate.relative_error is None

    def test_all_ones_contribution_converges(self, weighted_zero_drift_model):
        """Test n^(d/2) times the all-ones contribution against 2 sqrt(2)/pi + n^(-1/2)/sqrt(pi)."""
        leading = 2 * math.sqrt(2) / math.pi
        scaled = {n: n * residue_integral_estimate(weighted_zero_drift_model, n).contribution("1,1") for n in (50, 200)}
        assert scaled[200] == pytest.approx(leading + 1 / math.sqrt(math.pi * 200), rel=0.03)
        assert abs(scaled[200] - leading) < abs(scaled[50] - leading)

    def test_highly_symmetric_model(self, cardinal_model):
        oracle = count_walks(cardinal_model, 120, "float64")
        estimate = residue_integral_estimate(cardinal_model, 120, oracle=oracle)
        assert estimate.relative_error < 0.05

    def test_metrics_counter(self, weighted_zero_drift_model):
        metrics = PipelineMetrics()
        residue_integral_estimate(weighted_zero_drift_model, 40, metrics=metrics)
        assert metrics.counters["quadrature_nodes"] == 4 * 201**2

    def test_drifting_model(self, negative_drift_model):
        with pytest.raises(NonZeroDrift):
            residue_integral_estimate(negative_drift_model, 100)

    def test_under_resolved(self, weighted_zero_drift_model):
        """Test that too few nodes for the oscillation scale are refused."""
        with pytest.raises(QuadratureUnderResolved):
            residue_integral_estimate(weighted_zero_drift_model, 200, QuadratureSpec(nodes_per_axis=11))

    def test_non_positive_length(self, weighted_zero_drift_model):
        with pytest.raises(ValueError):
            residue_integral_estimate(weighted_zero_drift_model, 0)

    def test_to_dict(self, weighted_zero_drift_model):
        document = residue_integral_estimate(weighted_zero_drift_model, 40).to_dict()
        assert document["n"] == 40
        assert document["nodesPerAxis"] == 201
        assert {entry["w"] for entry in document["contributions"]} == {"1,1", "1,-1", "-1,I", "-1,-I"}
