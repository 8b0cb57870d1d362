"""Unit tests for the walk-count oracle."""

from fractions import Fraction
from math import comb

import mpmath
import pytest

from scripts.enumerate_walks import (
    ArithmeticMode,
    CountSequence,
    brute_force_counts,
    count_walks,
    export_sequence,
    parse_sequence,
)
from scripts.errors import InvalidModelFormat, ResourceLimit
from scripts.metrics import PipelineMetrics
from scripts.walk_model import fingerprint, scale_weights


def cardinal_count(n: int) -> int:
    return comb(n, n // 2) * comb(n + 1, (n + 1) // 2)


class TestCountWalks:
    """Test the exact and float dynamic programs."""

    def test_cardinal_counts(self, cardinal_model):
        """Test the closed form C(n, floor(n/2)) C(n+1, ceil(n/2))."""
        counts = count_walks(cardinal_model, 30)
        assert counts.head(8) == [1, 2, 6, 18, 60, 200, 700, 2450]
        assert all(counts[n] == cardinal_count(n) for n in range(31))
        assert counts.is_exact
        assert counts.model_fingerprint == fingerprint(cardinal_model)

    def test_weighted_counts(self, weighted_zero_drift_model):
        """Test the first terms of the weighted zero drift model."""
        counts = count_walks(weighted_zero_drift_model, 3)
        assert counts.head(3) == [1, 2, 6]

    def test_rational_weights(self, cardinal_model):
        """Test that fractional weights give exact fractional counts."""
        counts = count_walks(scale_weights(cardinal_model, "1/4"), 6)
        assert counts[5] == Fraction(200, 4**5)
        assert isinstance(counts[5], Fraction)

    def test_counts_bounded_by_total_weight(self, corpus_entry):
        """Test 0 < s_n < S(1)^n for n >= 1 on every corpus model."""
        model = corpus_entry.model
        counts = count_walks(model, 12)
        total = model.total_weight()
        assert counts[0] == 1
        for n in range(1, 13):
            assert 0 < counts[n] < total**n

    def test_float_mode_matches_exact(self, negative_drift_model):
        """Test the float DP against exact counts within the rounding bound."""
        exact = count_walks(negative_drift_model, 60)
        approx = count_walks(negative_drift_model, 60, "float64")
        assert not approx.is_exact
        for n in range(61):
            relative = abs(approx.as_mpf(n) - exact.as_mpf(n)) / exact.as_mpf(n)
            assert relative <= max(approx.rounding_bound(n), 1e-15) * 10

    def test_float_mode_within_rounding_bound_to_200(self, weighted_zero_drift_model):
        """Test float counts against exact counts up to n = 200."""
        exact = count_walks(weighted_zero_drift_model, 200)
        approx = count_walks(weighted_zero_drift_model, 200, "float64")
        with mpmath.workdps(30):
            for n in range(1, 201):
                relative = abs(approx.as_mpf(n) - exact.as_mpf(n)) / exact.as_mpf(n)
                assert relative <= approx.rounding_bound(n)

    def test_float_mode_does_not_overflow(self, cardinal_model):
        """Test that 4^600 survives in float mode."""
        counts = count_walks(cardinal_model, 600, "float")
        assert mpmath.isfinite(counts.as_mpf(600))
        assert counts.as_mpf(600) > mpmath.mpf(4) ** 590

    def test_table_cap(self, model_3d_a):
        """Test that oversized tables raise ResourceLimit."""
        with pytest.raises(ResourceLimit) as excinfo:
            count_walks(model_3d_a, 100, max_table_cells=1000)
        assert excinfo.value.exit_code == 3

    def test_metrics_counter(self, cardinal_model):
        """Test that the DP reports the cells it updates."""
        metrics = PipelineMetrics()
        count_walks(cardinal_model, 5, metrics=metrics)
        assert metrics.counters["dp_cells"] > 0

    def test_negative_length(self, cardinal_model):
        with pytest.raises(ValueError):
            count_walks(cardinal_model, -1)

    def test_mode_parsing(self):
        """Test the accepted arithmetic mode names."""
        assert ArithmeticMode.parse("float") == ArithmeticMode.FLOAT64
        assert ArithmeticMode.parse("exact") == ArithmeticMode.EXACT
        with pytest.raises(ValueError):
            ArithmeticMode.parse("decimal")


class TestBruteForce:
    """Test the path enumeration oracle."""

    def test_matches_dynamic_program(self, corpus_entry):
        """Test path-string enumeration against the DP for n <= 8."""
        assert brute_force_counts(corpus_entry.model, 8) == list(count_walks(corpus_entry.model, 8).values)

    def test_path_cap(self, cardinal_model):
        with pytest.raises(ResourceLimit):
            brute_force_counts(cardinal_model, 8, max_paths=100)


class TestSequenceFormat:
    """Test the newline-delimited sequence format."""

    def test_exact_export(self, weighted_zero_drift_model):
        counts = count_walks(weighted_zero_drift_model, 2)
        assert export_sequence(counts) == "0\t1/1\n1\t2/1\n2\t6/1\n"

    def test_parse_exact(self):
        parsed = parse_sequence("0\t1/1\n1\t2/1\n\n2\t6/1\n", model_fingerprint="abc")
        assert isinstance(parsed, CountSequence)
        assert parsed.is_exact
        assert list(parsed.values) == [1, 2, 6]
        assert parsed.model_fingerprint == "abc"

    def test_parse_float(self, cardinal_model):
        counts = count_walks(cardinal_model, 20, "float64")
        parsed = parse_sequence(export_sequence(counts))
        assert not parsed.is_exact
        assert abs(parsed.as_mpf(20) - counts.as_mpf(20)) / counts.as_mpf(20) < 1e-15

    @pytest.mark.parametrize("text", ["0 1/1\n", "0\t1/1\n2\t6/1\n"])
    def test_parse_rejects_malformed(self, text):
        with pytest.raises(InvalidModelFormat):
            parse_sequence(text)
