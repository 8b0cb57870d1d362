"""Unit tests for saddle point data and the critical points of the representation."""

from fractions import Fraction

import pytest
import sympy as sp

from scripts.asymptotics.gamma import gamma_set
from scripts.asymptotics.saddle import (
    critical_points,
    hessian_check,
    predicted_log_hessian,
    saddle_data,
)
from scripts.diagonal import build_rep, critical_point_residuals
from scripts.walk_model import decompose
from scripts.walk_model.laurent import gaussian


class TestHessian:
    """Test the quadratic expansion of log S-bar on the torus."""

    def test_balanced_axes(self, weighted_zero_drift_model):
        """Test -2 b_j / S(1) on balanced axes."""
        assert predicted_log_hessian(decompose(weighted_zero_drift_model)) == [Fraction(-1, 2), Fraction(-1)]

    def test_unbalanced_axis(self, negative_drift_model):
        """Test -(a + b)/S(1) + ((b - a)/S(1))^2 on the drifting axis."""
        values = predicted_log_hessian(decompose(negative_drift_model))
        assert values[1] == Fraction(-3, 3) + Fraction(1, 9)

    def test_finite_differences(self, corpus_entry):
        """Test the closed form against central differences at the all-ones point."""
        check = hessian_check(corpus_entry.model)
        assert check.passed, check.to_dict()
        assert len(check.measured) == corpus_entry.dimension

    def test_other_torus_point(self, weighted_zero_drift_model):
        """Test the expansion at (1, -1), where S-bar is real and negative."""
        point = gamma_set(weighted_zero_drift_model).find((gaussian(1), gaussian(-1)))
        check = hessian_check(weighted_zero_drift_model, point)
        assert check.measured[0] == pytest.approx(-0.5, abs=1e-6)


class TestSaddleData:
    """Test Hessian coefficients and amplitude moments."""

    def test_weighted_zero_drift(self, weighted_zero_drift_model):
        """Test c = (1/4, 1/2), alpha = (1,), beta = (0,)."""
        data = saddle_data(weighted_zero_drift_model)
        assert data.hessian_coefficients == (Fraction(1, 4), Fraction(1, 2))
        assert data.alphas == (Fraction(1),)
        assert data.betas == (Fraction(0),)
        assert data.amplitude_at_center == 4

    def test_3d_model(self, model_3d_a):
        """Test c_j = b_j / 8 and the moments of the eight-step model."""
        data = saddle_data(model_3d_a)
        assert data.hessian_coefficients == (Fraction(3, 8), Fraction(3, 8), Fraction(1, 2))
        assert data.alphas == (Fraction(1), Fraction(1))
        assert data.betas == (Fraction(2), Fraction(2))
        assert data.amplitude_at_center == 8

    def test_highly_symmetric_moments_agree(self, cardinal_model):
        data = saddle_data(cardinal_model)
        assert data.alphas == data.betas

    def test_to_dict(self, weighted_zero_drift_model):
        document = saddle_data(weighted_zero_drift_model).to_dict()
        assert document["w"] == ["1", "1"]
        assert document["hessianCoefficients"] == ["1/4", "1/2"]
        assert document["amplitudeAtCenter"] == 4

    def test_other_torus_point(self, weighted_zero_drift_model):
        """Test the data at (1, -1), where the amplitude vanishes under zero drift."""
        point = gamma_set(weighted_zero_drift_model).find((gaussian(1), gaussian(-1)))
        data = saddle_data(weighted_zero_drift_model, point)
        check = hessian_check(weighted_zero_drift_model, point)
        assert data.w == point.w
        assert data.hessian_coefficients[0] == Fraction(1, 4)
        assert float(data.hessian_coefficients[1]) == pytest.approx(-check.measured[1] / 2, abs=1e-6)
        assert data.amplitude_at_center == 0
        assert data.to_dict()["w"] == ["1", "-1"]

    def test_every_torus_point(self, corpus_entry):
        """Test that the exact data at each critical torus point matches finite differences."""
        for point in gamma_set(corpus_entry.model):
            data = saddle_data(corpus_entry.model, point)
            assert all(c >= 0 for c in data.hessian_coefficients)
            if point.is_all_ones:
                assert data.amplitude_at_center == 2**corpus_entry.dimension


class TestCriticalPoints:
    """Test rho, its mirror and sigma."""

    def test_highly_symmetric(self, cardinal_model):
        (point,) = critical_points(cardinal_model)
        assert point.label == "sigma"
        assert point.smooth and point.minimal
        assert point.coordinates == (1, 1, sp.Rational(1, 4))

    def test_negative_drift(self, negative_drift_model):
        """Test rho = (1, 1/sqrt(2), 1/2) and its mirror are the minimal points."""
        points = {point.label: point for point in critical_points(negative_drift_model)}
        assert set(points) == {"rho", "-rho", "sigma"}
        assert sp.simplify(points["rho"].coordinates[1] - 1 / sp.sqrt(2)) == 0
        assert points["rho"].coordinates[2] == sp.Rational(1, 2)
        assert points["rho"].minimal and points["-rho"].minimal
        assert not points["sigma"].minimal
        assert not points["sigma"].smooth

    def test_rho_solves_the_critical_point_equations(self, negative_drift_model):
        """Test that rho and its mirror are smooth critical points of H_2."""
        H2 = build_rep(negative_drift_model).denominator_factors[1]
        for point in critical_points(negative_drift_model):
            if point.label in ("rho", "-rho"):
                assert all(residual == 0 for residual in critical_point_residuals(H2, point.coordinates))

    def test_positive_drift(self, positive_drift_model):
        """Test that only sigma is minimal under positive drift."""
        points = {point.label: point for point in critical_points(positive_drift_model)}
        assert points["sigma"].minimal
        assert not points["rho"].minimal
        assert sp.simplify(points["rho"].coordinates[1] - sp.sqrt(2)) == 0
        assert sp.simplify(points["rho"].coordinates[2] - sp.Rational(1, 4)) == 0

    def test_zero_drift(self, weighted_zero_drift_model):
        (point,) = critical_points(weighted_zero_drift_model)
        assert point.coordinates == (1, 1, sp.Rational(1, 4))
        assert not point.smooth
        assert point.to_dict()["coordinates"] == ["1", "1", "1/4"]
