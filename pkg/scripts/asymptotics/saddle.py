"""
Saddle point data of the walk kernel on the unit torus and the critical points of the
kernel-method representation.

Near a member w of the critical torus set, with z_j = w_j e^(i theta_j),

    log S-bar(z) = log S-bar(w) - sum_j (b_j / S(1)) theta_j^2 + O(|theta|^3)

for every balanced axis, and the amplitude of the residue integrand expands
around the all-ones point with second moments alpha_j (steps moving backward
on the last axis) and beta_j (steps moving forward on it).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from scripts.asymptotics.base_theorem import SecondOrderTerm, as_rational, tidy
from scripts.asymptotics.gamma import GammaPoint, gamma_points
from scripts.errors import NonZeroDrift, SaddleConsistencyError
from scripts.walk_model import AxisDecomposition, DriftSign, HighlySymmetric, LaurentPoly, WalkModel, decompose
from scripts.walk_model.laurent import gaussian, gaussian_abs2, gaussian_parts, gaussian_to_complex, gaussian_to_text

logger = logging.getLogger(__name__)

FINITE_DIFFERENCE_STEP = 1e-4
FINITE_DIFFERENCE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class SaddleData:
    """
    Quadratic and amplitude data at a critical torus point.

    ``hessian_coefficients`` are c_1 .. c_d with c_j = -1/2 Re d^2/d theta_j^2 of
    log S-bar at w (b_j / S(1) at the all-ones point); ``alphas``/``betas`` have
    d - 1 entries; ``amplitude_at_center`` is the combined prefactor at w, with
    its limit 2^d at the all-ones point.
    """

    w: Tuple[Any, ...]
    hessian_coefficients: Tuple[Fraction, ...]
    alphas: Tuple[Fraction, ...]
    betas: Tuple[Fraction, ...]
    amplitude_at_center: Any

    def to_dict(self) -> Dict[str, Any]:
        amplitude = self.amplitude_at_center
        if isinstance(amplitude, Fraction):
            amplitude = int(amplitude) if amplitude.denominator == 1 else str(amplitude)
        else:
            amplitude = gaussian_to_text(amplitude)
        return {
            "w": [gaussian_to_text(value) for value in self.w],
            "hessianCoefficients": [str(c) for c in self.hessian_coefficients],
            "alphas": [str(a) for a in self.alphas],
            "betas": [str(b) for b in self.betas],
            "amplitudeAtCenter": amplitude,
        }


@dataclass(frozen=True)
class HessianCheck:
    """Finite-difference second derivatives of log S-bar(w e^(i theta)) against their closed forms."""

    measured: Tuple[float, ...]
    predicted: Tuple[float, ...]
    tolerance: float

    @property
    def max_error(self) -> float:
        return max(abs(m - p) for m, p in zip(self.measured, self.predicted))

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "measured": list(self.measured),
            "predicted": list(self.predicted),
            "maxError": self.max_error,
            "passed": self.passed,
        }


def _second_difference(poly: LaurentPoly, center: Sequence[complex], axis: int, step: float, log: bool) -> float:
    """Central second difference of poly(center * e^(i theta_axis)) (or of its log) at theta = 0."""
    shifted = []
    for sign in (1, -1):
        point = list(center)
        point[axis] = center[axis] * np.exp(1j * sign * step)
        shifted.append(complex(poly.evaluate_numeric(point)))
    middle = complex(poly.evaluate_numeric(list(center)))
    if log:
        value = np.log(shifted[0] / middle) + np.log(shifted[1] / middle)
    else:
        value = shifted[0] + shifted[1] - 2 * middle
    return float(np.real(value)) / step**2


def _theta_moment(poly: LaurentPoly, axis: int, order: int, w: Sequence[Any]) -> Any:
    """Exact sum of c k_axis^order w^k over the terms c z^k of poly."""
    weighted = LaurentPoly(poly.nvars, {e: c * e[axis] ** order for e, c in poly.terms.items()})
    return weighted.evaluate_gaussian(w)


def _real_quotient(numerator: Any, denominator: Any) -> Fraction:
    """Exact real part of numerator / denominator for Gaussian rationals."""
    re, im = gaussian_parts(denominator)
    conjugate = gaussian(re, -im)
    return gaussian_parts(numerator * conjugate)[0] / gaussian_abs2(denominator)


def predicted_log_hessian(decomposition: AxisDecomposition, w: Optional[GammaPoint] = None) -> List[Fraction]:
    """
    Closed-form real part of d^2/d theta_j^2 of log S-bar(w e^(i theta)) at 0.

    With D_k = sum c k_j^k w^k over the steps this is Re((D_1^2 - D_2 S-bar(w)) / S-bar(w)^2).
    At the all-ones point it is -(a_j + b_j)/S(1) + ((b_j - a_j)/S(1))^2 with a_j, b_j
    the backward and forward weights, which reduces to -2 b_j / S(1) on a balanced axis.
    """
    model = decomposition.model
    if w is None:
        total = model.total_weight()
        values = []
        for axis in range(model.dimension):
            forward, backward = model.forward_weight(axis), model.backward_weight(axis)
            values.append(-(forward + backward) / total + ((forward - backward) / total) ** 2)
        return values

    s_bar = decomposition.s_bar()
    value = s_bar.evaluate_gaussian(w.w)
    return [
        _real_quotient(
            _theta_moment(s_bar, axis, 1, w.w) ** 2 - _theta_moment(s_bar, axis, 2, w.w) * value,
            value * value,
        )
        for axis in range(model.dimension)
    ]


def hessian_check(
    model: WalkModel, w: Optional[GammaPoint] = None, step: float = FINITE_DIFFERENCE_STEP
) -> HessianCheck:
    """
    Finite-difference second derivatives of log S-bar(w e^(i theta)) at theta = 0, one per axis.

    Args:
        model: A highly or mostly symmetric model
        w: Critical torus point (default: all ones)
        step: Finite-difference step

    Returns:
        HessianCheck pairing each measured value with its closed form
    """
    decomposition = decompose(model)
    d = decomposition.dimension
    center = w.to_complex() if w is not None else [1 + 0j] * d
    s_bar = decomposition.s_bar()
    measured = tuple(_second_difference(s_bar, center, axis, step, log=True) for axis in range(d))
    predicted = tuple(float(value) for value in predicted_log_hessian(decomposition, w))
    return HessianCheck(measured=measured, predicted=predicted, tolerance=FINITE_DIFFERENCE_TOLERANCE)


def _second_moments(decomposition: AxisDecomposition, poly: LaurentPoly, w_hat: Sequence[Any]) -> Tuple[Fraction, ...]:
    """-1/2 d^2/d theta_j^2 of poly(w_hat e^(i theta)) at 0, for j < d."""
    return tuple(
        gaussian_parts(_theta_moment(poly, j, 2, w_hat))[0] / 2 for j in range(decomposition.dimension - 1)
    )


def _amplitude_at(decomposition: AxisDecomposition, w: Tuple[Any, ...]) -> Any:
    """
    Value at w of prod_(j < d)(1 + z_j) (B - z_d^2 A) / ((1 - z_d) B).

    The all-ones point takes the limit 2^d; any coordinate -1 among the first
    d - 1 makes the amplitude vanish.
    """
    d = decomposition.dimension
    one = gaussian(1)
    w_hat, w_d = w[:-1], w[-1]
    if all(value == one for value in w):
        return Fraction(2**d)
    prefactor = gaussian(1)
    for value in w_hat:
        prefactor = prefactor * (one + value)
    if not gaussian_abs2(prefactor):
        return Fraction(0)
    A, B = decomposition.A.evaluate_gaussian(w_hat), decomposition.B.evaluate_gaussian(w_hat)
    value = prefactor * (B - w_d * w_d * A) / ((one - w_d) * B)
    re, im = gaussian_parts(value)
    return re if im == 0 else value


def saddle_data(model: WalkModel, w: Optional[GammaPoint] = None) -> SaddleData:
    """
    Hessian coefficients and amplitude moments at a critical torus point.

    The exact values at w are checked against central finite differences (step
    1e-4, tolerance 1e-6): the Hessian of log S-bar, and alpha_j, beta_j as
    -1/2 d^2/d theta_j^2 of A and B at the first d - 1 coordinates of w.

    Args:
        model: A highly or mostly symmetric model
        w: Critical torus point (default: all ones)

    Returns:
        SaddleData in the canonical axis order

    Raises:
        UnsupportedClass: If the model is neither highly nor mostly symmetric
        SaddleConsistencyError: If a closed form disagrees with its finite difference
    """
    decomposition = decompose(model)
    canonical = decomposition.model
    d = canonical.dimension
    point = w if w is not None else gamma_points(decomposition).all_ones()

    check = hessian_check(canonical, point)
    if not check.passed:
        raise SaddleConsistencyError(
            f"log S-bar Hessian {list(check.measured)} differs from {list(check.predicted)} by {check.max_error:.2e}"
        )

    w_hat = point.w[:-1]
    alphas = _second_moments(decomposition, decomposition.A, w_hat)
    betas = _second_moments(decomposition, decomposition.B, w_hat)
    center = [gaussian_to_complex(value) for value in w_hat]
    for j in range(d - 1):
        for poly, moment, label in ((decomposition.A, alphas[j], "alpha"), (decomposition.B, betas[j], "beta")):
            measured = -0.5 * _second_difference(poly, center, j, FINITE_DIFFERENCE_STEP, log=False)
            if abs(measured - float(moment)) > FINITE_DIFFERENCE_TOLERANCE:
                raise SaddleConsistencyError(f"{label}_{j + 1} = {moment} but finite differences give {measured:.8f}")

    hessian = predicted_log_hessian(decomposition, point)
    return SaddleData(
        w=point.w,
        hessian_coefficients=tuple(-value / 2 for value in hessian),
        alphas=alphas,
        betas=betas,
        amplitude_at_center=_amplitude_at(decomposition, point.w),
    )


def second_order_main(model: WalkModel) -> SecondOrderTerm:
    """
    Coefficient kappa of the all-ones contribution S(1)^n n^(-(d+1)/2) kappa.

    Evaluates the shifted-contour Gaussian integrals in closed form:

        kappa = 2^(d-1)/B(1) * pi/(2 pi)^d
                * sum_j (alpha_j - beta_j) / (2 c_j) sqrt(pi/c_j) prod_(k != j) sqrt(pi/c_k)

    with j and k running over the first d - 1 axes. Highly symmetric models
    have alpha_j = beta_j and therefore kappa = 0.

    Raises:
        UnsupportedClass: If the model is neither highly nor mostly symmetric
        NonZeroDrift: If the asymmetric axis has non-zero drift
    """
    decomposition = decompose(model)
    model_class = decomposition.model_class
    if not isinstance(model_class, HighlySymmetric) and model_class.drift_sign != DriftSign.ZERO:
        raise NonZeroDrift(f"The second-order term needs zero drift, the model has drift {model_class.drift}")

    data = saddle_data(model)
    d = decomposition.dimension
    c = [as_rational(value) for value in data.hessian_coefficients]
    B1 = as_rational(decomposition.B.total())

    total = sp.Integer(0)
    for j in range(d - 1):
        gaussian_moments = sp.Integer(1)
        for k in range(d - 1):
            if k != j:
                gaussian_moments *= sp.sqrt(sp.pi / c[k])
        moment = as_rational(data.alphas[j] - data.betas[j])
        total += moment / (2 * c[j]) * sp.sqrt(sp.pi / c[j]) * gaussian_moments

    kappa = tidy(2 ** (d - 1) / B1 * sp.pi / (2 * sp.pi) ** d * total)
    logger.warning(f"Second-order coefficient {sp.sstr(kappa)} covers the all-ones point only")
    return SecondOrderTerm(kappa=kappa, main_term_only=True)


@dataclass(frozen=True)
class CriticalPoint:
    """
    A critical point (z_1, ..., z_d, t) of the diagonal representation.

    ``minimal`` marks the points that are minimal and determine dominant
    asymptotics for the model's drift sign.
    """

    label: str
    coordinates: Tuple[sp.Expr, ...]
    smooth: bool
    minimal: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "coordinates": [sp.sstr(value) for value in self.coordinates],
            "smooth": self.smooth,
            "minimal": self.minimal,
        }


def critical_points(model: WalkModel) -> List[CriticalPoint]:
    """
    The smooth point rho, its mirror when Q = 0, and the non-smooth point sigma.

    rho = (1, ..., 1, sqrt(B(1)/A(1)), sqrt(A(1)/B(1)) / (2 sqrt(A(1) B(1)) + Q(1)))
    sigma = (1, ..., 1, 1, 1/S(1))

    Negative drift makes rho (and its mirror) minimal; positive drift leaves
    sigma as the only minimal point; with zero drift the two coincide. Highly
    symmetric models have the single smooth point sigma.
    """
    decomposition = decompose(model)
    model_class = decomposition.model_class
    d = decomposition.dimension
    ones = (sp.Integer(1),) * (d - 1)
    total = as_rational(decomposition.model.total_weight())
    sigma_coordinates = ones + (sp.Integer(1), 1 / total)

    if isinstance(model_class, HighlySymmetric):
        return [CriticalPoint("sigma", sigma_coordinates, smooth=True, minimal=True)]

    A1 = as_rational(decomposition.A.total())
    Q1 = as_rational(decomposition.Q.total())
    B1 = as_rational(decomposition.B.total())
    t_rho = tidy(sp.sqrt(A1 / B1) / (2 * sp.sqrt(A1 * B1) + Q1))
    z_rho = tidy(sp.sqrt(B1 / A1))
    sign = model_class.drift_sign

    if sign == DriftSign.ZERO:
        return [CriticalPoint("sigma", sigma_coordinates, smooth=False, minimal=True)]

    points = [CriticalPoint("rho", ones + (z_rho, t_rho), smooth=True, minimal=sign == DriftSign.NEGATIVE)]
    if decomposition.Q.is_zero():
        points.append(CriticalPoint("-rho", ones + (-z_rho, t_rho), smooth=True, minimal=sign == DriftSign.NEGATIVE))
    points.append(CriticalPoint("sigma", sigma_coordinates, smooth=False, minimal=sign == DriftSign.POSITIVE))
    return points
