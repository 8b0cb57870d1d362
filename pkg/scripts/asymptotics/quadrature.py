"""
Numerical evaluation of the residue integral for zero drift models.

After taking the residue in t, s_n is the integral over the torus
|z_1| = ... = |z_(d-1)| = 1, |z_d| = 1 - epsilon of

    (1 + z_1)...(1 + z_(d-1)) (B - z_d^2 A) / ((1 - z_d) B z_1 ... z_d) S-bar(z)^n

and only neighbourhoods of the critical torus points matter. Each neighbourhood
is a product of angular arcs of half-width delta, integrated with the
tensor-product trapezoid rule.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import mpmath
import numpy as np

from scripts.asymptotics.gamma import GammaPoint, gamma_points
from scripts.enumerate_walks import CountSequence
from scripts.errors import InvalidQuadratureSpec, NonZeroDrift, QuadratureUnderResolved
from scripts.metrics import PipelineMetrics, record
from scripts.walk_model import AxisDecomposition, DriftSign, HighlySymmetric, WalkModel, decompose
from scripts.walk_model.laurent import gaussian_to_text, to_fraction

logger = logging.getLogger(__name__)

MIN_NODES_PER_AXIS = 201
NODES_PER_ROOT_N = 20
MAX_HALF_WIDTH = math.pi / 4


@dataclass(frozen=True)
class QuadratureSpec:
    """
    Contour parameters epsilon = n^(-epsilon_exponent), delta = delta_scale n^(-delta_exponent).

    ``nodes_per_axis`` of None selects max(201, ceil(20 sqrt(n)), ceil(2 delta n) + 2)
    nodes per angular variable, so the default never under-resolves. The
    exponents must satisfy 1/2 < a < 2b, a + b > 1 and 1/3 < b < 1/2 for
    a = epsilon_exponent and b = delta_exponent.
    """

    nodes_per_axis: Optional[int] = None
    epsilon_exponent: Fraction = Fraction(7, 10)
    delta_exponent: Fraction = Fraction(2, 5)
    delta_scale: float = math.pi

    def __post_init__(self) -> None:
        a, b = self.epsilon_exponent, self.delta_exponent
        if not (Fraction(1, 2) < a < 2 * b and a + b > 1 and Fraction(1, 3) < b < Fraction(1, 2)):
            raise InvalidQuadratureSpec(
                f"Exponents epsilon={a}, delta={b} violate 1/2 < a < 2b, a + b > 1, 1/3 < b < 1/2"
            )
        if self.nodes_per_axis is not None and self.nodes_per_axis < 3:
            raise InvalidQuadratureSpec(f"Need at least 3 nodes per axis, got {self.nodes_per_axis}")
        if self.delta_scale <= 0:
            raise InvalidQuadratureSpec(f"delta_scale must be positive, got {self.delta_scale}")

    @classmethod
    def from_config(cls, section: Optional[Dict[str, Any]]) -> "QuadratureSpec":
        """Build from the ``quadrature`` configuration section."""
        section = section or {}
        try:
            return cls(
                nodes_per_axis=section.get("nodes_per_axis"),
                epsilon_exponent=to_fraction(str(section.get("epsilon_exponent", "7/10"))),
                delta_exponent=to_fraction(str(section.get("delta_exponent", "2/5"))),
                delta_scale=float(section.get("delta_scale", math.pi)),
            )
        except InvalidQuadratureSpec:
            raise
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise InvalidQuadratureSpec(f"Invalid quadrature section {section!r}: {e}") from e

    def epsilon(self, n: int) -> float:
        return n ** -float(self.epsilon_exponent)

    def delta(self, n: int) -> float:
        return min(self.delta_scale * n ** -float(self.delta_exponent), MAX_HALF_WIDTH)

    def nodes(self, n: int) -> int:
        if self.nodes_per_axis is not None:
            return self.nodes_per_axis
        # spacing 2 delta / (nodes - 1) stays at or below 1/n
        resolved = math.ceil(2 * self.delta(n) * n) + 2
        return max(MIN_NODES_PER_AXIS, math.ceil(NODES_PER_ROOT_N * math.sqrt(n)), resolved)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nodesPerAxis": self.nodes_per_axis,
            "epsilonExponent": str(self.epsilon_exponent),
            "deltaExponent": str(self.delta_exponent),
            "deltaScale": self.delta_scale,
        }


@dataclass(frozen=True)
class ResidueEstimate:
    """
    Quadrature estimate of s_n with its per-point breakdown.

    ``contributions`` are real parts normalised by S(1)^n, keyed by the text form of w.
    """

    n: int
    estimate: Any
    normalized: float
    contributions: Tuple[Tuple[str, float], ...]
    relative_error: Optional[float]
    nodes_per_axis: int

    def contribution(self, w: str) -> float:
        return dict(self.contributions)[w]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "estimate": mpmath.nstr(self.estimate, 15),
            "normalized": self.normalized,
            "contributions": [{"w": w, "value": value} for w, value in self.contributions],
            "relativeErrorVsOracle": self.relative_error,
            "nodesPerAxis": self.nodes_per_axis,
        }


def _tensor_trapezoid(integrand: Callable[[List[Any]], Any], grid: np.ndarray, d: int) -> complex:
    """Trapezoid rule over grid^d, one slab of the first axis at a time."""
    rest = np.meshgrid(*([grid] * (d - 1)), indexing="ij") if d > 1 else []
    slabs = np.empty(len(grid), dtype=complex)
    for index, theta in enumerate(grid):
        values = integrand([theta] + list(rest))
        for _ in range(d - 1):
            values = np.trapezoid(values, grid, axis=0)
        slabs[index] = values
    return complex(np.trapezoid(slabs, grid))


def _point_contribution(
    decomposition: AxisDecomposition, point: GammaPoint, n: int, epsilon: float, grid: np.ndarray
) -> complex:
    """Integral over the neighbourhood of one point, divided by S(1)^n."""
    d = decomposition.dimension
    total = float(decomposition.model.total_weight())
    s_bar = decomposition.s_bar()
    A, B = decomposition.A, decomposition.B
    center = point.to_complex()

    def integrand(angles: List[Any]) -> Any:
        z = [center[j] * np.exp(1j * angles[j]) for j in range(d - 1)]
        z_d = (1 - epsilon) * center[-1] * np.exp(1j * angles[-1])
        A_value = A.evaluate_numeric(z)
        B_value = B.evaluate_numeric(z)
        prefactor: Any = 1.0
        for value in z:
            prefactor = prefactor * (1 + value)
        amplitude = prefactor * (B_value - z_d**2 * A_value) / (B_value * (1 - z_d))
        return amplitude * (s_bar.evaluate_numeric(z + [z_d]) / total) ** n

    return _tensor_trapezoid(integrand, grid, d) / (2 * math.pi) ** d


def residue_integral_estimate(
    model: WalkModel,
    n: int,
    spec: Optional[QuadratureSpec] = None,
    oracle: Optional[CountSequence] = None,
    metrics: Optional[PipelineMetrics] = None,
) -> ResidueEstimate:
    """
    Estimate s_n by integrating the residue integrand around every critical torus point.

    Args:
        model: A zero drift model (mostly or highly symmetric)
        n: Walk length
        spec: Contour parameters (default QuadratureSpec())
        oracle: Optional exact or float counts containing s_n
        metrics: Optional collector for the number of quadrature nodes

    Returns:
        ResidueEstimate; ``relative_error`` is set when the oracle covers n

    Raises:
        UnsupportedClass: If the model is neither highly nor mostly symmetric
        NonZeroDrift: If the asymmetric axis has non-zero drift
        QuadratureUnderResolved: If the node spacing exceeds 1/n
    """
    spec = spec or QuadratureSpec()
    decomposition = decompose(model)
    model_class = decomposition.model_class
    if not isinstance(model_class, HighlySymmetric) and model_class.drift_sign != DriftSign.ZERO:
        raise NonZeroDrift(f"The residue integral needs zero drift, the model has drift {model_class.drift}")
    if n < 1:
        raise ValueError(f"Walk length must be positive, got {n}")

    d = decomposition.dimension
    epsilon, delta, nodes = spec.epsilon(n), spec.delta(n), spec.nodes(n)
    spacing = 2 * delta / (nodes - 1)
    if spacing > 1 / n:
        raise QuadratureUnderResolved(f"Node spacing {spacing:.3e} exceeds the oscillation scale 1/n = {1 / n:.3e}")

    grid = np.linspace(-delta, delta, nodes)
    logger.debug(f"n={n}: epsilon={epsilon:.4g}, delta={delta:.4g}, {nodes} nodes per axis")

    contributions: List[Tuple[str, float]] = []
    for point in gamma_points(decomposition):
        value = _point_contribution(decomposition, point, n, epsilon, grid)
        label = ",".join(gaussian_to_text(v) for v in point.w)
        contributions.append((label, value.real))
        record(metrics, "quadrature_nodes", nodes**d)
        logger.debug(f"Contribution of ({label}): {value.real:.12g} (imaginary part {value.imag:.3g})")

    normalized = sum(value for _, value in contributions)
    total = decomposition.model.total_weight()
    with mpmath.workdps(30):
        estimate = +(mpmath.mpf(normalized) * (mpmath.mpf(total.numerator) / total.denominator) ** n)

        relative_error = None
        if oracle is not None and len(oracle) > n:
            exact = oracle.as_mpf(n)
            relative_error = float(abs(estimate - exact) / exact)

    logger.info(
        f"Residue integral at n={n}: {mpmath.nstr(estimate, 12)}"
        + (f" (relative error {relative_error:.3e})" if relative_error is not None else "")
    )
    return ResidueEstimate(
        n=n,
        estimate=estimate,
        normalized=normalized,
        contributions=tuple(contributions),
        relative_error=relative_error,
        nodes_per_axis=nodes,
    )
