"""
Kernel-method rational diagonal representations and exact diagonal extraction.

Highly symmetric models have generating function

    W(t) = Diag( (1 + z_1)...(1 + z_d) / (1 - t z_1...z_d S(z)) )

and mostly symmetric models (asymmetric axis last)

    W(t) = Diag( G / (H_1 H_2 H_3) )
    G   = (1 + z_1)...(1 + z_{d-1}) (1 - t z_1...z_d (Q + 2 z_d A))
    H_1 = 1 - z_d
    H_2 = 1 - t z_1...z_d S(z_1, ..., z_{d-1}, 1/z_d)
    H_3 = 1 - t z_1...z_d (Q + z_d A)

Polynomials here carry d + 1 variables with t in the last position.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy as sp

from scripts.enumerate_walks import count_walks
from scripts.errors import ResourceLimit, SaddleConsistencyError, UnsupportedClass
from scripts.metrics import PipelineMetrics, record
from scripts.walk_model import HighlySymmetric, LaurentPoly, Unsupported, WalkModel, char_poly, decompose
from scripts.walk_model.laurent import product

logger = logging.getLogger(__name__)

DEFAULT_VERIFY_DEPTH = 15
DEFAULT_MAX_TERMS = 2_000_000

HIGHLY_SYMMETRIC_FORM = "highly_symmetric"
MOSTLY_SYMMETRIC_FORM = "mostly_symmetric"


@dataclass(frozen=True)
class DiagonalRep:
    """
    A rational function G / (H_1 ... H_k) whose diagonal counts the walks.

    Every polynomial has ``variable_count`` = d + 1 variables (z_1 .. z_d, t),
    no negative exponents, and every denominator factor has constant term 1.
    """

    variable_count: int
    numerator: LaurentPoly
    denominator_factors: Tuple[LaurentPoly, ...]
    form: str

    def __post_init__(self) -> None:
        polys = (self.numerator,) + self.denominator_factors
        if any(poly.nvars != self.variable_count for poly in polys):
            raise ValueError("Every polynomial must use the representation's variables")
        if not all(poly.is_polynomial() for poly in polys):
            raise ValueError("Representation polynomials cannot have negative exponents")
        origin = (0,) * self.variable_count
        for factor in self.denominator_factors:
            if factor.coefficient(origin) != 1:
                raise ValueError(f"Denominator factor {factor.to_text()} does not have constant term 1")

    @property
    def dimension(self) -> int:
        return self.variable_count - 1

    def variable_names(self) -> List[str]:
        names = [f"z{i + 1}" for i in range(self.dimension)] if self.dimension > 3 else ["x", "y", "z"][: self.dimension]
        return names + ["t"]

    def without_factor(self, index: int) -> "DiagonalRep":
        """Copy with one denominator factor removed."""
        factors = self.denominator_factors[:index] + self.denominator_factors[index + 1 :]
        return DiagonalRep(self.variable_count, self.numerator, factors, self.form)


def _z_product(nvars: int, d: int) -> LaurentPoly:
    return LaurentPoly.monomial(nvars, [1] * d + [0])


def build_rep(model: WalkModel, form: Optional[str] = None) -> DiagonalRep:
    """
    Build the kernel-method diagonal representation of a model.

    Args:
        model: A highly or mostly symmetric model
        form: Force "highly_symmetric" or "mostly_symmetric"; by default the
            form follows the model class. Highly symmetric models accept both.

    Returns:
        DiagonalRep with expanded sparse polynomials

    Raises:
        UnsupportedClass: If the model is unsupported, or the highly symmetric
            form is requested for a mostly symmetric model
    """
    decomposition = decompose(model)
    canonical = decomposition.model
    d = canonical.dimension
    nvars = d + 1
    highly = isinstance(decomposition.model_class, HighlySymmetric)
    form = form or (HIGHLY_SYMMETRIC_FORM if highly else MOSTLY_SYMMETRIC_FORM)

    t = LaurentPoly.variable(nvars, d)
    z_prod = _z_product(nvars, d)
    embedding = list(range(d))

    if form == HIGHLY_SYMMETRIC_FORM:
        if not highly:
            raise UnsupportedClass("The highly symmetric representation needs a highly symmetric model")
        S = char_poly(canonical).embed(nvars, embedding)
        numerator = product((1 + LaurentPoly.variable(nvars, j) for j in range(d)), nvars)
        H = 1 - t * z_prod * S
        return DiagonalRep(nvars, numerator, (H,), HIGHLY_SYMMETRIC_FORM)

    if form != MOSTLY_SYMMETRIC_FORM:
        raise ValueError(f"Unknown representation form: {form!r}")

    hat = list(range(d - 1))
    A = decomposition.A.embed(nvars, hat)
    Q = decomposition.Q.embed(nvars, hat)
    z_d = LaurentPoly.variable(nvars, d - 1)
    S_bar = decomposition.s_bar().embed(nvars, embedding)

    prefactor = product((1 + LaurentPoly.variable(nvars, j) for j in range(d - 1)), nvars)
    numerator = prefactor * (1 - t * z_prod * (Q + 2 * z_d * A))
    H1 = 1 - z_d
    H2 = 1 - t * z_prod * S_bar
    H3 = 1 - t * z_prod * (Q + z_d * A)
    return DiagonalRep(nvars, numerator, (H1, H2, H3), MOSTLY_SYMMETRIC_FORM)


def _split_factor(factor: LaurentPoly) -> Tuple[str, LaurentPoly]:
    """
    Classify a factor as ``("t", P)`` for 1 - t P(z) or ``("z", R)`` for 1 - R(z).

    The returned polynomial keeps all d + 1 variables with t-exponent zero.
    """
    t_index = factor.nvars - 1
    rest = 1 - factor
    degrees = {exponent[t_index] for exponent in rest}
    if degrees == {1}:
        return "t", rest.section(t_index, 1).embed(factor.nvars, list(range(t_index)))
    if degrees <= {0}:
        return "z", rest
    raise ValueError(f"Factor {factor.to_text()} is neither 1 - t P(z) nor 1 - R(z)")


def _geometric_expansion(ratio: LaurentPoly, caps: Sequence[int], max_terms: int) -> LaurentPoly:
    """1 / (1 - R) truncated to per-variable degree caps; R must have no constant term."""
    if ratio.coefficient((0,) * ratio.nvars):
        raise ValueError("A geometric factor needs a ratio without constant term")
    if any(all(e == 0 for e in exponent[:-1]) for exponent in ratio):
        raise ValueError("A geometric ratio must raise some z-degree in every term")
    total = LaurentPoly.constant(ratio.nvars, 1)
    power = LaurentPoly.constant(ratio.nvars, 1)
    while True:
        power = power.mul_truncated(ratio, caps)
        if power.is_zero():
            return total
        total = total + power
        if len(total) > max_terms:
            raise ResourceLimit(f"Geometric expansion exceeds {max_terms} terms")


def diagonal_coeffs(
    rep: DiagonalRep,
    max_n: int,
    slack: int = 0,
    max_terms: int = DEFAULT_MAX_TERMS,
    metrics: Optional[PipelineMetrics] = None,
) -> List[Fraction]:
    """
    Exact diagonal coefficients [z_1^n ... z_d^n t^n] G/H for n = 0 .. max_n.

    Factors of the form 1 - t P(z) are expanded by powers of t: the coefficient
    of t^k in their product is the complete homogeneous polynomial h_k(P_1, ...),
    built by h^(i)_k = h^(i-1)_k + P_i h^(i)_(k-1). Factors 1 - R(z) are expanded
    geometrically once. Every intermediate is truncated to per-variable degree
    max_n + slack; no term above max_n can reach the diagonal because all
    representation exponents are non-negative.

    Raises:
        ResourceLimit: If an intermediate series exceeds ``max_terms`` terms
    """
    nvars = rep.variable_count
    d = rep.dimension
    cap = max_n + slack
    caps = [cap] * d + [0]

    t_ratios: List[LaurentPoly] = []
    z_ratios: List[LaurentPoly] = []
    for factor in rep.denominator_factors:
        kind, poly = _split_factor(factor)
        (t_ratios if kind == "t" else z_ratios).append(poly)

    z_series = LaurentPoly.constant(nvars, 1)
    for ratio in z_ratios:
        z_series = z_series.mul_truncated(_geometric_expansion(ratio, caps, max_terms), caps)
    z_lookup = z_series.terms

    t_index = nvars - 1
    numerator_by_t: Dict[int, LaurentPoly] = {
        power: rep.numerator.section(t_index, power).embed(nvars, list(range(t_index)))
        for power in rep.numerator.split_by(t_index)
    }

    # previous[i] holds h^(i)_(k-1); index 0 is the empty product
    one = LaurentPoly.constant(nvars, 1)
    previous: List[LaurentPoly] = [one] * (len(t_ratios) + 1)
    homogeneous: List[LaurentPoly] = [one]
    for k in range(1, max_n + 1):
        current = [LaurentPoly.zero(nvars)]
        for i, ratio in enumerate(t_ratios, start=1):
            current.append(current[i - 1] + ratio.mul_truncated(previous[i], caps))
        homogeneous.append(current[-1])
        previous = current
        size = len(current[-1])
        record(metrics, "series_terms", size)
        if size > max_terms:
            raise ResourceLimit(f"Series coefficient of t^{k} exceeds {max_terms} terms")

    coefficients: List[Fraction] = []
    for n in range(max_n + 1):
        target = (n,) * d + (0,)
        t_coefficient = LaurentPoly.zero(nvars)
        for power, part in numerator_by_t.items():
            if 0 <= n - power <= max_n:
                t_coefficient = t_coefficient + part.mul_truncated(homogeneous[n - power], caps)
        value = Fraction(0)
        for exponent, coefficient in t_coefficient.terms.items():
            complement = tuple(a - b for a, b in zip(target, exponent))
            if min(complement) < 0:
                continue
            z_coefficient = z_lookup.get(complement)
            if z_coefficient:
                value += coefficient * z_coefficient
        coefficients.append(value)

    logger.debug(f"Extracted {len(coefficients)} diagonal coefficients ({len(t_ratios)} t-factors)")
    return coefficients


@dataclass(frozen=True)
class DiagonalCheck:
    """Outcome of comparing diagonal coefficients with the DP oracle."""

    agree: bool
    first_mismatch: Optional[int]
    max_n: int
    diagonal: Tuple[Fraction, ...]
    oracle: Tuple[Fraction, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "agree": self.agree,
            "firstMismatch": self.first_mismatch,
            "maxN": self.max_n,
            "diagonal": [str(v) for v in self.diagonal],
            "oracle": [str(v) for v in self.oracle],
        }


def verify_rep(
    model: WalkModel,
    max_n: int = DEFAULT_VERIFY_DEPTH,
    rep: Optional[DiagonalRep] = None,
    max_terms: int = DEFAULT_MAX_TERMS,
    metrics: Optional[PipelineMetrics] = None,
) -> DiagonalCheck:
    """
    Compare the diagonal of a representation with exact walk counts.

    Args:
        model: The walk model
        max_n: Largest length compared
        rep: Representation to check (default: build_rep(model))
        max_terms: Cap on intermediate series sizes
        metrics: Optional collector

    Returns:
        DiagonalCheck with the first disagreeing length, if any
    """
    rep = rep if rep is not None else build_rep(model)
    diagonal = diagonal_coeffs(rep, max_n, max_terms=max_terms, metrics=metrics)
    oracle = count_walks(model, max_n, "exact", metrics=metrics).values
    first_mismatch = next((n for n, (a, b) in enumerate(zip(diagonal, oracle)) if a != b), None)
    if first_mismatch is None:
        logger.info(f"Diagonal representation agrees with the oracle for n <= {max_n}")
    else:
        logger.warning(f"Diagonal representation disagrees with the oracle at n = {first_mismatch}")
    return DiagonalCheck(
        agree=first_mismatch is None,
        first_mismatch=first_mismatch,
        max_n=max_n,
        diagonal=tuple(diagonal),
        oracle=tuple(oracle),
    )


def export_rep(rep: DiagonalRep) -> str:
    """Canonical text form: one line for G and one per denominator factor."""
    names = rep.variable_names()
    lines = [f"G = {rep.numerator.to_text(names)}"]
    for index, factor in enumerate(rep.denominator_factors, start=1):
        label = "H" if len(rep.denominator_factors) == 1 else f"H{index}"
        lines.append(f"{label} = {factor.to_text(names)}")
    return "\n".join(lines) + "\n"


def critical_point_residuals(factor: LaurentPoly, point: Sequence[Any]) -> List[sp.Expr]:
    """
    Residuals of the smooth critical point equations of one denominator factor.

    Returns [H, z_1 H_z1 - t H_t, ..., z_d H_zd - t H_t] evaluated at ``point``
    (coordinates z_1 .. z_d, t; any sympy-compatible values). A smooth critical
    point makes every entry zero.
    """
    nvars = factor.nvars
    if len(point) != nvars:
        raise ValueError(f"Expected {nvars} coordinates, got {len(point)}")
    values = [sp.nsimplify(p) if isinstance(p, float) else sp.sympify(p) for p in point]
    t_index = nvars - 1
    t_term = values[t_index] * factor.derivative(t_index).evaluate_symbolic(values)
    residuals = [sp.simplify(factor.evaluate_symbolic(values))]
    for j in range(t_index):
        residuals.append(sp.simplify(values[j] * factor.derivative(j).evaluate_symbolic(values) - t_term))
    return residuals


def sigma_multipliers(model: WalkModel) -> Tuple[Fraction, Fraction]:
    """
    Multipliers of grad phi = l1 grad H_1 + l2 grad H_2 at sigma = (1, ..., 1, 1/S(1)).

    phi = 1 / (z_1 ... z_d t) is the part of the Cauchy integrand that depends
    on n. l1 equals the drift and l2 equals S(1); positive multipliers mean the
    non-smooth point sigma determines asymptotics.

    Raises:
        UnsupportedClass: If the model is not mostly symmetric
        SaddleConsistencyError: If the gradients are not linearly related
    """
    decomposition = decompose(model)
    if isinstance(decomposition.model_class, (HighlySymmetric, Unsupported)):
        raise UnsupportedClass("sigma multipliers are defined for mostly symmetric models")
    rep = build_rep(model, MOSTLY_SYMMETRIC_FORM)
    d = rep.dimension
    total = decomposition.model.total_weight()
    sigma = [Fraction(1)] * d + [1 / total]

    # phi = 1/(z_1...z_d t) equals S(1) at sigma
    grad_phi = [-total / value for value in sigma]
    H1, H2 = rep.denominator_factors[0], rep.denominator_factors[1]
    grad_H1 = [H1.derivative(j).evaluate(sigma) for j in range(d + 1)]
    grad_H2 = [H2.derivative(j).evaluate(sigma) for j in range(d + 1)]

    l2 = grad_phi[d] / grad_H2[d]
    l1 = (grad_phi[d - 1] - l2 * grad_H2[d - 1]) / grad_H1[d - 1]
    for j in range(d + 1):
        if grad_phi[j] != l1 * grad_H1[j] + l2 * grad_H2[j]:
            raise SaddleConsistencyError(f"Gradient component {j + 1} is not spanned by grad H_1 and grad H_2")
    return l1, l2
