"""
Growth-rate, order and constant estimation from walk counts, and certification of predictions.

All arithmetic runs in mpmath on log-scaled data so that base^n never overflows.

Critical torus points other than the all-ones point contribute terms carrying
a factor omega^n, omega a fourth root of unity. The estimators therefore work
inside residue classes mod lcm(period, stride), on which those factors are
constant; the default stride of 4 covers every such point.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Tuple

import mpmath

from scripts.asymptotics.base_theorem import AsymptoticPrediction
from scripts.enumerate_walks import CountSequence
from scripts.errors import ConfigurationError, InsufficientData, NonPositiveTerms
from scripts.metrics import PipelineMetrics, record

logger = logging.getLogger(__name__)

DEFAULT_TERMS = 3
DEFAULT_WINDOW_FRACTION = 0.25
MIN_WINDOW_START = 8
DEFAULT_CONDITION_LIMIT = 1e14
DEFAULT_PRECISION_DPS = 40
MAX_PERIOD = 4
DEFAULT_STRIDE = MAX_PERIOD
PERIOD_TOLERANCE = 1e-2


@dataclass(frozen=True)
class ToleranceProfile:
    """Acceptance thresholds; a ``c1_rel`` of None skips the second-order comparison."""

    name: str
    base_rel: float
    order_abs: float
    c0_rel: float
    c1_rel: Optional[float] = None

    @classmethod
    def from_dict(cls, name: str, values: Mapping[str, Any]) -> "ToleranceProfile":
        try:
            c1 = values.get("c1_rel")
            return cls(
                name=name,
                base_rel=float(values["base_rel"]),
                order_abs=float(values["order_abs"]),
                c0_rel=float(values["c0_rel"]),
                c1_rel=float(c1) if c1 is not None else None,
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigurationError(f"Tolerance profile '{name}' is malformed: {e}") from e

    def to_dict(self) -> Dict[str, Any]:
        return {"base_rel": self.base_rel, "order_abs": self.order_abs, "c0_rel": self.c0_rel, "c1_rel": self.c1_rel}


TOLERANCE_PROFILES: Dict[str, ToleranceProfile] = {
    "strict": ToleranceProfile("strict", 0.005, 0.1, 0.01, 0.05),
    "parity": ToleranceProfile("parity", 0.005, 0.1, 0.015, None),
    "relaxed": ToleranceProfile("relaxed", 0.01, 0.15, 0.03, None),
}


@dataclass(frozen=True)
class FitResult:
    """
    Least-squares fit of r_n = s_n n^order / base^n against sum_k c_k n^(-k/2).

    ``window`` is the inclusive range of n used; only lengths in
    ``residue_class`` mod ``period`` enter the fit. Those lengths are fitted
    separately per class mod ``stride`` and the coefficients averaged.
    """

    base: float
    order: float
    coefficients: Tuple[float, ...]
    standard_errors: Tuple[float, ...]
    window: Tuple[int, int]
    residual_rms: float
    residue_class: int
    period: int
    stride: int
    condition_number: float
    ill_conditioned: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": self.base,
            "order": self.order,
            "coefficients": list(self.coefficients),
            "standardErrors": list(self.standard_errors),
            "window": list(self.window),
            "residualRMS": self.residual_rms,
            "residueClass": self.residue_class,
            "period": self.period,
            "stride": self.stride,
            "conditionNumber": self.condition_number,
            "illConditioned": self.ill_conditioned,
        }


def class_step(period: int, stride: Optional[int] = None) -> int:
    """lcm(period, stride): the spacing of lengths on which oscillating factors are constant."""
    return math.lcm(period, DEFAULT_STRIDE if stride is None else stride)


def _last_in_class(seq: CountSequence, period: int, residue: Optional[int]) -> int:
    last = len(seq) - 1
    if residue is None:
        return last
    return last - (last - residue) % period


def _positive(seq: CountSequence, n: int) -> Any:
    value = seq.as_mpf(n)
    if value <= 0:
        raise NonPositiveTerms(f"Need positive terms, got s_{n} = {value}")
    return value


def _class_ratio(seq: CountSequence, n: int, step: int) -> Any:
    """(s_n / s_(n-step))^(1/step)."""
    return (_positive(seq, n) / _positive(seq, n - step)) ** (mpmath.mpf(1) / step)


def estimate_base(
    seq: CountSequence, period: int = 1, residue: Optional[int] = None, stride: Optional[int] = None
) -> float:
    """
    Exponential growth rate from the two largest step ratios of a residue class.

    With q = lcm(period, stride) and R_n = (s_n / s_(n-q))^(1/q), the Richardson
    combination (N R_N - (N - q) R_(N-q)) / q removes the 1/n term of the ratio.

    Args:
        seq: Walk counts
        period: Residue class modulus p
        residue: Residue class (default: the class of the last term)
        stride: Period of the sub-leading oscillation (default 4)

    Raises:
        InsufficientData: If the sequence has fewer than 4p terms or the class is shorter than 2q
        NonPositiveTerms: If a term used is not positive
    """
    if len(seq) < 4 * period:
        raise InsufficientData(f"Need at least {4 * period} terms for period {period}, got {len(seq)}")
    step = class_step(period, stride)
    last = _last_in_class(seq, period, residue)
    if last - 2 * step < 0:
        raise InsufficientData(f"Need two ratios {step} apart, the class ends at n = {last}")
    with mpmath.workdps(DEFAULT_PRECISION_DPS):
        ratio_last = _class_ratio(seq, last, step)
        ratio_previous = _class_ratio(seq, last - step, step)
        refined = (last * ratio_last - (last - step) * ratio_previous) / step
        return float(refined)


def _log_slope(seq: CountSequence, log_base: Any, n: int, step: int) -> Any:
    """-(log r_n - log r_(n-step)) / (log n - log(n - step)) with r_n = s_n / base^n."""
    rise = (mpmath.log(_positive(seq, n)) - n * log_base) - (mpmath.log(_positive(seq, n - step)) - (n - step) * log_base)
    return -rise / (mpmath.log(n) - mpmath.log(n - step))


def estimate_order(
    seq: CountSequence, base: float, period: int = 1, residue: Optional[int] = None, stride: Optional[int] = None
) -> float:
    """
    Polynomial order alpha from local log slopes of a residue class.

    The slope at the end of the class is off by a multiple of n^(-1/2); when the
    class is long enough a second slope near a quarter of its length cancels that term.
    """
    if len(seq) < 4 * period:
        raise InsufficientData(f"Need at least {4 * period} terms for period {period}, got {len(seq)}")
    step = class_step(period, stride)
    last = _last_in_class(seq, period, residue)
    if last - step < 1:
        raise InsufficientData("The residue class is too short for a log slope")
    quarter = last - step * ((last - last // 4) // step)

    with mpmath.workdps(DEFAULT_PRECISION_DPS):
        log_base = mpmath.log(base)
        alpha_last = _log_slope(seq, log_base, last, step)
        if quarter - step < 1 or quarter >= last:
            return float(alpha_last)
        alpha_quarter = _log_slope(seq, log_base, quarter, step)
        root_last, root_quarter = mpmath.sqrt(last), mpmath.sqrt(quarter)
        return float((root_last * alpha_last - root_quarter * alpha_quarter) / (root_last - root_quarter))


def detect_period(seq: CountSequence, max_period: int = MAX_PERIOD) -> int:
    """
    Smallest p dividing 4 whose classes mod p share their leading constant.

    The constant is fitted on each class mod 4 with a common estimated base and
    order; a shared error in those estimates shifts every class alike.

    Raises:
        InsufficientData: If the sequence is too short to fit every class mod 4
        NonPositiveTerms: If a term used is not positive
    """
    base = estimate_base(seq, stride=MAX_PERIOD)
    order = estimate_order(seq, base, stride=MAX_PERIOD)
    constants = [
        fit_expansion(seq, base, order, period=MAX_PERIOD, residue=residue, stride=MAX_PERIOD).coefficients[0]
        for residue in range(MAX_PERIOD)
    ]
    scale = max(abs(c) for c in constants)
    logger.debug(f"Class constants mod {MAX_PERIOD}: {constants}")

    for p in range(1, max_period + 1):
        if MAX_PERIOD % p:
            continue
        if all(abs(constants[r] - constants[(r + p) % MAX_PERIOD]) <= PERIOD_TOLERANCE * scale for r in range(MAX_PERIOD)):
            logger.debug(f"Detected period {p}")
            return p
    logger.warning(f"Class constants do not repeat with any period up to {max_period}; using {max_period}")
    return max_period


def default_window(length: int, window_fraction: float = DEFAULT_WINDOW_FRACTION) -> Tuple[int, int]:
    """[max(8, fraction * N), N] for a sequence with terms s_0 .. s_N."""
    last = length - 1
    return max(MIN_WINDOW_START, int(window_fraction * last)), last


@dataclass
class _ClassSolve:
    coefficients: List[Any]
    variances: List[Any]
    residuals: List[Any]
    condition: Any


def _solve_class(seq: CountSequence, points: List[int], log_base: Any, alpha: Any, columns: int) -> _ClassSolve:
    """Weighted least squares on one class of lengths; runs at the caller's working precision."""
    targets, weights = [], []
    for n in points:
        value = seq.as_mpf(n)
        if value <= 0:
            raise NonPositiveTerms(f"s_{n} = {value} is not positive")
        scaled = mpmath.exp(mpmath.log(value) + alpha * mpmath.log(n) - n * log_base)
        targets.append(scaled)
        bound = seq.rounding_bound(n)
        weights.append(1 / (scaled * bound) if bound > 0 else mpmath.mpf(1))

    design = mpmath.matrix(len(points), columns)
    rhs = mpmath.matrix(len(points), 1)
    for row, n in enumerate(points):
        for k in range(columns):
            design[row, k] = weights[row] * mpmath.power(n, -mpmath.mpf(k) / 2)
        rhs[row] = weights[row] * targets[row]

    solution, _ = mpmath.qr_solve(design, rhs)
    normal = design.T * design
    residuals = rhs - design * solution
    weighted_rss = sum(residuals[row] ** 2 for row in range(len(points)))
    dof = max(len(points) - columns, 1)
    covariance = mpmath.inverse(normal) * (weighted_rss / dof)
    return _ClassSolve(
        coefficients=[solution[k] for k in range(columns)],
        variances=[abs(covariance[k, k]) for k in range(columns)],
        residuals=[residuals[row] / weights[row] for row in range(len(points))],
        condition=mpmath.cond(normal),
    )


def fit_expansion(
    seq: CountSequence,
    base: float,
    order: float,
    terms: int = DEFAULT_TERMS,
    window: Optional[Tuple[int, int]] = None,
    period: int = 1,
    residue: int = 0,
    stride: Optional[int] = None,
    condition_limit: float = DEFAULT_CONDITION_LIMIT,
    precision_dps: int = DEFAULT_PRECISION_DPS,
    metrics: Optional[PipelineMetrics] = None,
) -> FitResult:
    """
    Fit r_n = s_n n^order / base^n against the half-power basis 1, n^(-1/2), ..., n^(-terms/2).

    The lengths of the residue class are split by n mod lcm(period, stride),
    each part is fitted on its own and the coefficients are averaged, which
    cancels the omega^n factors of oscillating contributions. Float-mode
    rounding bounds from the oracle become per-point weights. Standard errors
    combine the least-squares error with the change of each coefficient when
    one more basis term is fitted. The fit is always returned; an
    ill-conditioned normal system is flagged and logged.

    Args:
        seq: Walk counts
        base: Exponential growth rate
        order: Polynomial order alpha
        terms: Highest basis power m (m + 1 coefficients)
        window: Inclusive (n_min, n_max); default [max(8, N/4), N]
        period: Residue class modulus
        residue: Residue class fitted
        stride: Period of the sub-leading oscillation (default 4, 1 fits the class as a whole)
        condition_limit: Condition number above which the fit is flagged
        precision_dps: Working precision in decimal digits
        metrics: Optional collector

    Returns:
        FitResult with coefficients c_0 .. c_m and their standard errors

    Raises:
        InsufficientData: If a part of the window holds fewer points than coefficients
        NonPositiveTerms: If a term in the window is not positive
    """
    n_min, n_max = window if window is not None else default_window(len(seq))
    n_min = max(n_min, MIN_WINDOW_START)
    n_max = min(n_max, len(seq) - 1)
    step = class_step(period, stride)
    columns = terms + 1
    parts = [
        [n for n in range(n_min, n_max + 1) if n % step == part]
        for part in range(step)
        if part % period == residue % period
    ]
    smallest = min(len(points) for points in parts)
    if smallest < columns:
        raise InsufficientData(
            f"Window [{n_min}, {n_max}] has {smallest} points per class mod {step} for {columns} coefficients"
        )

    with mpmath.workdps(precision_dps):
        log_base = mpmath.log(mpmath.mpf(base))
        alpha = mpmath.mpf(order)
        solves = [_solve_class(seq, points, log_base, alpha, columns) for points in parts]
        count = len(solves)
        averaged = [sum(solve.coefficients[k] for solve in solves) / count for k in range(columns)]
        variances = [sum(solve.variances[k] for solve in solves) / count**2 for k in range(columns)]

        if smallest > columns + 1:
            extended = [_solve_class(seq, points, log_base, alpha, columns + 1) for points in parts]
            for k in range(columns):
                shift = sum(solve.coefficients[k] for solve in extended) / count - averaged[k]
                variances[k] += shift**2

        residuals = [r for solve in solves for r in solve.residuals]
        rms = float(mpmath.sqrt(sum(r**2 for r in residuals) / len(residuals)))
        coefficients = tuple(float(c) for c in averaged)
        errors = tuple(float(mpmath.sqrt(v)) for v in variances)
        condition_number = float(max(solve.condition for solve in solves))

    ill_conditioned = condition_number > condition_limit
    if ill_conditioned:
        logger.warning(f"Fit over [{n_min}, {n_max}] is ill-conditioned (condition number {condition_number:.3e})")
    record(metrics, "fits")
    logger.debug(
        f"Fit class {residue} mod {period} (step {step}) over [{n_min}, {n_max}]: c = {coefficients}, rms {rms:.3e}"
    )

    return FitResult(
        base=float(base),
        order=float(order),
        coefficients=coefficients,
        standard_errors=errors,
        window=(n_min, n_max),
        residual_rms=rms,
        residue_class=residue % period,
        period=period,
        stride=step,
        condition_number=condition_number,
        ill_conditioned=ill_conditioned,
    )


@dataclass(frozen=True)
class ClassComparison:
    """Predicted against fitted quantities for one residue class."""

    residue: int
    predicted: Dict[str, Optional[float]]
    fitted: Dict[str, Optional[float]]
    errors: Dict[str, Optional[float]]
    limits: Dict[str, Optional[float]]
    fit: FitResult

    @property
    def passed(self) -> bool:
        return all(
            error is not None and error <= self.limits[name]
            for name, error in self.errors.items()
            if self.limits.get(name) is not None
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "residue": self.residue,
            "predicted": self.predicted,
            "fitted": self.fitted,
            "errors": self.errors,
            "passed": self.passed,
            "fit": self.fit.to_dict(),
        }


@dataclass(frozen=True)
class VerificationReport:
    """Per-class comparisons and the overall verdict under one tolerance profile."""

    theorem: str
    profile: ToleranceProfile
    max_n: int
    classes: Tuple[ClassComparison, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(comparison.passed for comparison in self.classes)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theorem": self.theorem,
            "profile": self.profile.name,
            "tolerances": self.profile.to_dict(),
            "maxN": self.max_n,
            "classes": [comparison.to_dict() for comparison in self.classes],
            "verdict": self.verdict,
        }

    def to_table(self) -> str:
        """Human-readable table, one row per class and quantity."""
        header = f"{'class':>5}  {'quantity':<8}  {'predicted':>14}  {'fitted':>14}  {'error':>10}  {'limit':>8}"
        lines = [
            f"{self.theorem} verification up to n = {self.max_n} (profile {self.profile.name})",
            header,
            "-" * len(header),
        ]
        for comparison in self.classes:
            for name in ("base", "order", "c0", "c1"):
                if name not in comparison.errors:
                    continue
                predicted, fitted = comparison.predicted.get(name), comparison.fitted.get(name)
                error, limit = comparison.errors[name], comparison.limits.get(name)
                lines.append(
                    f"{comparison.residue:>5}  {name:<8}  {_cell(predicted, 14)}  {_cell(fitted, 14)}"
                    f"  {_cell(error, 10, '.2e')}  {_cell(limit, 8, 'g')}"
                )
        lines.append(f"verdict: {self.verdict.upper()}")
        return "\n".join(lines) + "\n"


def _cell(value: Optional[float], width: int, spec: str = ".8g") -> str:
    return f"{'-':>{width}}" if value is None else f"{value:>{width}{spec}}"


def _relative(fitted: float, predicted: float) -> float:
    return abs(fitted - predicted) / abs(predicted)


def compare(
    prediction: AsymptoticPrediction,
    seq: CountSequence,
    tolerances: ToleranceProfile,
    terms: int = DEFAULT_TERMS,
    window_fraction: float = DEFAULT_WINDOW_FRACTION,
    stride: Optional[int] = None,
    condition_limit: float = DEFAULT_CONDITION_LIMIT,
    precision_dps: int = DEFAULT_PRECISION_DPS,
    metrics: Optional[PipelineMetrics] = None,
) -> VerificationReport:
    """
    Certify a prediction against walk counts.

    For every residue class of the predicted period the base is estimated from
    ratios, the order from local log slopes, and the constants from a fit with
    the predicted base and order, all on classes mod lcm(period, stride). c_1
    is compared only when the prediction carries a second-order term; a zero
    kappa is compared absolutely.
    """
    period = prediction.period
    window = default_window(len(seq), window_fraction)
    comparisons = []

    for expected in prediction.classes:
        residue = expected.residue
        fitted_base = estimate_base(seq, period, residue, stride=stride)
        fitted_order = estimate_order(seq, expected.base_value, period, residue, stride=stride)
        fit = fit_expansion(
            seq,
            expected.base_value,
            expected.order_value,
            terms=terms,
            window=window,
            period=period,
            residue=residue,
            stride=stride,
            condition_limit=condition_limit,
            precision_dps=precision_dps,
            metrics=metrics,
        )

        predicted: Dict[str, Optional[float]] = {
            "base": expected.base_value,
            "order": expected.order_value,
            "c0": expected.constant_value,
        }
        fitted: Dict[str, Optional[float]] = {"base": fitted_base, "order": fitted_order, "c0": fit.coefficients[0]}
        errors: Dict[str, Optional[float]] = {
            "base": _relative(fitted_base, expected.base_value),
            "order": abs(fitted_order - expected.order_value),
            "c0": _relative(fit.coefficients[0], expected.constant_value),
        }
        limits: Dict[str, Optional[float]] = {
            "base": tolerances.base_rel,
            "order": tolerances.order_abs,
            "c0": tolerances.c0_rel,
        }

        if prediction.second_order is not None and len(fit.coefficients) > 1:
            kappa = prediction.second_order.kappa_value
            c1 = fit.coefficients[1]
            predicted["c1"], fitted["c1"] = kappa, c1
            errors["c1"] = _relative(c1, kappa) if kappa != 0 else abs(c1)
            limits["c1"] = tolerances.c1_rel

        comparison = ClassComparison(
            residue=residue, predicted=predicted, fitted=fitted, errors=errors, limits=limits, fit=fit
        )
        logger.debug(f"Class {residue}: errors {errors}")
        comparisons.append(comparison)

    report = VerificationReport(
        theorem=prediction.theorem, profile=tolerances, max_n=len(seq) - 1, classes=tuple(comparisons)
    )
    logger.info(f"Verification of {prediction.theorem} up to n = {report.max_n}: {report.verdict}")
    return report
