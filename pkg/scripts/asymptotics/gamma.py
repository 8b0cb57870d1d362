"""
The set of points on the unit torus where |z_1 ... z_d S(z_1, ..., 1/z_d)| reaches S(1).

Candidates are w^ in {+1, -1}^(d-1) and w_d in {+1, -1, +i, -i}; membership is
decided exactly over the Gaussian rationals. Coordinates refer to the canonical
axis order (asymmetric axis last).
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np
import sympy as sp

from scripts.walk_model import AxisDecomposition, WalkModel, decompose
from scripts.walk_model.laurent import gaussian, gaussian_abs2, gaussian_parts, gaussian_to_complex, gaussian_to_text

logger = logging.getLogger(__name__)

LEADING = "leading"
VANISHING_AMPLITUDE = "vanishing_amplitude"
SMOOTH = "smooth"
IMAGINARY = "imaginary"

MAX_PERIOD = 4


@dataclass(frozen=True)
class GammaPoint:
    """
    One member w of the set, with t = 1 / (w_1 ... w_d S-bar(w)).

    ``w``, ``t_coordinate`` and ``base_value`` are Gaussian rationals; ``kind``
    is one of ``leading``, ``vanishing_amplitude``, ``smooth`` or ``imaginary``
    and ``order`` is the power of 1/n by which the point's contribution is
    bounded (d/2 for the all-ones point, (d + 1)/2 for every other kind).
    """

    w: Tuple[Any, ...]
    t_coordinate: Any
    base_value: Any
    kind: str
    order: sp.Rational

    @property
    def is_all_ones(self) -> bool:
        return self.kind == LEADING

    def angles(self) -> List[float]:
        """Arguments of the coordinates of w in radians."""
        return [float(np.angle(gaussian_to_complex(value))) for value in self.w]

    def to_complex(self) -> List[complex]:
        return [gaussian_to_complex(value) for value in self.w]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "w": [gaussian_to_text(value) for value in self.w],
            "t": gaussian_to_text(self.t_coordinate),
            "baseValue": gaussian_to_text(self.base_value),
            "kind": self.kind,
            "order": str(self.order),
        }


@dataclass(frozen=True)
class GammaSet:
    """Members of the set plus the periods their base values induce."""

    points: Tuple[GammaPoint, ...]
    period: int
    full_period: int

    def __iter__(self) -> Iterator[GammaPoint]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def all_ones(self) -> GammaPoint:
        return next(point for point in self.points if point.is_all_ones)

    def find(self, w: Tuple[Any, ...]) -> Optional[GammaPoint]:
        return next((point for point in self.points if point.w == tuple(w)), None)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "points": [point.to_dict() for point in self.points],
            "period": self.period,
            "fullPeriod": self.full_period,
        }


def _is_positive_real(value: Any) -> bool:
    re, im = gaussian_parts(value)
    return im == 0 and re > 0


def _least_period(values: List[Any]) -> int:
    """Least p with every value^p a positive real; base values are S(1) times a fourth root of unity."""
    for p in range(1, MAX_PERIOD + 1):
        if all(_is_positive_real(value**p) for value in values):
            return p
    raise ValueError("Base values are not S(1) times a root of unity")


def _kind(w: Tuple[Any, ...]) -> str:
    one, minus_one = gaussian(1), gaussian(-1)
    w_hat, w_d = w[:-1], w[-1]
    if w_d == one:
        return LEADING if all(value == one for value in w_hat) else VANISHING_AMPLITUDE
    if w_d == minus_one:
        return SMOOTH
    return IMAGINARY


def gamma_points(decomposition: AxisDecomposition) -> GammaSet:
    """Enumerate the candidates for an already decomposed model."""
    d = decomposition.dimension
    total = decomposition.model.total_weight()
    s_bar = decomposition.s_bar()
    units = [gaussian(1), gaussian(-1)]
    last_candidates = units + [gaussian(0, 1), gaussian(0, -1)]

    points: List[GammaPoint] = []
    for w_hat in itertools.product(units, repeat=d - 1):
        for w_d in last_candidates:
            w = tuple(w_hat) + (w_d,)
            base_value = s_bar.evaluate_gaussian(w)
            scaled = base_value
            for value in w:
                scaled = scaled * value
            if gaussian_abs2(scaled) != total * total:
                continue
            kind = _kind(w)
            order = sp.Rational(d, 2) if kind == LEADING else sp.Rational(d + 1, 2)
            points.append(GammaPoint(w=w, t_coordinate=1 / scaled, base_value=base_value, kind=kind, order=order))
            logger.debug(f"Member {[gaussian_to_text(v) for v in w]} ({kind}), t = {gaussian_to_text(1 / scaled)}")

    # the all-ones point satisfies the modulus condition with equality of values
    leading = [point.base_value for point in points if point.kind == LEADING]
    period = _least_period(leading)
    full_period = _least_period([point.base_value for point in points])
    logger.info(f"Found {len(points)} critical torus points (period {period}, full period {full_period})")
    return GammaSet(points=tuple(points), period=period, full_period=full_period)


def gamma_set(model: WalkModel) -> GammaSet:
    """
    Points of the unit torus where the walk kernel reaches its maximal modulus.

    Args:
        model: A highly or mostly symmetric model

    Returns:
        GammaSet whose members carry exact t-coordinates and order classes

    Raises:
        UnsupportedClass: If the model is neither highly nor mostly symmetric
    """
    return gamma_points(decompose(model))
