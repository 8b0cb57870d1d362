"""
Base abstract class for asymptotic theorems.
Defines the prediction record and the interface every theorem provider implements.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy as sp

from scripts.errors import UnsupportedClass
from scripts.walk_model import AxisDecomposition


def as_rational(value: Fraction) -> sp.Rational:
    """Exact sympy rational for a Fraction."""
    return sp.Rational(value.numerator, value.denominator)


def tidy(expr: sp.Expr) -> sp.Expr:
    """Normal form for surd and pi constants."""
    return sp.simplify(sp.radsimp(expr))


def weight_product(weights: Sequence[Fraction]) -> sp.Rational:
    product = sp.Integer(1)
    for weight in weights:
        product *= as_rational(weight)
    return product


@dataclass(frozen=True)
class ResidueClassAsymptotics:
    """Leading behaviour s_n ~ constant * base^n * n^(-order) on one residue class."""

    residue: int
    base: sp.Expr
    order: sp.Rational
    constant: sp.Expr

    @property
    def base_value(self) -> float:
        return float(self.base)

    @property
    def order_value(self) -> float:
        return float(self.order)

    @property
    def constant_value(self) -> float:
        return float(self.constant)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "residue": self.residue,
            "base": self.base_value,
            "baseExact": sp.sstr(self.base),
            "order": self.order_value,
            "constant": self.constant_value,
            "constantExact": sp.sstr(self.constant),
        }


@dataclass(frozen=True)
class SecondOrderTerm:
    """
    Coefficient kappa of S(1)^n n^(-(d+1)/2) contributed by the all-ones point.

    ``main_term_only`` is set because other critical points may in principle
    contribute at the same order.
    """

    kappa: sp.Expr
    main_term_only: bool = True

    @property
    def kappa_value(self) -> float:
        return float(self.kappa)

    def to_dict(self) -> Dict[str, Any]:
        return {"kappa": self.kappa_value, "kappaExact": sp.sstr(self.kappa), "mainTermOnly": self.main_term_only}


@dataclass(frozen=True)
class AsymptoticPrediction:
    """Theorem tag, period and per-residue-class leading asymptotics."""

    theorem: str
    dimension: int
    classes: Tuple[ResidueClassAsymptotics, ...]
    second_order: Optional[SecondOrderTerm] = None

    @property
    def period(self) -> int:
        return len(self.classes)

    def class_for(self, n: int) -> ResidueClassAsymptotics:
        """Residue class record governing s_n."""
        return self.classes[n % self.period]

    def with_second_order(self, term: SecondOrderTerm) -> "AsymptoticPrediction":
        return replace(self, second_order=term)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theorem": self.theorem,
            "dimension": self.dimension,
            "period": self.period,
            "classes": [record.to_dict() for record in self.classes],
            "secondOrder": self.second_order.to_dict() if self.second_order else None,
        }


class BaseTheorem(ABC):
    """
    Abstract base class for the asymptotic theorems.
    Each theorem covers one symmetry/drift family and produces its leading asymptotics.
    """

    tag = ""
    description = ""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """
        Initialize the theorem provider.

        Args:
            config: Optional provider configuration (currently unused by the built-in theorems)
        """
        self.config = config or {}
        self.logger = logging.getLogger(__name__)

    @abstractmethod
    def applies_to(self, decomposition: AxisDecomposition) -> bool:
        """
        Check whether the theorem covers a model.

        Args:
            decomposition: Axis decomposition of the canonical model

        Returns:
            True if the theorem's hypotheses hold
        """
        pass

    @abstractmethod
    def leading_classes(self, decomposition: AxisDecomposition) -> List[ResidueClassAsymptotics]:
        """
        Leading asymptotics per residue class.

        Args:
            decomposition: Axis decomposition of a covered model

        Returns:
            One record per residue class; the list length is the period
        """
        pass

    def get_theorem_name(self) -> str:
        return self.tag

    def predict(self, decomposition: AxisDecomposition) -> AsymptoticPrediction:
        """
        Evaluate the theorem for a model.

        Raises:
            UnsupportedClass: If the model is outside the theorem's family
        """
        if not self.applies_to(decomposition):
            raise UnsupportedClass(f"{self.tag} does not cover a model of class {decomposition.model_class.kind}")
        classes = self.leading_classes(decomposition)
        prediction = AsymptoticPrediction(
            theorem=self.tag,
            dimension=decomposition.dimension,
            classes=tuple(classes),
        )
        self._check_prediction(prediction, decomposition)
        self.logger.info(
            f"{self.tag}: base {sp.sstr(classes[0].base)}, order {classes[0].order}, period {prediction.period}"
        )
        return prediction

    def _check_prediction(self, prediction: AsymptoticPrediction, decomposition: AxisDecomposition) -> None:
        total = as_rational(decomposition.model.total_weight())
        for record in prediction.classes:
            if not record.constant_value > 0:
                raise ValueError(f"{self.tag} produced a non-positive constant {record.constant}")
            if record.base_value > float(total) * (1 + 1e-12):
                raise ValueError(f"{self.tag} produced a base {record.base} above S(1) = {total}")
