"""
Mostly symmetric models whose asymmetric axis drifts forward (B(1) > A(1)).

    s_n ~ (S(1)/pi)^((d-1)/2) (B(1) - A(1)) / (B(1) sqrt(b_1 ... b_(d-1))) * S(1)^n * n^(-(d-1)/2)
"""

from typing import List

import sympy as sp

from scripts.asymptotics.base_theorem import (
    BaseTheorem,
    ResidueClassAsymptotics,
    as_rational,
    tidy,
    weight_product,
)
from scripts.walk_model import AxisDecomposition, DriftSign, MostlySymmetric


class PositiveDriftTheorem(BaseTheorem):
    """Leading asymptotics of positive drift models."""

    tag = "Thm2"
    description = "mostly symmetric step sets with positive drift"

    def applies_to(self, decomposition: AxisDecomposition) -> bool:
        model_class = decomposition.model_class
        return isinstance(model_class, MostlySymmetric) and model_class.drift_sign == DriftSign.POSITIVE

    def leading_classes(self, decomposition: AxisDecomposition) -> List[ResidueClassAsymptotics]:
        d = decomposition.dimension
        total = as_rational(decomposition.model.total_weight())
        A1 = as_rational(decomposition.A.total())
        B1 = as_rational(decomposition.B.total())
        half_order = sp.Rational(d - 1, 2)
        b_hat = weight_product(decomposition.forward_weights[:-1])
        constant = (total / sp.pi) ** half_order * (B1 - A1) / (B1 * sp.sqrt(b_hat))
        return [ResidueClassAsymptotics(residue=0, base=total, order=half_order, constant=tidy(constant))]
