"""
Highly symmetric models: symmetric over every axis.

    s_n ~ (S(1)/pi)^(d/2) / sqrt(b_1 ... b_d) * S(1)^n * n^(-d/2)
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
from scripts.walk_model import AxisDecomposition, HighlySymmetric


class HighlySymmetricTheorem(BaseTheorem):
    """Leading asymptotics of highly symmetric models."""

    tag = "Thm1"
    description = "highly symmetric step sets"

    def applies_to(self, decomposition: AxisDecomposition) -> bool:
        return isinstance(decomposition.model_class, HighlySymmetric)

    def leading_classes(self, decomposition: AxisDecomposition) -> List[ResidueClassAsymptotics]:
        d = decomposition.dimension
        total = as_rational(decomposition.model.total_weight())
        half_d = sp.Rational(d, 2)
        constant = (total / sp.pi) ** half_d / sp.sqrt(weight_product(decomposition.forward_weights))
        return [ResidueClassAsymptotics(residue=0, base=total, order=half_d, constant=tidy(constant))]
