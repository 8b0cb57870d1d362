"""
Mostly symmetric models with zero drift (A(1) = B(1)).

    s_n ~ S(1)^(d/2) / (pi^(d/2) sqrt(b_1 ... b_d)) * S(1)^n * n^(-d/2)

The constant has the same shape as in the highly symmetric case even though
H_1 and H_2 both vanish at the determining critical point.
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


class ZeroDriftTheorem(BaseTheorem):
    """Leading asymptotics of zero drift models."""

    tag = "Thm4"
    description = "mostly symmetric step sets with zero drift"

    def applies_to(self, decomposition: AxisDecomposition) -> bool:
        model_class = decomposition.model_class
        return isinstance(model_class, MostlySymmetric) and model_class.drift_sign == DriftSign.ZERO

    def leading_classes(self, decomposition: AxisDecomposition) -> List[ResidueClassAsymptotics]:
        d = decomposition.dimension
        total = as_rational(decomposition.model.total_weight())
        half_d = sp.Rational(d, 2)
        constant = total**half_d / (sp.pi**half_d * sp.sqrt(weight_product(decomposition.forward_weights)))
        return [ResidueClassAsymptotics(residue=0, base=total, order=half_d, constant=tidy(constant))]
