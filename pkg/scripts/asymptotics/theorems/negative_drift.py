"""
Mostly symmetric models whose asymmetric axis drifts backward (A(1) > B(1)).

With rho = sqrt(A(1)/B(1)) the walks grow like S(1, rho)^n n^(-d/2 - 1), where
S(1, rho) = A(1)/rho + Q(1) + B(1) rho < S(1). When Q = 0 the mirror point
-rho contributes at the same exponential rate with S(1, -rho) = -S(1, rho),
which splits the sequence into even and odd classes.
"""

from typing import List

import sympy as sp

from scripts.asymptotics.base_theorem import BaseTheorem, ResidueClassAsymptotics, as_rational, tidy
from scripts.walk_model import AxisDecomposition, DriftSign, MostlySymmetric


def rho_base(decomposition: AxisDecomposition, rho: sp.Expr) -> sp.Expr:
    """S(1, rho) = A(1)/rho + Q(1) + B(1) rho."""
    A1 = as_rational(decomposition.A.total())
    Q1 = as_rational(decomposition.Q.total())
    B1 = as_rational(decomposition.B.total())
    return tidy(A1 / rho + Q1 + B1 * rho)


def rho_constant(decomposition: AxisDecomposition, rho: sp.Expr) -> sp.Expr:
    """
    Constant C_rho of the contribution of the critical point with last coordinate ``rho``.

    Substituting -rho for rho gives C_(-rho).
    """
    d = decomposition.dimension
    A1 = as_rational(decomposition.A.total())
    B1 = as_rational(decomposition.B.total())
    base = rho_base(decomposition, rho)

    # B_k lives in the d - 1 coordinates other than z_k, z_d last
    point = [sp.Integer(1)] * (d - 2) + [rho]
    sectional_product = sp.Integer(1)
    for sectional in decomposition.sectionals:
        sectional_product *= sectional.evaluate_symbolic(point)

    radicand = tidy(base**d / (rho * sectional_product * B1))
    prefactor = base * rho / (2 * sp.pi ** sp.Rational(d, 2) * A1 * (1 - 1 / rho) ** 2)
    return tidy(prefactor * sp.sqrt(radicand))


class NegativeDriftTheorem(BaseTheorem):
    """Leading asymptotics of negative drift models."""

    tag = "Thm3"
    description = "mostly symmetric step sets with negative drift"

    def applies_to(self, decomposition: AxisDecomposition) -> bool:
        model_class = decomposition.model_class
        return isinstance(model_class, MostlySymmetric) and model_class.drift_sign == DriftSign.NEGATIVE

    def leading_classes(self, decomposition: AxisDecomposition) -> List[ResidueClassAsymptotics]:
        d = decomposition.dimension
        A1 = as_rational(decomposition.A.total())
        B1 = as_rational(decomposition.B.total())
        rho = sp.sqrt(A1 / B1)
        order = sp.Rational(d, 2) + 1
        base = rho_base(decomposition, rho)
        c_rho = rho_constant(decomposition, rho)

        if not decomposition.Q.is_zero():
            return [ResidueClassAsymptotics(residue=0, base=base, order=order, constant=c_rho)]

        c_mirror = rho_constant(decomposition, -rho)
        self.logger.debug(f"Q = 0: C_rho = {sp.sstr(c_rho)}, C_-rho = {sp.sstr(c_mirror)}")
        return [
            ResidueClassAsymptotics(residue=0, base=base, order=order, constant=tidy(c_rho + c_mirror)),
            ResidueClassAsymptotics(residue=1, base=base, order=order, constant=tidy(c_rho - c_mirror)),
        ]
