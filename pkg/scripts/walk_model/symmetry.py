"""
Symmetry classification and the axis decomposition of a walk model.

A model is symmetric over an axis when reflecting that coordinate leaves the
weighted step multiset unchanged. Highly symmetric models are symmetric over
every axis; mostly symmetric models over all but one, which is moved to the
last position so that

    S(z) = A(z^) / z_d + Q(z^) + z_d B(z^)

with A, Q, B Laurent polynomials in the first d - 1 variables.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Tuple, Union

from scripts.errors import UnsupportedClass
from scripts.walk_model.laurent import LaurentPoly
from scripts.walk_model.model import WalkModel, char_poly, permute_axes, reflect_axis

logger = logging.getLogger(__name__)

Permutation = Tuple[int, ...]


class DriftSign(str, Enum):
    NEGATIVE = "negative"
    ZERO = "zero"
    POSITIVE = "positive"

    @classmethod
    def of(cls, drift: Fraction) -> "DriftSign":
        if drift > 0:
            return cls.POSITIVE
        if drift < 0:
            return cls.NEGATIVE
        return cls.ZERO


@dataclass(frozen=True)
class HighlySymmetric:
    """Symmetric over every axis; the drift over every axis is zero."""

    kind = "HighlySymmetric"

    def to_dict(self) -> Dict[str, Any]:
        return {"class": self.kind}


@dataclass(frozen=True)
class MostlySymmetric:
    """
    Symmetric over all axes but one.

    ``asymmetric_axis`` is 1-based and refers to the input model's axes;
    ``drift`` is B(1) - A(1) computed after moving that axis last.
    """

    asymmetric_axis: int
    drift: Fraction

    kind = "MostlySymmetric"

    @property
    def drift_sign(self) -> DriftSign:
        return DriftSign.of(self.drift)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "class": self.kind,
            "asymmetricAxis": self.asymmetric_axis,
            "driftSign": self.drift_sign.value,
            "drift": str(self.drift),
        }


@dataclass(frozen=True)
class Unsupported:
    reason: str

    kind = "Unsupported"

    def to_dict(self) -> Dict[str, Any]:
        return {"class": self.kind, "reason": self.reason}


ModelClass = Union[HighlySymmetric, MostlySymmetric, Unsupported]


def is_symmetric_over(model: WalkModel, axis: int) -> bool:
    """True when reflecting coordinate ``axis`` (0-based) fixes the weighted steps."""
    return reflect_axis(model, axis) == model


def symmetric_axes(model: WalkModel) -> List[int]:
    return [axis for axis in range(model.dimension) if is_symmetric_over(model, axis)]


def classify(model: WalkModel) -> Tuple[ModelClass, Permutation]:
    """
    Classify a model by its axial symmetries.

    Args:
        model: A valid walk model

    Returns:
        Tuple of (model class, permutation) where new axis i of the canonical
        model is old axis ``permutation[i]``; the asymmetric axis, if any, is
        moved to the last position
    """
    d = model.dimension
    symmetric = symmetric_axes(model)
    identity = tuple(range(d))

    if len(symmetric) == d:
        return HighlySymmetric(), identity

    if len(symmetric) == d - 1:
        asymmetric = min(set(identity) - set(symmetric))
        permutation = tuple(axis for axis in identity if axis != asymmetric) + (asymmetric,)
        drift = model.forward_weight(asymmetric) - model.backward_weight(asymmetric)
        model_class = MostlySymmetric(asymmetric_axis=asymmetric + 1, drift=drift)
        logger.debug(f"Asymmetric axis {asymmetric + 1}, drift {drift}")
        return model_class, permutation

    asymmetric_labels = ", ".join(str(axis + 1) for axis in identity if axis not in symmetric)
    return Unsupported(reason=f"asymmetric over axes {asymmetric_labels}"), identity


def canonicalize(model: WalkModel) -> Tuple[ModelClass, WalkModel]:
    """Classify and return the model with its asymmetric axis moved last."""
    model_class, permutation = classify(model)
    return model_class, permute_axes(model, permutation)


@dataclass(frozen=True)
class AxisDecomposition:
    """
    Sections of S(z) along the distinguished last axis of the canonical model.

    ``A``, ``Q`` and ``B`` are the z_d^-1, z_d^0 and z_d^1 sections (d - 1
    variables). ``sectionals[k]`` is B_{k+1} = [z_{k+1}] S, a polynomial in the
    d - 1 variables other than z_{k+1} (z_d included, in the last position).
    ``forward_weights`` are b_1 .. b_d.
    """

    model: WalkModel
    permutation: Permutation
    model_class: ModelClass
    A: LaurentPoly
    Q: LaurentPoly
    B: LaurentPoly
    sectionals: Tuple[LaurentPoly, ...]
    forward_weights: Tuple[Fraction, ...]

    @property
    def dimension(self) -> int:
        return self.model.dimension

    @property
    def drift(self) -> Fraction:
        return self.B.total() - self.A.total()

    def char_poly(self) -> LaurentPoly:
        return char_poly(self.model)

    def reassemble(self) -> LaurentPoly:
        """z_d^-1 A + Q + z_d B as a polynomial in d variables."""
        d = self.dimension
        positions = list(range(d - 1))
        z_d = LaurentPoly.variable(d, d - 1)
        return (
            self.A.embed(d, positions) * LaurentPoly.monomial(d, [0] * (d - 1) + [-1])
            + self.Q.embed(d, positions)
            + self.B.embed(d, positions) * z_d
        )

    def s_bar(self) -> LaurentPoly:
        """S with z_d replaced by 1/z_d."""
        return self.char_poly().reciprocal(self.dimension - 1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "permutation": list(self.permutation),
            "A": self.A.to_text(),
            "Q": self.Q.to_text(),
            "B": self.B.to_text(),
            "sectionals": [poly.to_text() for poly in self.sectionals],
            "forwardWeights": [str(b) for b in self.forward_weights],
            "drift": str(self.drift),
        }


def decompose(model: WalkModel) -> AxisDecomposition:
    """
    Split S into its sections along the asymmetric (or, if none, the last) axis.

    Args:
        model: A highly or mostly symmetric model, in any axis order

    Returns:
        The AxisDecomposition of the canonical model

    Raises:
        UnsupportedClass: If the model is neither highly nor mostly symmetric
    """
    model_class, permutation = classify(model)
    if isinstance(model_class, Unsupported):
        raise UnsupportedClass(f"Cannot decompose an unsupported model: {model_class.reason}")

    canonical = permute_axes(model, permutation)
    d = canonical.dimension
    poly = char_poly(canonical)
    last = d - 1

    A = poly.section(last, -1)
    Q = poly.section(last, 0)
    B = poly.section(last, 1)
    sectionals = tuple(poly.section(k, 1) for k in range(d - 1))
    forward_weights = tuple(canonical.forward_weight(k) for k in range(d))

    return AxisDecomposition(
        model=canonical,
        permutation=permutation,
        model_class=model_class,
        A=A,
        Q=Q,
        B=B,
        sectionals=sectionals,
        forward_weights=forward_weights,
    )
