"""
Sparse multivariate Laurent polynomials with exact rational coefficients.

A polynomial is a map from integer exponent vectors to ``Fraction``
coefficients. Zero coefficients are never stored. Besides ring arithmetic the
class offers the handful of operations the walk pipeline needs: sections in a
single variable, reciprocal substitution, partial derivatives, truncation and
exact, Gaussian-rational, floating and symbolic evaluation.
"""

import numbers
from fractions import Fraction
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp
from sympy.polys.domains import QQ, QQ_I

Exponent = Tuple[int, ...]
Rational = Union[int, Fraction]

DEFAULT_VARIABLE_NAMES = ("x", "y", "z", "u", "v", "w")


def to_fraction(value: Any) -> Fraction:
    """Convert ints, Fractions, decimal strings and sympy rationals to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, sp.Rational):
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"Cannot convert {value!r} to an exact rational")


def gaussian(real: Rational, imag: Rational = 0) -> Any:
    """Build an element of the Gaussian rationals QQ(i)."""
    re, im = to_fraction(real), to_fraction(imag)
    return QQ_I(QQ(re.numerator, re.denominator), QQ(im.numerator, im.denominator))


def gaussian_parts(value: Any) -> Tuple[Fraction, Fraction]:
    """Split a Gaussian rational into exact real and imaginary parts."""
    return (
        Fraction(int(value.x.numerator), int(value.x.denominator)),
        Fraction(int(value.y.numerator), int(value.y.denominator)),
    )


def gaussian_abs2(value: Any) -> Fraction:
    """Squared modulus of a Gaussian rational as an exact rational."""
    re, im = gaussian_parts(value)
    return re * re + im * im


def gaussian_to_complex(value: Any) -> complex:
    re, im = gaussian_parts(value)
    return complex(float(re), float(im))


def gaussian_to_text(value: Any) -> str:
    """Render a Gaussian rational as ``a``, ``b*I`` or ``a + b*I``."""
    re, im = gaussian_parts(value)
    if im == 0:
        return str(re)
    imag = "I" if im == 1 else "-I" if im == -1 else f"{im}*I"
    if re == 0:
        return imag
    sign = "-" if im < 0 else "+"
    magnitude = "I" if abs(im) == 1 else f"{abs(im)}*I"
    return f"{re} {sign} {magnitude}"


class LaurentPoly:
    """
    Immutable sparse Laurent polynomial in a fixed number of variables.

    Instances compare equal when they have the same number of variables and
    the same non-zero terms, and can be used as dictionary keys.
    """

    __slots__ = ("_nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Optional[Mapping[Exponent, Rational]] = None):
        if nvars < 0:
            raise ValueError(f"Variable count must be non-negative, got {nvars}")
        cleaned: Dict[Exponent, Fraction] = {}
        for exponent, coefficient in (terms or {}).items():
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != nvars:
                raise ValueError(f"Exponent {exponent} does not have {nvars} entries")
            value = cleaned.get(exponent, Fraction(0)) + to_fraction(coefficient)
            if value:
                cleaned[exponent] = value
            else:
                cleaned.pop(exponent, None)
        self._nvars = nvars
        self._terms = cleaned
        self._hash: Optional[int] = None

    # Constructors

    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value: Rational) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def monomial(cls, nvars: int, exponent: Sequence[int], coefficient: Rational = 1) -> "LaurentPoly":
        return cls(nvars, {tuple(exponent): coefficient})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "LaurentPoly":
        """The polynomial z_index (0-based)."""
        exponent = [0] * nvars
        exponent[index] = 1
        return cls(nvars, {tuple(exponent): 1})

    @classmethod
    def _from_clean(cls, nvars: int, terms: Dict[Exponent, Fraction]) -> "LaurentPoly":
        poly = cls.__new__(cls)
        poly._nvars = nvars
        poly._terms = terms
        poly._hash = None
        return poly

    # Basic protocol

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        """A copy of the exponent to coefficient map."""
        return dict(self._terms)

    def items(self) -> List[Tuple[Exponent, Fraction]]:
        """Terms sorted by exponent vector."""
        return sorted(self._terms.items())

    def coefficient(self, exponent: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_polynomial(self) -> bool:
        """True when no exponent is negative."""
        return all(e >= 0 for exponent in self._terms for e in exponent)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Exponent]:
        return iter(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentPoly):
            return self._nvars == other._nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.constant(self._nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({self._nvars}, {self.to_text()!r})"

    # Arithmetic

    def _coerce(self, other: Any) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other._nvars != self._nvars:
                raise ValueError(f"Variable counts differ: {self._nvars} vs {other._nvars}")
            return other
        return LaurentPoly.constant(self._nvars, to_fraction(other))

    def __add__(self, other: Any) -> "LaurentPoly":
        other = self._coerce(other)
        terms = dict(self._terms)
        for exponent, coefficient in other._terms.items():
            value = terms.get(exponent, Fraction(0)) + coefficient
            if value:
                terms[exponent] = value
            else:
                terms.pop(exponent, None)
        return LaurentPoly._from_clean(self._nvars, terms)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._from_clean(self._nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Any) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            scalar = to_fraction(other)
            if not scalar:
                return LaurentPoly.zero(self._nvars)
            return LaurentPoly._from_clean(self._nvars, {e: c * scalar for e, c in self._terms.items()})
        other = self._coerce(other)
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exponent = tuple(a + b for a, b in zip(e1, e2))
                terms[exponent] = terms.get(exponent, Fraction(0)) + c1 * c2
        return LaurentPoly._from_clean(self._nvars, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "LaurentPoly":
        if power < 0:
            if len(self._terms) != 1:
                raise ValueError("Only monomials can be raised to negative powers")
            ((exponent, coefficient),) = self._terms.items()
            return LaurentPoly.monomial(self._nvars, [e * power for e in exponent], coefficient**power)
        result = LaurentPoly.constant(self._nvars, 1)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def mul_truncated(self, other: "LaurentPoly", caps: Sequence[int]) -> "LaurentPoly":
        """Product keeping only terms whose exponents stay at or below ``caps``."""
        other = self._coerce(other)
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exponent = tuple(a + b for a, b in zip(e1, e2))
                if any(e > cap for e, cap in zip(exponent, caps)):
                    continue
                terms[exponent] = terms.get(exponent, Fraction(0)) + c1 * c2
        return LaurentPoly._from_clean(self._nvars, {e: c for e, c in terms.items() if c})

    # Structural operations

    def derivative(self, index: int) -> "LaurentPoly":
        """Partial derivative with respect to z_index."""
        terms: Dict[Exponent, Fraction] = {}
        for exponent, coefficient in self._terms.items():
            power = exponent[index]
            if power:
                shifted = list(exponent)
                shifted[index] -= 1
                terms[tuple(shifted)] = coefficient * power
        return LaurentPoly._from_clean(self._nvars, terms)

    def reciprocal(self, index: int) -> "LaurentPoly":
        """Substitute z_index -> 1/z_index."""
        terms = {}
        for exponent, coefficient in self._terms.items():
            flipped = list(exponent)
            flipped[index] = -flipped[index]
            terms[tuple(flipped)] = coefficient
        return LaurentPoly._from_clean(self._nvars, terms)

    def section(self, index: int, power: int) -> "LaurentPoly":
        """Coefficient of z_index**power, a polynomial in the remaining variables."""
        terms = {}
        for exponent, coefficient in self._terms.items():
            if exponent[index] == power:
                terms[exponent[:index] + exponent[index + 1 :]] = coefficient
        return LaurentPoly._from_clean(self._nvars - 1, terms)

    def embed(self, nvars: int, positions: Sequence[int]) -> "LaurentPoly":
        """Map variable i to position ``positions[i]`` of a polynomial in ``nvars`` variables."""
        if len(positions) != self._nvars:
            raise ValueError("Need one target position per variable")
        terms = {}
        for exponent, coefficient in self._terms.items():
            target = [0] * nvars
            for power, position in zip(exponent, positions):
                target[position] += power
            terms[tuple(target)] = coefficient
        return LaurentPoly(nvars, terms)

    def permute(self, permutation: Sequence[int]) -> "LaurentPoly":
        """New variable i is old variable ``permutation[i]``."""
        terms = {tuple(exponent[p] for p in permutation): c for exponent, c in self._terms.items()}
        return LaurentPoly._from_clean(self._nvars, terms)

    def truncate(self, caps: Sequence[int]) -> "LaurentPoly":
        """Drop every term with some exponent above its cap."""
        terms = {e: c for e, c in self._terms.items() if all(p <= cap for p, cap in zip(e, caps))}
        return LaurentPoly._from_clean(self._nvars, terms)

    def split_by(self, index: int) -> Dict[int, "LaurentPoly"]:
        """Group terms by the exponent of z_index, keeping all variables."""
        groups: Dict[int, Dict[Exponent, Fraction]] = {}
        for exponent, coefficient in self._terms.items():
            groups.setdefault(exponent[index], {})[exponent] = coefficient
        return {power: LaurentPoly._from_clean(self._nvars, terms) for power, terms in groups.items()}

    def drop_variable(self, index: int) -> "LaurentPoly":
        """Remove a variable that does not occur with a non-zero exponent."""
        if any(exponent[index] for exponent in self._terms):
            raise ValueError(f"Variable {index} occurs in the polynomial")
        return self.section(index, 0)

    def max_degrees(self) -> Tuple[int, ...]:
        if not self._terms:
            return (0,) * self._nvars
        return tuple(max(exponent[i] for exponent in self._terms) for i in range(self._nvars))

    def min_degrees(self) -> Tuple[int, ...]:
        if not self._terms:
            return (0,) * self._nvars
        return tuple(min(exponent[i] for exponent in self._terms) for i in range(self._nvars))

    # Evaluation

    def total(self) -> Fraction:
        """Value at the all-ones point (sum of coefficients)."""
        return sum(self._terms.values(), Fraction(0))

    def evaluate(self, point: Sequence[Rational]) -> Fraction:
        """Exact evaluation at a point with non-zero rational coordinates."""
        values = [to_fraction(p) for p in point]
        self._check_point(values)
        total = Fraction(0)
        for exponent, coefficient in self._terms.items():
            term = coefficient
            for value, power in zip(values, exponent):
                if power:
                    term *= value**power
            total += term
        return total

    def evaluate_gaussian(self, point: Sequence[Any]) -> Any:
        """Exact evaluation at a point whose coordinates are Gaussian rationals."""
        self._check_point(point)
        total = QQ_I.zero
        for exponent, coefficient in self._terms.items():
            term = gaussian(coefficient)
            for value, power in zip(point, exponent):
                if power:
                    term = term * value**power
            total = total + term
        return total

    def evaluate_numeric(self, point: Sequence[Any]) -> Any:
        """
        Floating evaluation at complex points.

        Coordinates may be scalars or broadcast-compatible numpy arrays; the
        result is a complex scalar or array.
        """
        self._check_point(point)
        values = [np.asarray(p, dtype=complex) for p in point]
        total: Any = np.zeros(np.broadcast_shapes(*(v.shape for v in values)), dtype=complex) if values else 0j
        for exponent, coefficient in self._terms.items():
            term: Any = float(coefficient)
            for value, power in zip(values, exponent):
                if power:
                    term = term * value**power
            total = total + term
        return total

    def evaluate_symbolic(self, point: Sequence[Any]) -> sp.Expr:
        """Symbolic evaluation; coordinates may be any sympy expressions."""
        self._check_point(point)
        values = [sp.sympify(p) for p in point]
        total = sp.Integer(0)
        for exponent, coefficient in self._terms.items():
            term: sp.Expr = sp.Rational(coefficient.numerator, coefficient.denominator)
            for value, power in zip(values, exponent):
                if power:
                    term = term * value**power
            total = total + term
        return sp.radsimp(total)

    def to_sympy(self, symbols: Optional[Sequence[sp.Symbol]] = None) -> sp.Expr:
        symbols = list(symbols) if symbols is not None else list(sp.symbols(self.variable_names()))
        total = sp.Integer(0)
        for exponent, coefficient in self._terms.items():
            term: sp.Expr = sp.Rational(coefficient.numerator, coefficient.denominator)
            for symbol, power in zip(symbols, exponent):
                term = term * symbol**power
            total = total + term
        return total

    def _check_point(self, point: Sequence[Any]) -> None:
        if len(point) != self._nvars:
            raise ValueError(f"Expected a point with {self._nvars} coordinates, got {len(point)}")

    # Text form

    def variable_names(self, names: Optional[Sequence[str]] = None) -> List[str]:
        if names is not None:
            return list(names)
        if self._nvars <= len(DEFAULT_VARIABLE_NAMES):
            return list(DEFAULT_VARIABLE_NAMES[: self._nvars])
        return [f"z{i + 1}" for i in range(self._nvars)]

    def to_text(self, names: Optional[Sequence[str]] = None) -> str:
        """
        Canonical text form: monomials sorted by exponent vector, exact coefficients.

        Example: ``x^2*y + -1/2*x^-1`` style terms joined by `` + ``.
        """
        if not self._terms:
            return "0"
        labels = self.variable_names(names)
        rendered = []
        for exponent, coefficient in sorted(self._terms.items(), key=lambda item: tuple(-e for e in item[0])):
            factors = []
            for label, power in zip(labels, exponent):
                if power == 1:
                    factors.append(label)
                elif power:
                    factors.append(f"{label}^{power}")
            monomial = "*".join(factors)
            if not monomial:
                rendered.append(str(coefficient))
            elif coefficient == 1:
                rendered.append(monomial)
            elif coefficient == -1:
                rendered.append(f"-{monomial}")
            else:
                rendered.append(f"{coefficient}*{monomial}")
        return " + ".join(rendered)


def product(polys: Iterable[LaurentPoly], nvars: int) -> LaurentPoly:
    """Product of an iterable of polynomials (1 for an empty iterable)."""
    result = LaurentPoly.constant(nvars, 1)
    for poly in polys:
        result = result * poly
    return result
