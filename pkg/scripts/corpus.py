"""
Built-in corpus of worked example models.

Each entry pairs a model with the leading asymptotics derived for it by hand,
written as sympy expression strings, and the tolerance profile its
verification run is held to.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Tuple

import sympy as sp

from scripts.errors import UnknownExample
from scripts.walk_model import WalkModel, parse_and_validate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorpusEntry:
    """
    A named example model with its expected asymptotics.

    ``constants`` has one expression per residue class; ``kappa`` is the
    second-order coefficient of the all-ones point for zero drift models.
    ``reference`` cites the theorem and example the expected values come from.
    """

    name: str
    title: str
    model: WalkModel
    theorem: str
    base: str
    order: str
    constants: Tuple[str, ...]
    reference: str
    profile: str
    kappa: Optional[str] = None

    @property
    def dimension(self) -> int:
        return self.model.dimension

    @property
    def period(self) -> int:
        return len(self.constants)

    def expected_base(self) -> sp.Expr:
        return sp.sympify(self.base)

    def expected_order(self) -> sp.Expr:
        return sp.sympify(self.order)

    def expected_constants(self) -> List[sp.Expr]:
        return [sp.sympify(constant) for constant in self.constants]

    def expected_kappa(self) -> Optional[sp.Expr]:
        return sp.sympify(self.kappa) if self.kappa is not None else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "title": self.title,
            "dimension": self.dimension,
            "theorem": self.theorem,
            "base": self.base,
            "order": self.order,
            "constants": list(self.constants),
            "kappa": self.kappa,
            "profile": self.profile,
            "reference": self.reference,
        }


def _model(dimension: int, steps: Mapping[Tuple[int, ...], Any]) -> WalkModel:
    return parse_and_validate(
        {"dimension": dimension, "steps": [{"vector": list(vector), "weight": weight} for vector, weight in steps.items()]}
    )


CORPUS: Dict[str, CorpusEntry] = {
    entry.name: entry
    for entry in (
        CorpusEntry(
            name="cardinal-2d",
            title="Unit steps in the four cardinal directions",
            model=_model(2, {(1, 0): 1, (-1, 0): 1, (0, 1): 1, (0, -1): 1}),
            theorem="Thm1",
            base="4",
            order="1",
            constants=("4/pi",),
            kappa="0",
            reference="Theorem 1 (Highly Symmetric Asymptotics) and Example 1: s_n ~ 4/pi * 4^n / n",
            profile="strict",
        ),
        CorpusEntry(
            name="negdrift-2d",
            title="Two diagonal steps down, one step up",
            model=_model(2, {(-1, -1): 1, (1, -1): 1, (0, 1): 1}),
            theorem="Thm3",
            base="2*sqrt(2)",
            order="2",
            constants=("24*sqrt(2)/pi", "32/pi"),
            reference=(
                "Theorem 3 (Negative Drift Asymptotics) and Example 2: "
                "s_n ~ 24 sqrt(2)/pi (2 sqrt(2))^n / n^2 for even n, 32/pi (2 sqrt(2))^n / n^2 for odd n"
            ),
            profile="parity",
        ),
        CorpusEntry(
            name="posdrift-2d",
            title="Two diagonal steps up, one step down",
            model=_model(2, {(-1, 1): 1, (1, 1): 1, (0, -1): 1}),
            theorem="Thm2",
            base="3",
            order="1/2",
            constants=("sqrt(3)/(2*sqrt(pi))",),
            reference="Theorem 2 (Positive Drift Asymptotics) and Example 3: s_n ~ sqrt(3)/(2 sqrt(pi)) * 3^n / sqrt(n)",
            profile="strict",
        ),
        CorpusEntry(
            name="zerodrift-2d-weighted",
            title="Weighted zero drift model with a double-weight step up",
            model=_model(2, {(-1, -1): 1, (1, -1): 1, (0, 1): 2}),
            theorem="Thm4",
            base="4",
            order="1",
            constants=("2*sqrt(2)/pi",),
            kappa="1/sqrt(pi)",
            reference=(
                "Theorem 4 (zero drift), Examples 5 and 6: "
                "s_n = 4^n / n (2 sqrt(2)/pi + n^(-1/2) / sqrt(pi) + O(1/n))"
            ),
            profile="strict",
        ),
        CorpusEntry(
            name="zerodrift-3d-a",
            title="Three-dimensional zero drift model with eight steps",
            model=_model(
                3,
                {
                    (1, 0, -1): 1,
                    (-1, 0, -1): 1,
                    (0, 1, -1): 1,
                    (0, -1, -1): 1,
                    (1, 1, 1): 1,
                    (1, -1, 1): 1,
                    (-1, 1, 1): 1,
                    (-1, -1, 1): 1,
                },
            ),
            theorem="Thm4",
            base="8",
            order="3/2",
            constants=("8*sqrt(2)/(3*pi**(3/2))",),
            kappa="-8/(9*pi)",
            reference=(
                "Theorem 4 (zero drift) and Example 6, step set S_1: "
                "s_n = 8^n / n^(3/2) (8 sqrt(2)/(3 pi^(3/2)) - 8/(9 pi sqrt(n)) + O(1/n))"
            ),
            profile="relaxed",
        ),
        CorpusEntry(
            name="zerodrift-3d-b",
            title="Three-dimensional zero drift model with four steps",
            model=_model(3, {(1, 0, 1): 1, (-1, 0, 1): 1, (0, 1, -1): 1, (0, -1, -1): 1}),
            theorem="Thm4",
            base="4",
            order="3/2",
            constants=("4*sqrt(2)/pi**(3/2)",),
            kappa="0",
            reference=(
                "Theorem 4 (zero drift) and Example 6, step set S_2: "
                "s_n = 4^n / n^(3/2) (4 sqrt(2)/pi^(3/2) + O(1/n)), the second-order term drops out"
            ),
            profile="relaxed",
        ),
    )
}


def get_example(name: str) -> CorpusEntry:
    """
    Look up a corpus entry by name.

    Raises:
        UnknownExample: If no entry has that name
    """
    try:
        return CORPUS[name]
    except KeyError:
        raise UnknownExample(f"Unknown example '{name}'. Available examples: {', '.join(CORPUS)}") from None


def list_examples() -> List[Dict[str, Any]]:
    """Summaries of every corpus entry, in corpus order."""
    return [entry.to_dict() for entry in CORPUS.values()]
