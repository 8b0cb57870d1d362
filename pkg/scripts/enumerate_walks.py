"""
Exact ground-truth oracle for weighted walk counts.

count_walks() runs a dynamic program over the box [0, n]^d: layer n + 1 is
obtained from layer n by adding one shifted copy per step. Exact mode clears
the weight denominators once and works with Python integers in numpy object
arrays; float mode runs on weights normalised by S(1) so the layers never
overflow, and rescales the totals by S(1)^n in extended precision.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from scripts.errors import InvalidModelFormat, ResourceLimit
from scripts.metrics import PipelineMetrics, record
from scripts.walk_model import WalkModel, fingerprint

logger = logging.getLogger(__name__)

DEFAULT_MAX_TABLE_CELLS = 50_000_000
DEFAULT_MAX_PATHS = 5_000_000
FLOAT_UNIT_ROUNDOFF = 2.0**-52


class ArithmeticMode(str, Enum):
    EXACT = "exact"
    FLOAT64 = "float64"

    @classmethod
    def parse(cls, value: Any) -> "ArithmeticMode":
        if isinstance(value, cls):
            return value
        if value in ("float", "float64"):
            return cls.FLOAT64
        if value == "exact":
            return cls.EXACT
        raise ValueError(f"Unknown arithmetic mode: {value!r}")


@dataclass(frozen=True)
class CountSequence:
    """
    Weighted walk counts s_0 .. s_N.

    In exact mode ``values`` holds Fractions; in float mode it holds mpmath
    numbers carrying double-precision mantissas, with a worst-case relative
    rounding bound of n * |steps| * 2^-52 at length n.
    """

    values: Tuple[Any, ...]
    model_fingerprint: str
    max_length: int
    arithmetic_mode: ArithmeticMode
    step_count: int = 0

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> Any:
        return self.values[n]

    @property
    def is_exact(self) -> bool:
        return self.arithmetic_mode == ArithmeticMode.EXACT

    def rounding_bound(self, n: int) -> float:
        """Relative rounding bound of s_n (zero in exact mode)."""
        if self.is_exact:
            return 0.0
        return n * self.step_count * FLOAT_UNIT_ROUNDOFF

    def as_mpf(self, n: int) -> Any:
        """s_n as an mpmath number at the current working precision."""
        value = self.values[n]
        if isinstance(value, Fraction):
            return mpmath.mpf(value.numerator) / value.denominator
        return mpmath.mpf(value)

    def head(self, count: int) -> List[Any]:
        return list(self.values[:count])


def _shift_slices(step: Sequence[int], extent: int) -> Tuple[Tuple[slice, ...], Tuple[slice, ...]]:
    """Destination and source slices adding ``step`` inside a box of side ``extent``."""
    destination, source = [], []
    for entry in step:
        if entry == 1:
            destination.append(slice(1, extent))
            source.append(slice(0, extent - 1))
        elif entry == -1:
            destination.append(slice(0, extent - 1))
            source.append(slice(1, extent))
        else:
            destination.append(slice(0, extent))
            source.append(slice(0, extent))
    return tuple(destination), tuple(source)


def count_walks(
    model: WalkModel,
    max_n: int,
    mode: Any = ArithmeticMode.EXACT,
    max_table_cells: int = DEFAULT_MAX_TABLE_CELLS,
    metrics: Optional[PipelineMetrics] = None,
) -> CountSequence:
    """
    Total weight of walks of each length n <= max_n staying in the orthant.

    Args:
        model: A valid walk model
        max_n: Largest walk length N
        mode: "exact" or "float64"
        max_table_cells: Cap on the DP table size (N + 1)^d
        metrics: Optional collector for the number of cells updated

    Returns:
        CountSequence with s_0 .. s_N

    Raises:
        ResourceLimit: If the table would exceed ``max_table_cells``
    """
    if max_n < 0:
        raise ValueError(f"Length bound must be non-negative, got {max_n}")
    mode = ArithmeticMode.parse(mode)
    d = model.dimension
    side = max_n + 1
    cells = side**d
    if cells > max_table_cells:
        raise ResourceLimit(f"DP table of {cells} cells for N={max_n}, d={d} exceeds the cap of {max_table_cells}")

    logger.debug(f"Counting walks to N={max_n} in {mode.value} mode ({cells} cells)")

    if mode == ArithmeticMode.EXACT:
        denominator = model.common_denominator()
        weights: List[Tuple[Tuple[int, ...], Any]] = [(v, int(w * denominator)) for v, w in model.steps]
        dtype: Any = object
        unit: Any = 1
    else:
        total_weight = model.total_weight()
        weights = [(v, float(w / total_weight)) for v, w in model.steps]
        dtype = np.float64
        unit = 1.0

    current = np.zeros((side,) * d, dtype=dtype)
    following = np.zeros((side,) * d, dtype=dtype)
    current[(0,) * d] = unit
    totals: List[Any] = [unit]

    for n in range(max_n):
        # layer n + 1 lives in [0, n + 1]^d
        extent = min(n + 2, side)
        box = (slice(0, extent),) * d
        source_layer = current[box]
        target_layer = following[box]
        target_layer[...] = 0
        for step, weight in weights:
            destination, source = _shift_slices(step, extent)
            target_layer[destination] += weight * source_layer[source]
        totals.append(target_layer.sum())
        record(metrics, "dp_cells", extent**d * len(weights))
        current, following = following, current

    if mode == ArithmeticMode.EXACT:
        values: Tuple[Any, ...] = tuple(Fraction(int(total), denominator**n) for n, total in enumerate(totals))
    else:
        with mpmath.workdps(30):
            scale = mpmath.mpf(total_weight.numerator) / total_weight.denominator
            values = tuple(+(mpmath.mpf(float(total)) * scale**n) for n, total in enumerate(totals))

    return CountSequence(
        values=values,
        model_fingerprint=fingerprint(model),
        max_length=max_n,
        arithmetic_mode=mode,
        step_count=len(model),
    )


def brute_force_counts(model: WalkModel, max_n: int, max_paths: int = DEFAULT_MAX_PATHS) -> List[Fraction]:
    """
    Weighted walk counts by depth-first enumeration of step strings.

    Prefixes leaving the orthant are pruned. Used as an oracle independent of
    the dynamic program for small lengths.

    Raises:
        ResourceLimit: If more than ``max_paths`` prefixes would be visited
    """
    d = model.dimension
    denominator = model.common_denominator()
    scaled = [(v, int(w * denominator)) for v, w in model.steps]
    totals = [0] * (max_n + 1)
    stack = [((0,) * d, 0, 1)]
    visited = 0

    while stack:
        position, length, weight = stack.pop()
        visited += 1
        if visited > max_paths:
            raise ResourceLimit(f"Brute-force enumeration to n={max_n} visits more than {max_paths} prefixes")
        totals[length] += weight
        if length == max_n:
            continue
        for step, step_weight in scaled:
            moved = tuple(p + s for p, s in zip(position, step))
            if min(moved) < 0:
                continue
            stack.append((moved, length + 1, weight * step_weight))

    return [Fraction(total, denominator**n) for n, total in enumerate(totals)]


def export_sequence(sequence: CountSequence) -> str:
    """Newline-delimited ``n<TAB>value`` lines, exact values as ``numerator/denominator``."""
    lines = []
    for n, value in enumerate(sequence.values):
        if sequence.is_exact:
            lines.append(f"{n}\t{value.numerator}/{value.denominator}")
        else:
            lines.append(f"{n}\t{mpmath.nstr(value, 17)}")
    return "\n".join(lines) + "\n"


def parse_sequence(text: str, model_fingerprint: str = "") -> CountSequence:
    """
    Parse the export format back into a CountSequence.

    The arithmetic mode is exact when every value is written as a fraction.
    Rounding bounds of parsed float sequences are not known and reported as zero.
    """
    indices: List[int] = []
    raw_values: List[str] = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise InvalidModelFormat(f"Line {line_number}: expected 'n<TAB>value', got {line!r}")
        indices.append(int(parts[0]))
        raw_values.append(parts[1].strip())

    if indices != list(range(len(indices))):
        raise InvalidModelFormat("Sequence indices must run 0, 1, 2, ... without gaps")

    exact = all("/" in raw for raw in raw_values)
    values: Tuple[Any, ...]
    if exact:
        values = tuple(Fraction(raw) for raw in raw_values)
    else:
        values = tuple(mpmath.mpf(raw) for raw in raw_values)

    return CountSequence(
        values=values,
        model_fingerprint=model_fingerprint,
        max_length=len(values) - 1,
        arithmetic_mode=ArithmeticMode.EXACT if exact else ArithmeticMode.FLOAT64,
    )
