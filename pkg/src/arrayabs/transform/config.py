"""Configuration types for the scalar translation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..lang.ast import Cond
from ..lia import Formula


class TransformError(ValueError):
    pass


@dataclass(frozen=True)
class ArrayCells:
    """How one array is abstracted.

    count symbolic cells track the array; cells listed in `frozen` are
    never updated by writes, so they keep describing the array contents
    at procedure entry. With `snapshot`, every live cell additionally
    records its entry value in a one-shot variable.
    """

    count: int
    ordered: bool = False
    frozen: tuple[int, ...] = ()
    snapshot: bool = False

    def __post_init__(self):
        if self.count < 1:
            raise TransformError("cell count must be >= 1 (drop an array by omitting it)")
        for j in self.frozen:
            if not 0 <= j < self.count:
                raise TransformError(f"frozen cell {j} out of range 0..{self.count - 1}")


@dataclass(frozen=True)
class ObsFlag:
    """One write-only boolean: at access site `site`, record whether
    `pred` holds. Predicates range over program scalars and cell
    index variables."""

    site: int
    name: str
    pred: Cond


@dataclass(frozen=True)
class ObserverSpec:
    flags: tuple[ObsFlag, ...] = ()


@dataclass(frozen=True)
class IndexConfig:
    """Cell layout per array, plus the optional focus precondition.

    Arrays absent from `arrays` are dropped: their reads become havoc,
    their writes disappear. `focus` constrains the symbolic indices
    (and parameters); `bounds_checks` mirrors out-of-range accesses of
    the source as assertion failures in the scalar program.
    """

    arrays: Mapping[str, ArrayCells] = field(default_factory=dict)
    focus: Formula | None = None
    observers: ObserverSpec | None = None
    bounds_checks: bool = False
