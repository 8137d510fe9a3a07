"""Array-to-scalar program translation."""

from .config import ArrayCells, IndexConfig, ObsFlag, ObserverSpec, TransformError
from .core import (
    AccessSite,
    Cell,
    ScalarProgram,
    cells_for,
    imp,
    index_var,
    init_var,
    transform_program,
    transform_read,
    transform_write,
    value_var,
)
from .observers import instrument_observers

__all__ = [
    "AccessSite",
    "ArrayCells",
    "Cell",
    "IndexConfig",
    "ObsFlag",
    "ObserverSpec",
    "ScalarProgram",
    "TransformError",
    "cells_for",
    "imp",
    "index_var",
    "init_var",
    "instrument_observers",
    "transform_program",
    "transform_read",
    "transform_write",
    "value_var",
]
