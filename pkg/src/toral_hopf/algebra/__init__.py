"""Series arithmetic, exact scalars and the Eulerian system model."""
from .series import DEFAULT_TRUNCATION, MultiIndex, PolySeries, series_add, series_mul
from .surd import Surd, as_exact
from .system import (
    EulerianSystem,
    ResonanceReport,
    check_nonresonance,
    compile_rhs,
    dump_system,
    evaluate_field,
    load_system,
    system_from_dict,
    system_to_dict,
)

__all__ = [
    "DEFAULT_TRUNCATION", "MultiIndex", "PolySeries", "series_add", "series_mul",
    "Surd", "as_exact", "EulerianSystem", "ResonanceReport", "check_nonresonance",
    "compile_rhs", "dump_system", "evaluate_field", "load_system", "system_from_dict",
    "system_to_dict",
]
