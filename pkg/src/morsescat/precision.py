"""Tolerance defaults, overridable per call."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Precision:
    # relative accuracy certified by the Kummer series
    kummer_rtol: float = 1e-10
    # working precisions (bits) tried after double precision fails
    kummer_escalation: tuple[int, ...] = (106, 212)
    # bound-state root search in b
    root_xtol: float = 1e-12
    root_grid_per_unit: int = 200
    root_edge: float = 1e-9
    # series / product truncation
    series_tail: float = 1e-12
    # low-k fit
    fit_rtol: float = 1e-6
    fit_re_rtol: float = 1e-5
    ladder_k_max: float = 1e-2
    ladder_k_min: float = 1e-4
    ladder_points: int = 9
    # pole guards
    unitarity_guard: float = 1e-12
    zero_length_guard: float = 1e-10
    resonance_threshold: float = 1e6

    def with_overrides(self, **kwargs) -> "Precision":
        clean = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **clean)


DEFAULT = Precision()
