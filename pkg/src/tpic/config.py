"""Global tolerance family.

All numerical thresholds used by the library default to the values held in
a single `Tolerances` instance. Every public function taking a tolerance
also accepts an explicit override; passing ``None`` means "use the global".
"""

from __future__ import annotations

import contextlib
import dataclasses
from typing import Iterator


@dataclasses.dataclass(frozen=True)
class Tolerances:
    hermit: float = 1e-10
    trace: float = 1e-10
    spect: float = 1e-10
    orth: float = 1e-10
    psd: float = 1e-10
    completeness: float = 1e-10
    prob: float = 1e-10
    subspace: float = 1e-9
    # relative singular-value cutoff for null spaces
    null_rel: float = 1e-10
    # absolute floor and relative factor for the rank threshold
    rank_floor: float = 1e-12
    rank_rel: float = 1e-9
    zero: float = 1e-9


_current = Tolerances()


def get_tolerances() -> Tolerances:
    return _current


def set_tolerances(**overrides: float) -> Tolerances:
    """Replace fields of the global tolerance family; returns the previous one."""
    global _current
    previous = _current
    _current = dataclasses.replace(_current, **overrides)
    return previous


def set_uniform_tolerance(tol: float) -> Tolerances:
    """Set the 1e-10 family (hermit, trace, spect, orth, psd, ...) to ``tol``."""
    return set_tolerances(
        hermit=tol, trace=tol, spect=tol, orth=tol, psd=tol,
        completeness=tol, prob=tol,
    )


@contextlib.contextmanager
def tolerances(**overrides: float) -> Iterator[Tolerances]:
    global _current
    previous = set_tolerances(**overrides)
    try:
        yield _current
    finally:
        _current = previous


def resolve(value: float | None, field: str) -> float:
    return getattr(_current, field) if value is None else float(value)
