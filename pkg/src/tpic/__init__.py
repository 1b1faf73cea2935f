"""Rank-restricted informational completeness of finite-dimensional quantum observables.

An observable is (rank <= t, rank <= p)-informationally complete when its
statistics tell every state of rank at most ``t`` apart from every other
state of rank at most ``p``. The package decides this property from the
annihilator of the observable's effects, classifies the inequivalent
(t, p) properties, builds the explicit examples that separate them, and
covers covariant observables on the finite phase space ``Z_d x Z_d``.
"""

from . import config, constructions, determination, io, linalg, observables, weyl
from .config import Tolerances, get_tolerances, set_tolerances, tolerances
from .determination import (
    EquivalenceClass,
    OutcomeBounds,
    Status,
    TaskPremise,
    Verdict,
    canonicalize,
    count_classes,
    decide,
    implication_lattice,
    minimal_outcome_bounds,
    pure_ic_size_bound,
)
from .exceptions import *  # noqa: F401,F403
from .linalg import (
    JordanPair,
    RankSignature,
    hermitize,
    hs_inner,
    jordan_decompose,
    random_traceless_in_span,
    rank_signature,
    spectral_decomposition,
)
from .observables import (
    Observable,
    OperatorSubspace,
    Provenance,
    annihilator,
    observable_from_annihilator,
    operator_system_dim,
    statistics,
    validate,
)

__version__ = "0.1.0"
