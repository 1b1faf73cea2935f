"""Explicit operators and observables: separating examples and minimal d = 4 observables.

Indices follow the computational basis ``e_0, ..., e_{d-1}``.
"""

from __future__ import annotations

import enum

import numpy as np

from .exceptions import BadRange
from .linalg import random_traceless_hermitian
from .observables import Observable, OperatorSubspace, Provenance, observable_from_annihilator

__all__ = [
    "SIGMA",
    "n_map",
    "n_prime",
    "n_prime_basis",
    "premise_counterexample",
    "task_counterexample",
    "rank_deficit_d4",
    "n_prime_subspace",
    "pure_vs_pure_subspace",
    "MinimalKind",
    "minimal_d4_observable",
    "recognize",
]

SIGMA = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
    [[1j, 0], [0, 1j]],
], dtype=complex)


def n_map(a) -> np.ndarray:
    """``N(a) = sum_i a_i sigma^i`` for real ``a`` in R^4; ``N(a)^* N(a) = |a|^2 I``."""
    return np.tensordot(np.asarray(a, dtype=float), SIGMA, axes=1)


def n_prime_basis() -> np.ndarray:
    """``A_0 = diag(I, -I)`` and ``A_i = [[0, sigma^i], [sigma^i*, 0]]``."""
    z = np.zeros((2, 2))
    out = [np.block([[np.eye(2), z], [z, -np.eye(2)]]).astype(complex)]
    for s in SIGMA:
        out.append(np.block([[z, s], [s.conj().T, z]]))
    return np.array(out)


def n_prime(a0: float, a) -> np.ndarray:
    """``N'(a0, a) = [[a0 I, N(a)], [N(a)^*, -a0 I]]``; determinant ``(a0^2 + |a|^2)^2``."""
    return np.tensordot(np.concatenate([[a0], np.asarray(a, dtype=float)]),
                        n_prime_basis(), axes=1)


def premise_counterexample(d: int, p1: int) -> OperatorSubspace:
    """``R T`` with ``T = (P_0 + ... + P_{p1}) / (p1 + 1) - P_{p1+1}``.

    An observable with this annihilator is (rank <= t, rank <= p1)-complete for
    every ``t <= p1`` but not (rank <= t, rank <= p1 + 1)-complete.
    """
    if not 1 <= p1 <= d - 2:
        raise BadRange(f"need 1 <= p1 <= d - 2, got p1={p1}, d={d}")
    diag = np.zeros(d)
    diag[: p1 + 1] = 1 / (p1 + 1)
    diag[p1 + 1] = -1
    return OperatorSubspace(d, np.diag(diag)[None], Provenance.PREMISE_CEX, {"p1": p1})


def task_counterexample(d: int, t1: int) -> OperatorSubspace:
    """``R T`` with ``t1 + 1`` eigenvalues ``1/(t1+1)`` and ``t1 + 1`` eigenvalues ``-1/(t1+1)``."""
    if t1 < 1 or 2 * t1 + 2 > d:
        raise BadRange(f"need t1 >= 1 and 2 t1 + 2 <= d, got t1={t1}, d={d}")
    diag = np.zeros(d)
    diag[: t1 + 1] = 1 / (t1 + 1)
    diag[t1 + 1: 2 * t1 + 2] = -1 / (t1 + 1)
    return OperatorSubspace(d, np.diag(diag)[None], Provenance.TASK_CEX, {"t1": t1})


def rank_deficit_d4() -> OperatorSubspace:
    """``R diag(1/3, 1/3, 1/3, -1)``: negative determinant, the 15-outcome (2, 2) case."""
    return OperatorSubspace(4, np.diag([1 / 3, 1 / 3, 1 / 3, -1.0])[None],
                            Provenance.RANK_DEFICIT_D4)


def n_prime_subspace() -> OperatorSubspace:
    """The five dimensional image of ``N'``; every nonzero element has signature (2, 2)."""
    return OperatorSubspace(4, n_prime_basis(), Provenance.N_PRIME)


# Fixed seed of the registered six dimensional annihilator for the pure-state case.
PURE_VS_PURE_SEED = 20140612


def pure_vs_pure_subspace() -> OperatorSubspace:
    """Registered 6-dimensional annihilator behind the 10-outcome pure-state candidate.

    This only matches the outcome count of the cited minimal pure-vs-pure
    observable; it does not realize the property. Random samples all have
    rank >= 3, but the rank-2 elements form a curve that sampling never hits,
    and ``decide`` with (1, 1) finds one by local refinement. The same happens
    for every 6-dimensional subspace containing the image of ``N'`` and for
    every covariant annihilator with a 6-point zero set, so no certified
    realization is shipped.
    """
    rng = np.random.default_rng(PURE_VS_PURE_SEED)
    basis = np.array([random_traceless_hermitian(4, rng) for _ in range(6)])
    return OperatorSubspace(4, basis, Provenance.PURE_VS_PURE_D4, {"certified": False})


class MinimalKind(str, enum.Enum):
    PURE_VS_ALL = "pure-vs-all"
    RANK2_VS_RANK2 = "rank2-vs-rank2"
    PURE_VS_PURE_UPPER = "pure-vs-pure-upper"


def minimal_d4_observable(kind: MinimalKind | str) -> Observable:
    """Minimal observables on C^4.

    ``pure-vs-all`` (11 outcomes) determines pure states among all states,
    ``rank2-vs-rank2`` (15 outcomes) determines states of rank <= 2 among
    themselves. ``pure-vs-pure-upper`` has the 10 outcomes of the minimal
    pure-vs-pure observable but is not one; see :func:`pure_vs_pure_subspace`.
    """
    kind = MinimalKind(kind)
    if kind is MinimalKind.PURE_VS_ALL:
        x = n_prime_subspace()
    elif kind is MinimalKind.RANK2_VS_RANK2:
        x = rank_deficit_d4()
    else:
        x = pure_vs_pure_subspace()
    return observable_from_annihilator(x)


def recognize(x: OperatorSubspace) -> OperatorSubspace:
    """Attach a provenance tag to an untagged subspace equal to a registered one.

    Subspaces read from files carry no tags; the annihilator of the 11-outcome
    observable, for instance, is recognized here as the image of ``N'``.
    """
    if x.provenance != Provenance.GENERIC:
        return x
    if x.dim_space == 4 and x.dimension == 5:
        ref = n_prime_subspace()
        if x.same_as(ref):
            return x.with_provenance(Provenance.N_PRIME)
    return x
