"""Finite-outcome observables (POVMs), their operator systems and annihilators.

The real operator system of an observable is the real span of its effects.
Its annihilator is the space of Hermitian ``T`` with ``tr[T M_k] = 0`` for
every effect; it is automatically traceless because the effects sum to the
identity. Both are computed in the fixed real orthonormal basis of the
Hermitian matrices from :func:`tpic.linalg.hermitian_basis`.
"""

from __future__ import annotations

import dataclasses
from typing import Any, Sequence

import numpy as np

from . import config
from .exceptions import (
    DimMismatch,
    DependentBasis,
    InvalidObservable,
    NotAState,
    NotHermitian,
    NotTraceless,
    TooLarge,
)
from .linalg import from_real_coords, hermitize, hs_norm, op_norm, to_real_coords

__all__ = [
    "Observable",
    "OperatorSubspace",
    "ValidationReport",
    "Provenance",
    "validate",
    "statistics",
    "operator_system_dim",
    "annihilator",
    "observable_from_annihilator",
    "null_space_rows",
]


class Provenance:
    """Tags attached to subspaces built by known analytic constructions."""

    N_PRIME = "N_PRIME"
    PREMISE_CEX = "PREMISE_CEX"
    TASK_CEX = "TASK_CEX"
    RANK_DEFICIT_D4 = "RANK_DEFICIT_D4"
    WEYL_SINGLE = "WEYL_SINGLE"
    WEYL_PAIR = "WEYL_PAIR"
    PURE_VS_PURE_D4 = "PURE_VS_PURE_D4"
    GENERIC = "GENERIC"

    ALL = (N_PRIME, PREMISE_CEX, TASK_CEX, RANK_DEFICIT_D4, WEYL_SINGLE,
           WEYL_PAIR, PURE_VS_PURE_D4, GENERIC)


def null_space_rows(a: np.ndarray, rel_tol: float | None = None) -> tuple[np.ndarray, int]:
    """Orthonormal basis (as rows) of the null space of real matrix ``a`` and its rank.

    Singular values below ``rel_tol * s_max`` count as zero.
    """
    rel_tol = config.resolve(rel_tol, "null_rel")
    n_cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n_cols), 0
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rel_tol * smax)) if smax > 0 else 0
    return vt[rank:], rank


@dataclasses.dataclass(frozen=True, eq=False)
class OperatorSubspace:
    """Real subspace of traceless Hermitian d x d matrices, given by a basis.

    ``provenance`` names the analytic construction the subspace came from
    (see `Provenance`); ``meta`` carries construction parameters such as the
    dimension and phase-space point of a Weyl subspace. `decide` uses both to
    route to exact certificates.
    """

    dim_space: int
    basis: np.ndarray
    provenance: str = Provenance.GENERIC
    meta: dict[str, Any] = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        d = int(self.dim_space)
        b = np.asarray(self.basis, dtype=complex).reshape(-1, d, d)
        b = np.array([hermitize(x) for x in b]).reshape(-1, d, d)
        tol = config.get_tolerances()
        for k, x in enumerate(b):
            if abs(np.trace(x).real) > tol.trace * max(1.0, hs_norm(x)):
                raise NotTraceless(f"basis element {k} has trace {np.trace(x).real:.3e}")
        if len(b):
            coords = to_real_coords(b)
            _, rank = null_space_rows(coords)
            if rank < len(b):
                raise DependentBasis("basis elements are linearly dependent")
        object.__setattr__(self, "dim_space", d)
        object.__setattr__(self, "basis", b)
        if self.provenance not in Provenance.ALL:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return self.dimension

    def coords(self) -> np.ndarray:
        return to_real_coords(self.basis)

    def orthonormal_coords(self) -> np.ndarray:
        """Rows form an orthonormal basis of the subspace in real coordinates."""
        if self.dimension == 0:
            return np.zeros((0, self.dim_space ** 2))
        q, _ = np.linalg.qr(self.coords().T)
        return q.T

    def orthonormal_basis(self) -> np.ndarray:
        return from_real_coords(self.orthonormal_coords(), self.dim_space)

    def element(self, coefficients) -> np.ndarray:
        return np.tensordot(np.asarray(coefficients, dtype=float), self.basis, axes=1)

    def projection_residual(self, t) -> float:
        """Relative Hilbert-Schmidt distance of ``t`` from the subspace."""
        v = to_real_coords(np.asarray(t))
        n = np.linalg.norm(v)
        if n == 0:
            return 0.0
        q = self.orthonormal_coords()
        return float(np.linalg.norm(v - q.T @ (q @ v)) / n)

    def contains(self, t, tol: float | None = None) -> bool:
        return self.projection_residual(t) <= config.resolve(tol, "subspace")

    def mutual_residual(self, other: "OperatorSubspace") -> float:
        """Largest relative residual of either basis projected onto the other subspace.

        Returns ``inf`` for subspaces of different dimension.
        """
        if self.dim_space != other.dim_space or self.dimension != other.dimension:
            return float("inf")
        res = [other.projection_residual(b) for b in self.basis]
        res += [self.projection_residual(b) for b in other.basis]
        return max(res, default=0.0)

    def same_as(self, other: "OperatorSubspace", tol: float | None = None) -> bool:
        return self.mutual_residual(other) <= config.resolve(tol, "subspace")

    def with_provenance(self, provenance: str, **meta) -> "OperatorSubspace":
        return OperatorSubspace(self.dim_space, self.basis, provenance, dict(meta))


@dataclasses.dataclass(frozen=True, eq=False)
class Observable:
    """Finite-outcome observable on C^d.

    ``effects`` is an array of shape ``(n, d, d)``; the order of the effects is
    the order of the entries of every probability vector.
    """

    dim: int
    effects: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        d = int(self.dim)
        e = np.asarray(self.effects, dtype=complex)
        if e.ndim != 3 or e.shape[1:] != (d, d) or e.shape[0] == 0:
            raise InvalidObservable(f"effects must have shape (n, {d}, {d}), got {e.shape}")
        try:
            e = np.array([hermitize(x) for x in e])
        except NotHermitian as exc:
            raise InvalidObservable(str(exc)) from exc
        labels = tuple(str(x) for x in self.labels) or tuple(str(k) for k in range(len(e)))
        if len(labels) != len(e):
            raise InvalidObservable("number of labels differs from number of effects")
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "effects", e)
        object.__setattr__(self, "labels", labels)

    @property
    def n_outcomes(self) -> int:
        return len(self.effects)

    def __len__(self) -> int:
        return self.n_outcomes


@dataclasses.dataclass(frozen=True)
class ValidationReport:
    psd_violations: list[tuple[int, float]]
    completeness_error: float
    psd_tol: float
    completeness_tol: float

    @property
    def valid(self) -> bool:
        return not self.psd_violations and self.completeness_error <= self.completeness_tol

    def __bool__(self) -> bool:
        return self.valid


def validate(obs: Observable, psd_tol: float | None = None,
             completeness_tol: float | None = None) -> ValidationReport:
    """Report effects with eigenvalues below ``-psd_tol`` and ``||sum M_k - I||_op``."""
    psd_tol = config.resolve(psd_tol, "psd")
    completeness_tol = config.resolve(completeness_tol, "completeness")
    mins = np.linalg.eigvalsh(obs.effects)[:, 0]
    bad = [(k, float(m)) for k, m in enumerate(mins) if m < -psd_tol]
    err = op_norm(obs.effects.sum(axis=0) - np.eye(obs.dim))
    return ValidationReport(bad, err, psd_tol, completeness_tol)


def _check_state(rho, psd_tol: float, prob_tol: float) -> np.ndarray:
    try:
        rho = hermitize(rho)
    except NotHermitian as exc:
        raise NotAState(str(exc)) from exc
    if abs(np.trace(rho).real - 1) > prob_tol:
        raise NotAState(f"trace {np.trace(rho).real} differs from 1")
    if np.linalg.eigvalsh(rho)[0] < -psd_tol:
        raise NotAState("state is not positive semidefinite")
    return rho


def statistics(obs: Observable, rho, psd_tol: float | None = None,
               prob_tol: float | None = None) -> np.ndarray:
    """Outcome distribution ``p_k = tr[rho M_k]``."""
    psd_tol = config.resolve(psd_tol, "psd")
    prob_tol = config.resolve(prob_tol, "prob")
    rho = _check_state(rho, psd_tol, prob_tol)
    if rho.shape != (obs.dim, obs.dim):
        raise DimMismatch(f"state is {rho.shape[0]}-dimensional, observable {obs.dim}")
    p = np.real(np.einsum("ij,kji->k", rho, obs.effects))
    return p


def operator_system_dim(obs: Observable) -> int:
    """Real dimension of the span of the effects (rank of their real Gram matrix)."""
    # rank of the Gram matrix equals the rank of the coordinate matrix, which
    # is better conditioned to compute
    _, rank = null_space_rows(to_real_coords(obs.effects))
    return rank


def annihilator(obs: Observable) -> OperatorSubspace:
    """Hilbert-Schmidt orthonormal basis of ``{T Hermitian : tr[T M_k] = 0 for all k}``."""
    coords = to_real_coords(obs.effects)
    null, _ = null_space_rows(coords)
    basis = from_real_coords(null, obs.dim)
    # each null vector is orthogonal to sum_k M_k = I, so the trace is already ~0
    d = obs.dim
    basis = basis - np.einsum("k,ij->kij", np.trace(basis, axis1=1, axis2=2).real / d, np.eye(d))
    return OperatorSubspace(d, basis)


def observable_from_annihilator(x: OperatorSubspace,
                                labels: Sequence[str] | None = None) -> Observable:
    """Observable with exactly ``d^2 - dim X`` outcomes whose annihilator is ``X``.

    The operator system ``R = X^perp`` gets an orthonormal basis ``G_1 ~ I,
    G_2, ..., G_n``. Each ``A_k = G_k + ||G_k|| I`` (k >= 2) is positive and in
    ``R``; with ``c = sum ||A_k||`` the effects are ``M_k = A_k / (2c)`` and
    ``M_1 = I - sum M_k``, which satisfies ``M_1 >= I/2``.
    """
    d = x.dim_space
    if x.dimension > d * d - 1:
        raise TooLarge(f"annihilator dimension {x.dimension} exceeds d^2 - 1 = {d * d - 1}")
    ident = to_real_coords(np.eye(d)) / np.sqrt(d)
    rows = np.vstack([ident[None, :], x.coords()])
    complement, _ = null_space_rows(rows)
    g = from_real_coords(complement, d)
    a = np.array([gk + op_norm(gk) * np.eye(d) for gk in g]).reshape(-1, d, d)
    c = sum(op_norm(ak) for ak in a)
    effects = a / (2 * c) if len(a) else a
    m1 = np.eye(d) - effects.sum(axis=0)
    effects = np.concatenate([m1[None], effects])
    return Observable(d, effects, tuple(labels) if labels is not None else ())
