"""Hermitian operator arithmetic, spectral queries and rank signatures.

Operators are plain ``numpy`` arrays of shape ``(d, d)`` and complex dtype.
Functions that need a Hermitian argument call :func:`hermitize` on ingestion,
so a slightly asymmetric matrix coming from floating point arithmetic is
accepted, while a genuinely non-Hermitian one raises `NotHermitian`.
"""

from __future__ import annotations

import dataclasses
from typing import NamedTuple, Sequence

import numpy as np

from . import config
from .exceptions import (
    DimMismatch,
    EmptyBasis,
    NonTraceless,
    NotHermitian,
    ZeroOperator,
)

__all__ = [
    "RankSignature",
    "SpectralDecomposition",
    "JordanPair",
    "as_square",
    "hermitize",
    "default_rank_tol",
    "rank_signature",
    "spectral_decomposition",
    "jordan_decompose",
    "hs_inner",
    "hs_norm",
    "op_norm",
    "random_traceless_in_span",
    "hermitian_basis",
    "to_real_coords",
    "from_real_coords",
    "random_hermitian",
    "random_traceless_hermitian",
    "random_density_matrix",
    "projector",
]


class RankSignature(NamedTuple):
    """Counts of strictly positive / negative eigenvalues and derived ranks."""

    rank_plus: int
    rank_minus: int
    rank_up: int
    rank_down: int
    rank: int

    @classmethod
    def from_counts(cls, n_plus: int, n_minus: int) -> "RankSignature":
        return cls(n_plus, n_minus, max(n_plus, n_minus), min(n_plus, n_minus),
                   n_plus + n_minus)


@dataclasses.dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray   # descending
    eigenvectors: np.ndarray  # columns

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


@dataclasses.dataclass(frozen=True)
class JordanPair:
    """``T = lam * (rho_plus - rho_minus)`` with both parts density matrices."""

    lam: float
    rho_plus: np.ndarray
    rho_minus: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.lam * (self.rho_plus - self.rho_minus)


def as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def hermitize(m, tol: float | None = None) -> np.ndarray:
    """Return ``(M + M^*) / 2`` after checking ``max|M - M^*| <= tol``."""
    tol = config.resolve(tol, "hermit")
    a = as_square(m)
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > tol:
        raise NotHermitian(f"max |M - M*| = {dev:.3e} exceeds tolerance {tol:.1e}")
    return (a + a.conj().T) / 2


def op_norm(a) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def hs_norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a)))


def default_rank_tol(t: np.ndarray, eigenvalues: np.ndarray | None = None) -> float:
    """``max(rank_floor, rank_rel * d * ||T||_op)``."""
    tols = config.get_tolerances()
    d = t.shape[0]
    norm = np.max(np.abs(eigenvalues)) if eigenvalues is not None else op_norm(t)
    return max(tols.rank_floor, tols.rank_rel * d * float(norm))


def _eigvalsh(t: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(t)[::-1]


def rank_signature(t, rank_tol: float | None = None) -> RankSignature:
    """Rank signature of a Hermitian operator.

    An eigenvalue counts as positive if it exceeds ``rank_tol`` and as
    negative if it is below ``-rank_tol``. The default threshold scales with
    the operator norm, see :func:`default_rank_tol`.
    """
    h = hermitize(t)
    ev = _eigvalsh(h)
    if rank_tol is None:
        rank_tol = default_rank_tol(h, ev)
    return RankSignature.from_counts(int(np.sum(ev > rank_tol)),
                                     int(np.sum(ev < -rank_tol)))


def spectral_decomposition(t, spect_tol: float | None = None,
                           orth_tol: float | None = None) -> SpectralDecomposition:
    h = hermitize(t)
    ev, vec = np.linalg.eigh(h)
    ev, vec = ev[::-1], vec[:, ::-1]
    dec = SpectralDecomposition(ev, vec)
    spect_tol = config.resolve(spect_tol, "spect")
    orth_tol = config.resolve(orth_tol, "orth")
    scale = max(1.0, op_norm(h))
    err = np.max(np.abs(h - dec.reconstruct())) if h.size else 0.0
    gram_err = np.max(np.abs(vec.conj().T @ vec - np.eye(h.shape[0]))) if h.size else 0.0
    # eigh is backward stable, so these only fail on pathological input
    assert err <= spect_tol * scale * h.shape[0], err
    assert gram_err <= orth_tol * h.shape[0], gram_err
    return dec


def jordan_decompose(t, trace_tol: float | None = None,
                     rank_tol: float | None = None) -> JordanPair:
    """Split a traceless Hermitian ``T`` into ``lam * (rho_plus - rho_minus)``.

    ``lam`` is the sum of the positive eigenvalues and ``rho_plus``,
    ``rho_minus`` are the normalized positive and negative parts, so their
    ranks are ``rank_plus(T)`` and ``rank_minus(T)``.
    """
    h = hermitize(t)
    trace_tol = config.resolve(trace_tol, "trace")
    tr = np.trace(h).real
    if abs(tr) > trace_tol * max(1.0, hs_norm(h)):
        raise NonTraceless(f"tr T = {tr:.3e}")
    ev, vec = np.linalg.eigh(h)
    if rank_tol is None:
        rank_tol = default_rank_tol(h, ev)
    if np.all(np.abs(ev) <= rank_tol):
        raise ZeroOperator("cannot decompose the zero operator")
    pos = ev > rank_tol
    neg = ev < -rank_tol
    lam_p = float(ev[pos].sum())
    lam_m = float(-ev[neg].sum())
    # average the two halves; they agree up to the trace residual
    lam = (lam_p + lam_m) / 2
    vp, vm = vec[:, pos], vec[:, neg]
    rho_p = (vp * (ev[pos] / lam_p)) @ vp.conj().T
    rho_m = (vm * (-ev[neg] / lam_m)) @ vm.conj().T
    return JordanPair(lam, rho_p, rho_m)


def hs_inner(a, b) -> float:
    """Hilbert-Schmidt pairing ``tr[A B]`` of two Hermitian operators (real)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimMismatch(f"{a.shape} vs {b.shape}")
    # tr[A B] = sum_ij A_ij B_ji
    return float(np.real(np.sum(a * b.T)))


def random_traceless_in_span(basis: Sequence, seed: int | np.random.Generator) -> np.ndarray:
    """Unit Hilbert-Schmidt norm random element ``sum_k c_k B_k``, ``c ~ N(0, 1)``."""
    basis = np.asarray(basis, dtype=complex)
    if basis.ndim != 3 or basis.shape[0] == 0:
        raise EmptyBasis("basis is empty")
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(basis.shape[0])
    t = np.tensordot(c, basis, axes=1)
    n = hs_norm(t)
    if n == 0:
        raise EmptyBasis("basis spans only the zero operator")
    return t / n


# ---------------------------------------------------------------------------
# real coordinates on the d^2 dimensional space of Hermitian matrices
# ---------------------------------------------------------------------------

def _offdiag_indices(d: int):
    return np.triu_indices(d, k=1)


def hermitian_basis(d: int) -> np.ndarray:
    """Hilbert-Schmidt orthonormal real basis of the Hermitian d x d matrices.

    Order: the ``d`` diagonal units, then for every ``j < k`` the symmetric
    element ``(E_jk + E_kj)/sqrt 2`` followed by ``i(E_jk - E_kj)/sqrt 2``.
    """
    return np.array([from_real_coords(e, d) for e in np.eye(d * d)])


def to_real_coords(h) -> np.ndarray:
    """Coordinates ``tr[B_k H]`` of Hermitian ``H`` in :func:`hermitian_basis`.

    Works on a stack of matrices as well (leading axes are kept).
    """
    h = np.asarray(h)
    d = h.shape[-1]
    r, c = _offdiag_indices(d)
    upper = h[..., r, c]
    out = np.empty(h.shape[:-2] + (d * d,))
    out[..., :d] = np.real(np.diagonal(h, axis1=-2, axis2=-1))
    out[..., d::2] = np.sqrt(2) * upper.real
    out[..., d + 1::2] = np.sqrt(2) * upper.imag
    return out


def from_real_coords(v, d: int) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    r, c = _offdiag_indices(d)
    h = np.zeros(v.shape[:-1] + (d, d), dtype=complex)
    idx = np.arange(d)
    h[..., idx, idx] = v[..., :d]
    z = (v[..., d::2] + 1j * v[..., d + 1::2]) / np.sqrt(2)
    h[..., r, c] = z
    h[..., c, r] = z.conj()
    return h


# ---------------------------------------------------------------------------
# random sampling helpers (used by tests, the decision sampler and demos)
# ---------------------------------------------------------------------------

def random_hermitian(d: int, rng) -> np.ndarray:
    rng = np.random.default_rng(rng)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def random_traceless_hermitian(d: int, rng) -> np.ndarray:
    h = random_hermitian(d, rng)
    return h - np.trace(h).real / d * np.eye(d)


def random_density_matrix(d: int, rng, rank: int | None = None) -> np.ndarray:
    """Random state of the given rank (full rank by default), Hilbert-Schmidt measure."""
    rng = np.random.default_rng(rng)
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())
