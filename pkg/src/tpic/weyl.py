"""Finite Weyl-Heisenberg phase space ``Z_d x Z_d``.

Conventions
-----------
* ``omega = exp(2 pi i / d)`` and the pairing is ``<xi, x> = omega**(xi * x)``.
* ``W(x, xi) e_j = omega**(xi * j) e_{j + x}`` (indices mod d), so
  ``W(x, xi) W(y, zeta) = <xi, y> W(x + y, xi + zeta)``.
* The inverse Weyl transform is ``T^(x, xi) = tr[T W(x, xi)]`` with no
  normalization factor; ``T = (1/d) sum T^(x, xi) W(x, xi)^*``.
* Covariant observables carry effects ``(1/d) W tau W^*`` ordered row-major
  in ``(x, xi)``.
* The symplectic Fourier transform of weights ``mu`` on the phase space is
  ``mu^(x, xi) = sum_{y, zeta} omega**(xi*y - zeta*x) mu(y, zeta)``, for which
  smearing a fiducial multiplies transforms pointwise.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from typing import Iterable

import numpy as np

from . import config
from .determination import TaskPremise, Verdict, decide
from .exceptions import (
    AmbiguousZero,
    BadAlpha,
    BadZeroSet,
    DimMismatch,
    InvalidNoise,
    NotAState,
    NotOddPrime,
    NotSelfSymmetric,
)
from .linalg import RankSignature, hermitize, hs_norm, rank_signature
from .observables import Observable, OperatorSubspace, Provenance

__all__ = [
    "SYNTHESIS_ALPHA",
    "PhasePoint",
    "ZeroSet",
    "FiducialState",
    "NoiseMeasure",
    "pairing",
    "weyl_operator",
    "weyl_operators",
    "weyl_prime_operator",
    "inverse_weyl",
    "from_inverse_weyl",
    "zero_set",
    "coherent_fiducial",
    "fiducial_with_zero_set",
    "noise_with_zero_set",
    "covariant_observable",
    "annihilator_from_zero_set",
    "single_point_analysis",
    "two_point_prime_analysis",
    "symplectic_fourier",
    "smear",
    "noise_zero_set",
    "is_odd_prime",
    "SinglePointReport",
    "TwoPointReport",
]


@dataclasses.dataclass(frozen=True, order=True)
class PhasePoint:
    x: int
    xi: int

    def reduced(self, d: int) -> "PhasePoint":
        return PhasePoint(self.x % d, self.xi % d)

    def neg(self, d: int) -> "PhasePoint":
        return PhasePoint((-self.x) % d, (-self.xi) % d)

    def __iter__(self):
        yield self.x
        yield self.xi


def _point(p, d: int) -> PhasePoint:
    if isinstance(p, PhasePoint):
        return p.reduced(d)
    x, xi = p
    return PhasePoint(int(x) % d, int(xi) % d)


@dataclasses.dataclass(frozen=True)
class ZeroSet:
    """Symmetric subset of ``Z_d x Z_d`` not containing the origin."""

    dim: int
    points: frozenset

    def __init__(self, dim: int, points: Iterable = ()):
        pts = frozenset(_point(p, dim) for p in points)
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "points", pts)
        if PhasePoint(0, 0) in pts:
            raise BadZeroSet("a zero set never contains the origin")
        missing = [p for p in pts if p.neg(dim) not in pts]
        if missing:
            raise BadZeroSet(f"not symmetric: partner of {tuple(missing[0])} missing")

    @classmethod
    def symmetrized(cls, dim: int, points: Iterable) -> "ZeroSet":
        pts = {_point(p, dim) for p in points}
        pts |= {p.neg(dim) for p in pts}
        return cls(dim, pts)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p) -> bool:
        return _point(p, self.dim) in self.points

    def sorted(self) -> list[tuple[int, int]]:
        return sorted((p.x, p.xi) for p in self.points)

    def orbits(self) -> list[tuple[PhasePoint, ...]]:
        """Points grouped as ``{p, -p}``; self-symmetric points form singletons."""
        out, seen = [], set()
        for p in sorted(self.points):
            if p in seen:
                continue
            q = p.neg(self.dim)
            seen |= {p, q}
            out.append((p,) if p == q else (p, q))
        return out

    def union(self, other: "ZeroSet") -> "ZeroSet":
        if other.dim != self.dim:
            raise DimMismatch("zero sets of different dimension")
        return ZeroSet(self.dim, self.points | other.points)


@dataclasses.dataclass(frozen=True, eq=False)
class FiducialState:
    tau: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        tau = hermitize(self.tau)
        tol = config.get_tolerances()
        if abs(np.trace(tau).real - 1) > tol.trace * 10:
            raise NotAState("fiducial state must have unit trace")
        if np.linalg.eigvalsh(tau)[0] < -tol.psd:
            raise NotAState("fiducial state must be positive semidefinite")
        object.__setattr__(self, "tau", tau)

    @property
    def dim(self) -> int:
        return self.tau.shape[0]


@dataclasses.dataclass(frozen=True, eq=False)
class NoiseMeasure:
    """Probability weights on the phase space, ``weights[x, xi]``."""

    dim: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        d = int(self.dim)
        if w.shape != (d, d):
            raise InvalidNoise(f"weights must be {d}x{d}")
        if np.any(w < -1e-15) or abs(w.sum() - 1) > 1e-10:
            raise InvalidNoise("noise weights must be a probability distribution")
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "weights", np.clip(w, 0, None))

    @classmethod
    def point_mass(cls, d: int, point=(0, 0)) -> "NoiseMeasure":
        w = np.zeros((d, d))
        p = _point(point, d)
        w[p.x, p.xi] = 1
        return cls(d, w)

    @classmethod
    def uniform(cls, d: int) -> "NoiseMeasure":
        return cls(d, np.full((d, d), 1 / d**2))


def _omega(d: int) -> complex:
    return np.exp(2j * np.pi / d)


def pairing(d: int, xi: int, x: int) -> complex:
    """``<xi, x> = omega**(xi x)``, exponent reduced mod d."""
    return _omega(d) ** ((xi * x) % d)


def weyl_operator(d: int, point) -> np.ndarray:
    x, xi = _point(point, d)
    j = np.arange(d)
    w = np.zeros((d, d), dtype=complex)
    w[(j + x) % d, j] = _omega(d) ** ((xi * j) % d)
    return w


def weyl_operators(d: int) -> np.ndarray:
    """All Weyl operators, shape ``(d, d, d, d)`` indexed ``[x, xi]``."""
    return np.array([[weyl_operator(d, (x, xi)) for xi in range(d)] for x in range(d)])


def weyl_prime_operator(d: int, point) -> np.ndarray:
    """``W'(y, zeta) = omega**(2^{-1} zeta y) W(y, zeta)`` for odd ``d``."""
    if d % 2 == 0:
        raise ValueError("2 is not invertible modulo an even dimension")
    y, zeta = _point(point, d)
    half = pow(2, -1, d)
    return _omega(d) ** ((half * zeta * y) % d) * weyl_operator(d, (y, zeta))


def inverse_weyl(t) -> np.ndarray:
    """Table ``T^[x, xi] = tr[T W(x, xi)]``."""
    t = np.asarray(t, dtype=complex)
    d = t.shape[0]
    j = np.arange(d)
    # tr[T W(x, xi)] = sum_j T[j, j + x] omega**(xi j)
    shifted = np.array([t[j, (j + x) % d] for x in range(d)])
    fourier = _omega(d) ** (np.outer(j, j) % d)
    return shifted @ fourier.T


def from_inverse_weyl(table) -> np.ndarray:
    """Inverse of :func:`inverse_weyl`: ``T = (1/d) sum T^(x, xi) W(x, xi)^*``."""
    table = np.asarray(table, dtype=complex)
    d = table.shape[0]
    out = np.zeros((d, d), dtype=complex)
    for x, xi in itertools.product(range(d), repeat=2):
        out += table[x, xi] * weyl_operator(d, (x, xi)).conj().T
    return out / d


def _tau_of(tau) -> np.ndarray:
    return tau.tau if isinstance(tau, FiducialState) else np.asarray(tau, dtype=complex)


def zero_set(tau, zero_tol: float | None = None) -> ZeroSet:
    """Points where ``|tau^| <= zero_tol``.

    Raises `AmbiguousZero` if some value lies in the guard band
    ``(zero_tol, 10 zero_tol)``, where the answer depends on the tolerance.
    """
    zero_tol = config.resolve(zero_tol, "zero")
    t = _tau_of(tau)
    mags = np.abs(inverse_weyl(t))
    band = (mags > zero_tol) & (mags < 10 * zero_tol)
    if np.any(band):
        x, xi = np.argwhere(band)[0]
        raise AmbiguousZero(f"|T^({x},{xi})| = {mags[x, xi]:.3e} is inside the guard band")
    pts = [tuple(p) for p in np.argwhere(mags <= zero_tol)]
    return ZeroSet(t.shape[0], pts)


# Default for synthesis. A real alpha gives zeros at x = d/2 for even d, since
# there the transform carries the factor conj(alpha)**(d/2) + (-1)**xi alpha**(d/2).
SYNTHESIS_ALPHA = 0.6 * np.exp(1j)


def coherent_fiducial(d: int, alpha: complex = 0.5) -> FiducialState:
    """Pure state ``psi ~ sum_j alpha**j e_j``, ``0 < |alpha| < 1``.

    Its transform has no zeros for odd ``d``. For even ``d`` and real (or
    purely imaginary) ``alpha`` it vanishes at ``(d/2, xi)`` for every odd
    (even) ``xi``; a generic complex phase, as in `SYNTHESIS_ALPHA`, avoids that.
    """
    if not 0 < abs(alpha) < 1:
        raise BadAlpha("need 0 < |alpha| < 1")
    psi = np.asarray(alpha, dtype=complex) ** np.arange(d)
    psi /= np.linalg.norm(psi)
    return FiducialState(np.outer(psi, psi.conj()), f"coherent(alpha={alpha})")


def symplectic_fourier(weights) -> np.ndarray:
    """``mu^(x, xi) = sum_{y, zeta} omega**(xi y - zeta x) mu(y, zeta)``."""
    w = np.asarray(weights.weights if isinstance(weights, NoiseMeasure) else weights)
    d = w.shape[0]
    f = _omega(d) ** (np.outer(np.arange(d), np.arange(d)) % d)
    # mu^[x, xi] = sum_{y, zeta} f[xi, y] conj(f[zeta, x]) w[y, zeta]
    return np.einsum("ay,zx,yz->xa", f, f.conj(), w)


def noise_zero_set(mu: NoiseMeasure, zero_tol: float | None = None) -> ZeroSet:
    """Points where the symplectic Fourier transform of the noise vanishes."""
    zero_tol = config.resolve(zero_tol, "zero")
    mags = np.abs(symplectic_fourier(mu))
    band = (mags > zero_tol) & (mags < 10 * zero_tol)
    if np.any(band):
        x, xi = np.argwhere(band)[0]
        raise AmbiguousZero(f"|mu^({x},{xi})| = {mags[x, xi]:.3e} is inside the guard band")
    return ZeroSet(mu.dim, [tuple(p) for p in np.argwhere(mags <= zero_tol)])


def noise_with_zero_set(d: int, x: ZeroSet) -> NoiseMeasure:
    """Noise weights whose symplectic Fourier transform vanishes exactly on ``x``.

    Sums the cosine bumps ``(1/d)(1 + cos(2 pi (zeta a - alpha y)/d))`` over
    the points ``(a, alpha)`` outside ``x`` and normalizes; the transform is
    positive off ``x`` and zero on it.
    """
    if x.dim != d:
        raise DimMismatch("zero set dimension differs from d")
    y, zeta = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    f = np.zeros((d, d))
    comp = [(a, al) for a in range(d) for al in range(d) if (a, al) not in x]
    for a, al in comp:
        f += (1 + np.cos(2 * np.pi * (zeta * a - al * y) / d)) / d
    return NoiseMeasure(d, f / (d * (len(comp) + 1)))


def smear(tau0, mu: NoiseMeasure) -> FiducialState:
    """``tau = sum mu(x, xi) W tau0 W^*``, so ``tau^ = mu^ * tau0^`` pointwise."""
    t0 = _tau_of(tau0)
    d = t0.shape[0]
    if mu.dim != d:
        raise DimMismatch(f"noise on Z_{mu.dim}, state on C^{d}")
    out = np.zeros((d, d), dtype=complex)
    for x, xi in zip(*np.nonzero(mu.weights)):
        w = weyl_operator(d, (x, xi))
        out += mu.weights[x, xi] * (w @ t0 @ w.conj().T)
    prov = getattr(tau0, "provenance", "")
    return FiducialState(out, f"smear({prov})" if prov else "smeared")


def fiducial_with_zero_set(d: int, x: ZeroSet,
                           alpha: complex = SYNTHESIS_ALPHA) -> FiducialState:
    """State whose inverse Weyl transform vanishes exactly on ``x``.

    The coherent fiducial for ``alpha`` must have no zeros (the default
    does not); smearing it with the noise of :func:`noise_with_zero_set`
    multiplies its transform by one vanishing exactly on ``x``.
    """
    if not isinstance(x, ZeroSet):
        x = ZeroSet(d, x)
    if x.dim != d:
        raise DimMismatch("zero set dimension differs from d")
    tau0 = coherent_fiducial(d, alpha)
    if len(x) == 0:
        return tau0
    tau = smear(tau0, noise_with_zero_set(d, x))
    # entries of the transform on x are exact cancellations at the 1e-17 level;
    # strip them so the state is reproducible across platforms
    table = inverse_weyl(tau.tau)
    for p in x.points:
        table[p.x, p.xi] = 0
    return FiducialState(from_inverse_weyl(table), f"zero_set={x.sorted()}")


def covariant_observable(tau) -> Observable:
    """``d^2``-outcome observable with effects ``(1/d) W(x, xi) tau W(x, xi)^*``."""
    t = _tau_of(tau)
    d = t.shape[0]
    effects, labels = [], []
    for x, xi in itertools.product(range(d), repeat=2):
        w = weyl_operator(d, (x, xi))
        effects.append(w @ t @ w.conj().T / d)
        labels.append(f"{x},{xi}")
    return Observable(d, np.array(effects), tuple(labels))


def _self_symmetric_generator(d: int, p: PhasePoint) -> np.ndarray:
    # sigma**2 = <xi, x> = +-1; sigma = 1 or i
    c = pairing(d, p.xi, p.x)
    sigma = 1.0 if abs(c - 1) < 1e-9 else 1j
    return hermitize(sigma * weyl_operator(d, p), tol=1e-9)


def is_odd_prime(n: int) -> bool:
    if n < 3 or n % 2 == 0:
        return False
    return all(n % k for k in range(3, math.isqrt(n) + 1, 2))


def annihilator_from_zero_set(d: int, z: ZeroSet) -> OperatorSubspace:
    """Real basis of ``span{W(p) : p in Z} ∩ Hermitian``, one element per point.

    A pair ``{p, -p}`` contributes ``W(p) + W(p)^*`` and ``i(W(p) - W(p)^*)``; a
    self-symmetric point contributes ``sigma W(p)`` with ``sigma**2 = <xi, x>``.
    Elements are scaled to unit Hilbert-Schmidt norm.
    """
    if not isinstance(z, ZeroSet):
        z = ZeroSet(d, z)
    if z.dim != d:
        raise DimMismatch("zero set dimension differs from d")
    basis = []
    for orbit in z.orbits():
        p = orbit[0]
        if len(orbit) == 1:
            basis.append(_self_symmetric_generator(d, p))
        else:
            w = weyl_operator(d, p)
            basis.append(w + w.conj().T)
            basis.append(1j * (w - w.conj().T))
    basis = [b / hs_norm(b) for b in basis]
    orbits = z.orbits()
    prov, meta = Provenance.GENERIC, {"dim": d, "zero_set": z.sorted()}
    if len(orbits) == 1:
        meta["point"] = tuple(orbits[0][0])
        prov = Provenance.WEYL_SINGLE if len(orbits[0]) == 1 else Provenance.WEYL_PAIR
    return OperatorSubspace(d, np.array(basis).reshape(-1, d, d), prov, meta)


def _decision_summary(subspace: OperatorSubspace, d: int, seed: int = 0):
    td = {t: decide(subspace, TaskPremise(t, d, d), trials=200, seed=seed) for t in range(1, d + 1)}
    tt = {t: decide(subspace, TaskPremise(t, t, d), trials=200, seed=seed) for t in range(1, d + 1)}
    certified = [t for t, v in td.items() if v.status == Verdict.YES]
    refuted = [t for t, v in tt.items() if v.status == Verdict.NO]
    return certified, refuted, td, tt


@dataclasses.dataclass
class SinglePointReport:
    dim: int
    point: tuple[int, int]
    generator: np.ndarray
    signature: RankSignature
    certified_t: list[int]   # t with (t, d) certified
    refuted_t: list[int]     # t with (t, t) refuted

    @property
    def summary(self) -> str:
        c = f"certified t <= {max(self.certified_t)}" if self.certified_t else "nothing certified"
        r = f"refuted t >= {min(self.refuted_t)}" if self.refuted_t else "nothing refuted"
        return f"{c}, {r}"


def single_point_analysis(d: int, point) -> SinglePointReport:
    """Structure of a one-point zero set ``{p}``.

    Only self-symmetric points (``p = -p``, so ``d`` even) can form a zero set
    alone. The annihilator is then spanned by ``T = sigma W(p)`` with ``T^2 = I``
    and ``tr T = 0``, so ``rank_+ = rank_- = d/2``.
    """
    p = _point(point, d)
    if p == PhasePoint(0, 0):
        raise BadZeroSet("the origin is never a zero")
    if p.neg(d) != p:
        raise NotSelfSymmetric(f"{tuple(p)} is not its own negative mod {d}")
    sub = annihilator_from_zero_set(d, ZeroSet(d, [p]))
    gen = sub.basis[0]
    certified, refuted, _, _ = _decision_summary(sub, d)
    return SinglePointReport(d, tuple(p), gen, rank_signature(gen), certified, refuted)


@dataclasses.dataclass
class TwoPointReport:
    dim: int
    point: tuple[int, int]
    thetas: np.ndarray
    signatures: list[RankSignature]
    min_rank_down: int
    balanced_theta: float          # theta with rank_+ = rank_- = (d - 1)/2
    balanced_element: np.ndarray
    cosine_agreement: bool         # numeric spectra match r cos(2 pi t/d + theta)
    certified_t: list[int]
    refuted_t: list[int]

    @property
    def summary(self) -> str:
        c = f"certified t <= {max(self.certified_t)}" if self.certified_t else "nothing certified"
        r = f"refuted t >= {min(self.refuted_t)}" if self.refuted_t else "nothing refuted"
        return f"min rank_down = {self.min_rank_down}; {c}, {r}"


def _pair_element(d: int, p: PhasePoint, theta: float) -> np.ndarray:
    wp = weyl_prime_operator(d, p)
    return hermitize(np.exp(1j * theta) * wp + np.exp(-1j * theta) * wp.conj().T, tol=1e-9)


def two_point_prime_analysis(d: int, point, theta_grid: int = 720) -> TwoPointReport:
    """Sweep ``T_theta = e^{i theta} W'(p) + e^{-i theta} W'(-p)`` over a theta grid.

    Every nonzero element of the annihilator of a two-point zero set
    ``{p, -p}`` is a positive multiple of some ``T_theta``; its spectrum is
    ``{2 cos(2 pi t/d + theta)}``. Each grid point's signature is computed
    from the numerical spectrum and checked against the cosine formula.
    """
    if not is_odd_prime(d):
        raise NotOddPrime(f"{d} is not an odd prime")
    p = _point(point, d)
    if p == PhasePoint(0, 0):
        raise BadZeroSet("the origin is never a zero")
    thetas = 2 * np.pi * np.arange(theta_grid) / theta_grid
    sigs, agree = [], True
    ks = np.arange(d)
    for th in thetas:
        t = _pair_element(d, p, th)
        ev = np.sort(np.linalg.eigvalsh(t))
        expected = np.sort(2 * np.cos(2 * np.pi * ks / d + th))
        agree &= bool(np.allclose(ev, expected, atol=1e-10))
        sigs.append(rank_signature(t))
    half = (d - 1) // 2
    balanced = [th for th, s in zip(thetas, sigs) if s.rank_plus == s.rank_minus == half]
    # theta = pi/2 always zeroes the t = 0 eigenvalue
    theta_b = balanced[0] if balanced else np.pi / 2
    sub = annihilator_from_zero_set(d, ZeroSet(d, [p, p.neg(d)]))
    certified, refuted, _, _ = _decision_summary(sub, d)
    return TwoPointReport(
        d, tuple(p), thetas, sigs, min(s.rank_down for s in sigs), float(theta_b),
        _pair_element(d, p, theta_b), agree, certified, refuted,
    )
