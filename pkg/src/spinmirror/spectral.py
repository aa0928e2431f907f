"""Tridiagonal eigensystems, commensurability detection and the end-site overlap check."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np
from scipy import linalg as sla

from .chain import OneExcHamiltonian
from .errors import DegenerateInput, NumericalFailure

ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # column k belongs to eigenvalue k

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


def _reorthogonalize_clusters(w, v, spread):
    gap_tol = 1e-8 * max(spread, np.finfo(float).tiny)
    start = 0
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] - w[k - 1] >= gap_tol:
            if k - start > 1:
                q, _ = np.linalg.qr(v[:, start:k])
                v[:, start:k] = q
            start = k
    return v


def eigensystem_arrays(diag, offdiag) -> SpectralData:
    d = np.asarray(diag, dtype=float)
    e = np.asarray(offdiag, dtype=float)
    if d.size == 1:
        return SpectralData(d.copy(), np.ones((1, 1)))
    try:
        # stebz: Sturm-count bisection; stein: inverse iteration for the vectors
        w, v = sla.eigh_tridiagonal(d, e, lapack_driver="stebz")
    except (sla.LinAlgError, ValueError) as exc:
        raise NumericalFailure(f"tridiagonal eigensolver failed: {exc}") from exc
    order = np.argsort(w, kind="stable")
    w, v = w[order], v[:, order]
    spread = float(w[-1] - w[0]) if w.size else 0.0
    if np.max(np.abs(v.T @ v - np.eye(len(w)))) > ORTHO_TOL:
        v = _reorthogonalize_clusters(w, v.copy(), spread)
        if np.max(np.abs(v.T @ v - np.eye(len(w)))) > ORTHO_TOL:
            raise NumericalFailure("eigenvectors failed to orthonormalise")
    # fix the sign so the first nonzero component is positive
    for k in range(v.shape[1]):
        col = v[:, k]
        pivot = col[np.argmax(np.abs(col) > 1e-14)]
        if pivot < 0:
            v[:, k] = -col
    return SpectralData(w, v)


def eigensystem(h: OneExcHamiltonian) -> SpectralData:
    return eigensystem_arrays(h.diag, h.offdiag)


@dataclass(frozen=True)
class CommensurabilityResult:
    commensurate: bool
    base: Optional[float] = None
    integers: Optional[tuple] = None
    period: Optional[float] = None
    offset: Optional[float] = None  # lowest eigenvalue, E_k = offset + m_k * base


def convergents(x: Fraction) -> Iterator[Fraction]:
    """Continued-fraction convergents of an exact rational, in order."""
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    while True:
        a = math.floor(x)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        yield Fraction(h1, k1)
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


def _smallest_denominator(x: float, tol: float, q_max: int) -> Optional[int]:
    for c in convergents(Fraction(x)):
        if c.denominator > q_max:
            return None
        if abs(c.denominator * x - c.numerator) <= tol:
            return c.denominator
    return None


def commensurability(eigs: Sequence[float], tol: float = 1e-9, q_max: int = 10**6) -> CommensurabilityResult:
    """Test whether all eigenvalues lie on one lattice ``E_min + m * omega``.

    Each normalised gap ``(E_k - E_min) / (E_max - E_min)`` must equal a
    rational ``p/q`` with ``q <= q_max`` such that ``|q x - p| <= tol``, i.e.
    the residual is measured in units of the integer lattice. The lattice
    spacing ``omega`` is the largest one consistent with all gaps.
    """
    e = np.sort(np.asarray(eigs, dtype=float))
    if e.size < 2:
        raise DegenerateInput("need at least two eigenvalues")
    lo, hi = float(e[0]), float(e[-1])
    spread = hi - lo
    scale = max(abs(lo), abs(hi))
    if spread <= 1e-14 * max(scale, 1e-300):
        raise DegenerateInput("all eigenvalues coincide")
    x = (e - lo) / spread
    lcm = 1
    for xk in x[1:-1]:
        q = _smallest_denominator(float(xk), tol, q_max)
        if q is None:
            return CommensurabilityResult(False)
        lcm = lcm * q // math.gcd(lcm, q)
        if lcm > q_max:
            return CommensurabilityResult(False)
    scaled = x * lcm
    ints = np.rint(scaled)
    if np.max(np.abs(scaled - ints)) > tol:
        return CommensurabilityResult(False)
    ints = [int(m) for m in ints]
    g = 0
    for m in ints:
        g = math.gcd(g, m)
    ints = [m // g for m in ints]
    omega = spread / ints[-1]
    return CommensurabilityResult(True, omega, tuple(ints), 2 * math.pi / omega, lo)


@dataclass(frozen=True)
class OverlapCheck:
    ok: bool
    components: np.ndarray
    minimum: float


def endpoint_overlap_check(sd: SpectralData, tol: float = 1e-10) -> OverlapCheck:
    """Every eigenvector must have a nonzero amplitude on the first site."""
    comps = np.abs(sd.eigenvectors[0, :])
    minimum = float(comps.min())
    return OverlapCheck(bool(minimum > tol), comps, minimum)
