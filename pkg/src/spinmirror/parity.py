"""Mirror-parity folding of symmetric chains and the exact trace/determinant identities.

Pairing site ``k`` with its mirror ``n+1-k`` block-diagonalises the
one-excitation block of a symmetric chain into an even (symmetric) block of
dimension ``ceil(n/2)`` and an odd (antisymmetric) block of dimension
``floor(n/2)``. The fold introduces ``sqrt(2)`` only in off-diagonal
entries, so the exact data is carried as diagonals plus *squared*
off-diagonals, which stay rational.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .chain import ChainSpec, Normalization, OneExcHamiltonian, is_exact, number_to_json
from .errors import InternalInconsistency, NotMirrorSymmetric, UnsupportedNormalization

SQRT_HALF = 1 / math.sqrt(2)


@dataclass(frozen=True)
class FoldMatrix:
    """Orthogonal change of basis; rows ordered as in the displayed fold.

    Even rows ``(e_k + e_{n+1-k})/sqrt2`` for ``k = 1..m`` come first,
    followed by the middle site for odd ``n``, then the odd rows
    ``(e_k - e_{n+1-k})/sqrt2`` for ``k = m..1``.
    """

    n: int
    entries: np.ndarray

    @property
    def even_dim(self) -> int:
        return (self.n + 1) // 2


def fold_matrix(n: int) -> FoldMatrix:
    m = n // 2
    u = np.zeros((n, n))
    row = 0
    for k in range(m):
        u[row, k] = u[row, n - 1 - k] = SQRT_HALF
        row += 1
    if n % 2:
        u[row, m] = 1.0
        row += 1
    for k in reversed(range(m)):
        u[row, k] = SQRT_HALF
        u[row, n - 1 - k] = -SQRT_HALF
        row += 1
    return FoldMatrix(n, u)


@dataclass(frozen=True)
class TridiagBlock:
    diag: np.ndarray
    offdiag: np.ndarray
    exact_diag: Optional[tuple] = None
    exact_offsq: Optional[tuple] = None

    @property
    def dim(self) -> int:
        return len(self.diag)

    def dense(self) -> np.ndarray:
        h = np.diag(self.diag)
        idx = np.arange(self.dim - 1)
        h[idx, idx + 1] = self.offdiag
        h[idx + 1, idx] = self.offdiag
        return h


@dataclass(frozen=True)
class ParityBlocks:
    n: int
    even: TridiagBlock
    odd: TridiagBlock
    normalization: Normalization
    residual: float  # max |entry| of the off-diagonal blocks of U H U^T

    @property
    def is_exact(self) -> bool:
        return self.even.exact_diag is not None and self.odd.exact_diag is not None


def _fold_entries(d: Sequence, e: Sequence):
    """Block diagonals, unscaled off-diagonals and squared off-diagonals.

    For odd ``n`` the last even-block off-diagonal carries a sqrt(2) factor;
    it is applied to the squared entry here and to the float entry by the
    caller.
    """
    def sq(x):
        return x * x

    n = len(d)
    m = n // 2
    if n % 2 == 0:
        ev_diag = list(d[:m - 1]) + [d[m - 1] + e[m - 1]]
        od_diag = list(d[:m - 1]) + [d[m - 1] - e[m - 1]]
        ev_off = list(e[:m - 1])
        od_off = list(e[:m - 1])
        ev_offsq = [sq(x) for x in ev_off]
    else:
        ev_diag = list(d[:m + 1])
        od_diag = list(d[:m])
        ev_off = list(e[:m])
        od_off = list(e[:m - 1])
        ev_offsq = [sq(x) for x in ev_off]
        if m >= 1:
            ev_offsq[-1] = 2 * ev_offsq[-1]
    od_offsq = [sq(x) for x in od_off]
    # odd block follows the reversed row order of the fold matrix
    return ev_diag, ev_off, ev_offsq, od_diag[::-1], od_off[::-1], od_offsq[::-1]


def fold(h: OneExcHamiltonian, spec: ChainSpec) -> ParityBlocks:
    if not spec.is_symmetric:
        raise NotMirrorSymmetric("chain couplings/fields are not mirror symmetric")
    n = h.n
    d, e = list(h.diag), list(h.offdiag)
    ev_d, ev_e, ev_sq, od_d, od_e, od_sq = _fold_entries(d, e)

    ev_e_num = [float(x) for x in ev_e]
    if n % 2 == 1 and ev_e_num:
        ev_e_num[-1] *= math.sqrt(2)

    exact = is_exact(d) and is_exact(e)
    even = TridiagBlock(
        np.array([float(x) for x in ev_d]), np.array(ev_e_num),
        tuple(ev_d) if exact else None, tuple(ev_sq) if exact else None,
    )
    odd = TridiagBlock(
        np.array([float(x) for x in od_d]), np.array([float(x) for x in od_e]),
        tuple(od_d) if exact else None, tuple(od_sq) if exact else None,
    )
    u = fold_matrix(n).entries
    rotated = u @ h.dense() @ u.T
    k = even.dim
    residual = float(np.max(np.abs(rotated[:k, k:]))) if k < n else 0.0
    return ParityBlocks(n, even, odd, h.normalization, residual)


def char_poly_exact(diag: Sequence, offsq: Sequence) -> list:
    """Coefficients (ascending powers of lambda) of ``det(H - lambda I)``.

    Uses the three-term recurrence
    ``p_k = (d_k - lambda) p_{k-1} - e_{k-1}^2 p_{k-2}``.
    """
    if len(offsq) != max(len(diag) - 1, 0):
        raise ValueError("need len(offsq) == len(diag) - 1")
    prev2: list = []
    prev = [Fraction(1)]
    for k, dk in enumerate(diag):
        cur = [Fraction(0)] * (len(prev) + 1)
        for i, c in enumerate(prev):
            cur[i] += dk * c
            cur[i + 1] -= c
        if k >= 1:
            for i, c in enumerate(prev2):
                cur[i] -= offsq[k - 1] * c
        prev2, prev = prev, cur
    return prev


def poly_eval(coeffs: Sequence, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def middle_coupling_index(n: int) -> int:
    """1-based index of the bond straddling the mirror axis (n/2 or (n-1)/2)."""
    return n // 2


def branch_prediction(n: int, j_mid) -> Fraction:
    """Expected Det'(H_e)/Det(H_o) for the Laplacian-normalised chain."""
    if n % 2 == 1:
        return Fraction(n)
    if n % 4 == 2:
        k = (n - 2) // 4
        return Fraction(2 * k + 1) / j_mid
    k = n // 4
    return Fraction(2 * k) / j_mid


def _power_of_two_exponent(x: Fraction) -> Optional[int]:
    if x <= 0:
        return None
    num, den = x.numerator, x.denominator
    if num & (num - 1) == 0:
        return num.bit_length() - 1
    if den & (den - 1) == 0 and num == 1:
        return -(den.bit_length() - 1)
    return None


@dataclass(frozen=True)
class IdentityReport:
    n: int
    trace_even: Fraction
    trace_odd: Fraction
    trace_diff: Fraction
    middle_coupling: Fraction
    pseudo_det_even: Fraction
    det_odd: Fraction
    ratio: Fraction
    branch_prediction: Fraction
    # k such that Det(H_o) = prod_{i<=n//2} J_i / 2**k, None if not a power of two
    det_odd_exponent: Optional[int] = None
    # k such that Det'(H_e) = c * prod J_i / 2**k, with c = n and the product
    # over i <= n//2 for odd n, c = n/2 and the product over i < n/2 for even n
    pseudo_det_exponent: Optional[int] = None

    @property
    def trace_ok(self) -> bool:
        return abs(self.trace_diff) == self.middle_coupling

    @property
    def ratio_ok(self) -> bool:
        return self.ratio == self.branch_prediction

    @property
    def trace_sign(self) -> int:
        return (self.trace_diff > 0) - (self.trace_diff < 0)

    def to_dict(self) -> dict:
        out = {}
        for name in self.__dataclass_fields__:
            v = getattr(self, name)
            out[name] = number_to_json(v) if isinstance(v, Fraction) else v
        out["trace_ok"] = self.trace_ok
        out["ratio_ok"] = self.ratio_ok
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def identities(blocks: ParityBlocks, spec: ChainSpec) -> IdentityReport:
    if blocks.normalization is not Normalization.LAPLACIAN:
        raise UnsupportedNormalization("identities are evaluated on the Laplacian form only")
    if not (blocks.is_exact and spec.is_exact):
        raise UnsupportedNormalization("identities need exact rational chain data")
    n = blocks.n
    ev, od = blocks.even, blocks.odd
    p_even = char_poly_exact(ev.exact_diag, ev.exact_offsq)
    p_odd = char_poly_exact(od.exact_diag, od.exact_offsq)
    if p_even[0] != 0:
        raise InternalInconsistency("zero is not an eigenvalue of the even block")
    if len(p_even) > 2 and p_even[1] == 0:
        raise InternalInconsistency("zero is a repeated eigenvalue of the even block")
    # det(H - lam) = prod(mu - lam): the linear coefficient is minus the
    # product of the nonzero eigenvalues when exactly one root vanishes
    pseudo = -p_even[1]
    det_odd = p_odd[0]
    tr_e = sum(ev.exact_diag, Fraction(0))
    tr_o = sum(od.exact_diag, Fraction(0))
    j_mid = spec.couplings[middle_coupling_index(n) - 1]
    ratio = pseudo / det_odd
    half_prod = Fraction(1)
    for j in spec.couplings[: n // 2]:
        half_prod *= j
    det_exp = _power_of_two_exponent(half_prod / det_odd)
    if n % 2:
        pseudo_exp = _power_of_two_exponent(n * half_prod / pseudo)
    else:
        pseudo_exp = _power_of_two_exponent(Fraction(n, 2) * half_prod / j_mid / pseudo)
    return IdentityReport(
        n=n,
        trace_even=tr_e,
        trace_odd=tr_o,
        trace_diff=tr_e - tr_o,
        middle_coupling=j_mid,
        pseudo_det_even=pseudo,
        det_odd=det_odd,
        ratio=ratio,
        branch_prediction=branch_prediction(n, j_mid),
        det_odd_exponent=det_exp,
        pseudo_det_exponent=pseudo_exp,
    )
