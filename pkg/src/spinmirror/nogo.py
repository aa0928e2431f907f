"""Spectrum parity-matching checks and the parity-contradiction certificates.

A mirror-symmetric chain transfers site 1 to site n at half its period iff,
after an affine rescaling ``a*E + b``, every even-sector energy is an even
integer and every odd-sector energy an odd integer (or the reverse, which
is the same condition shifted by one).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .chain import ChainSpec, Normalization, make_chain, one_excitation
from .parity import ParityBlocks, fold, identities, middle_coupling_index
from .spectral import commensurability, eigensystem_arrays

INTEGRALITY_TOL = 1e-7


class FailureReason(enum.Enum):
    NONE = "None"
    NOT_COMMENSURATE = "NotCommensurate"
    PARITY_MISMATCH = "ParityMismatch"


@dataclass(frozen=True)
class SpmcVerdict:
    satisfied: bool
    scale: Optional[float]
    shift: Optional[float]
    even_integers: tuple
    odd_integers: tuple
    failure_reason: FailureReason


def parity_matches(even_ints: Sequence[int], odd_ints: Sequence[int]) -> bool:
    """Uniform parity inside each sector and opposite parity across them."""
    pe = {m % 2 for m in even_ints}
    po = {m % 2 for m in odd_ints}
    return len(pe) <= 1 and len(po) <= 1 and not (pe & po)


def spmc_classify(blocks: ParityBlocks, tol: float = 1e-9, q_max: int = 10**6) -> SpmcVerdict:
    ev = eigensystem_arrays(blocks.even.diag, blocks.even.offdiag).eigenvalues
    od = (eigensystem_arrays(blocks.odd.diag, blocks.odd.offdiag).eigenvalues
          if blocks.odd.dim else np.empty(0))
    comm = commensurability(np.concatenate([ev, od]), tol, q_max)
    if not comm.commensurate:
        return SpmcVerdict(False, None, None, (), (), FailureReason.NOT_COMMENSURATE)
    # smallest commensurate scale; anchor the lowest level to an integer,
    # rounding half-integers up (with slack) so the labels do not flicker
    a = 1.0 / comm.base
    b = math.floor(a * comm.offset + 0.5 + 1e-7) - a * comm.offset

    def to_ints(vals):
        x = a * vals + b
        r = np.rint(x)
        if r.size and np.max(np.abs(x - r)) > INTEGRALITY_TOL:
            raise ArithmeticError("rescaled spectrum is not integral")
        return tuple(int(v) for v in r)

    e_ints, o_ints = to_ints(ev), to_ints(od)
    ok = parity_matches(e_ints, o_ints)
    return SpmcVerdict(ok, a, b, e_ints, o_ints,
                       FailureReason.NONE if ok else FailureReason.PARITY_MISMATCH)


class Branch(enum.Enum):
    EXCEPTION_N2 = "ExceptionN2"
    ODD_N = "OddN"
    MOD4_PLUS2 = "Mod4Plus2"
    MOD4_ZERO = "Mod4Zero"


def branch_for(n: int) -> Branch:
    if n == 2:
        return Branch.EXCEPTION_N2
    if n % 2:
        return Branch.ODD_N
    return Branch.MOD4_PLUS2 if n % 4 == 2 else Branch.MOD4_ZERO


def two_adic(x: int) -> tuple[int, int]:
    """Return (p, q) with x = 2**p * (2q + 1)."""
    p = (x & -x).bit_length() - 1
    return p, ((x >> p) - 1) // 2


@dataclass(frozen=True)
class Certificate:
    n: int
    branch: Branch
    middle_index: int
    trace_claim: dict
    determinant_claims: list
    contradiction: dict
    two_adic: Optional[dict] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["branch"] = self.branch.value
        d["identities"] = [self.trace_claim, *self.determinant_claims]
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        return cls(
            n=d["n"], branch=Branch(d["branch"]), middle_index=d["middle_index"],
            trace_claim=d["trace_claim"], determinant_claims=d["determinant_claims"],
            contradiction=d["contradiction"], two_adic=d.get("two_adic"),
        )


def certificate(n: int) -> Certificate:
    """Instantiate the parity argument against mirroring for an n-site Heisenberg chain.

    Couplings enter only through the middle bond ``J_mid``; the identities
    are the Laplacian-normalised ones checked exactly by :func:`identities`.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    br = branch_for(n)
    i0 = middle_coupling_index(n)
    m_even, m_odd = (n + 1) // 2, n // 2
    sign = "+" if n % 2 else "-"
    trace = {
        "kind": "trace",
        "statement": f"Tr(H_e) - Tr(H_o) = {sign}J_{i0}",
        "middle_coupling": f"J_{i0}",
        "sign": sign,
    }
    if n % 2:
        ratio = str(n)
        dets = [
            {"kind": "det_ratio", "statement": f"Det'(H_e) = {n} * Det(H_o)", "ratio": ratio},
            {"kind": "pseudo_det", "statement": f"Det'(H_e) = {n} * prod_{{i<={m_odd}}} J_i / 2^{m_odd}",
             "power_of_two": m_odd},
            {"kind": "det", "statement": f"Det(H_o) = prod_{{i<={m_odd}}} J_i / 2^{m_odd}",
             "power_of_two": m_odd},
        ]
    else:
        half = n // 2
        ratio = f"{half}/J_{i0}"
        dets = [
            {"kind": "det_ratio", "statement": f"J_{i0} * Det'(H_e) = {half} * Det(H_o)", "ratio": ratio},
            {"kind": "pseudo_det",
             "statement": f"Det'(H_e) = {half} * prod_{{i<{half}}} J_i / 2^{half - 1}",
             "power_of_two": half - 1},
            {"kind": "det", "statement": f"Det(H_o) = prod_{{i<={half}}} J_i / 2^{half - 1}",
             "power_of_two": half - 1},
        ]

    adic = None
    if br is Branch.EXCEPTION_N2:
        contradiction = {
            "holds": False,
            "text": "single gap between singlet and triplet; both sectors hold one level each, "
                    "so any gap satisfies the parity condition",
        }
    elif br is Branch.ODD_N:
        contradiction = {
            "holds": True,
            "text": f"Det(H_o) is a product of {m_odd} odd integers, hence odd; "
                    f"Det'(H_e) is a product of {m_even - 1} even integers, hence even; "
                    f"but Det'(H_e) = {n} * Det(H_o) is odd * odd = odd",
            "must_be_even": "Det'(H_e)",
            "odd_product": [str(n), "Det(H_o)"],
        }
    elif br is Branch.MOD4_PLUS2:
        k = (n - 2) // 4
        contradiction = {
            "holds": True,
            "text": f"Tr(H_o) is a sum of {m_odd} odd integers, so J_{i0} = |trace difference| is odd; "
                    f"J_{i0} * Det'(H_e) is even since Det'(H_e) has {m_even - 1} even factors; "
                    f"but {2 * k + 1} * Det(H_o) is odd * odd = odd",
            "must_be_even": f"J_{i0} * Det'(H_e)",
            "odd_product": [str(2 * k + 1), "Det(H_o)"],
        }
    else:
        k = n // 4
        p, q = two_adic(2 * k)
        adic = {"two_n": 2 * k, "p": p, "q": q, "odd_part": 2 * q + 1}
        contradiction = {
            "holds": True,
            "text": f"Tr(H_o) is a sum of {m_odd} odd integers, so J_{i0} is even; "
                    f"Det'(H_e) has {m_even - 1} even factors so 2^{-p} Det'(H_e) is an integer "
                    f"(p = {p} <= {m_even - 1}); then {2 * q + 1} * Det(H_o) = "
                    f"J_{i0} * 2^{-p} Det'(H_e) is even, yet the left side is odd * odd",
            "must_be_even": f"J_{i0} * 2^-{p} * Det'(H_e)",
            "odd_product": [str(2 * q + 1), "Det(H_o)"],
        }
    return Certificate(n, br, i0, trace, dets, contradiction, adic)


@dataclass
class SuiteReport:
    n: int
    trials: int
    seed: int
    identities_exact: int = 0
    trace_ok: int = 0
    ratio_ok: int = 0
    spmc_satisfied: int = 0
    trace_signs: dict = field(default_factory=lambda: {"+": 0, "-": 0})
    mirror_found: Optional[int] = None
    consistent: Optional[int] = None

    def to_dict(self) -> dict:
        return asdict(self)


def random_symmetric_couplings(n: int, rng: np.random.Generator, max_num: int = 20,
                               max_den: int = 12) -> list:
    half = [Fraction(int(rng.integers(1, max_num + 1)), int(rng.integers(1, max_den + 1)))
            for _ in range(n // 2)]
    # bonds 1..n-1; bond i mirrors bond n-i
    return [half[min(i, n - 2 - i)] for i in range(n - 1)]


def randomized_identity_suite(n: int, trials: int, seed: int, check_dynamics: bool = False) -> SuiteReport:
    """Exact identity and SPMC checks over random rational symmetric Heisenberg chains.

    Each trial draws from its own child of ``SeedSequence(seed)`` so the
    result is independent of evaluation order.
    """
    from .dynamics import mirror_time

    report = SuiteReport(n, trials, seed)
    if check_dynamics:
        report.mirror_found = 0
        report.consistent = 0
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        spec = make_chain(n, 1, random_symmetric_couplings(n, rng))
        blocks = fold(one_excitation(spec, Normalization.LAPLACIAN), spec)
        rep = identities(blocks, spec)
        report.trace_ok += rep.trace_ok
        report.ratio_ok += rep.ratio_ok
        report.identities_exact += rep.trace_ok and rep.ratio_ok
        report.trace_signs["+" if rep.trace_sign > 0 else "-"] += 1
        verdict = spmc_classify(blocks)
        report.spmc_satisfied += verdict.satisfied
        if check_dynamics:
            found = mirror_time(spec) is not None
            report.mirror_found += found
            report.consistent += found == verdict.satisfied
    return report
