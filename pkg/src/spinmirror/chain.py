"""Chain specifications and their one-excitation Hamiltonian blocks.

A chain of ``n`` spin-1/2 sites with nearest-neighbour couplings ``J_i``
(bond between sites ``i`` and ``i+1``) and local fields ``B_i``::

    H = sum_i J_i (XX + YY + delta * ZZ)_{i,i+1} + sum_i B_i Z_i

``delta = 1`` is the isotropic Heisenberg chain, ``delta = 0`` the XX chain.
The logical zero is the fully magnetised state ``|00...0>`` (``Z = +1`` on
every site) and the single flipped spin at site ``j`` spans the
one-excitation subspace, which ``H`` leaves invariant.

Values given as ints, :class:`fractions.Fraction` or ``"p/q"`` strings are
kept exact so the parity identities can be evaluated in rational
arithmetic; floats are used as-is.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

from .errors import InvalidSpec, UnsupportedNormalization

Number = Union[Fraction, float]


def as_number(value) -> Number:
    """Coerce user input to an exact Fraction when possible, else a float."""
    if isinstance(value, bool):
        raise InvalidSpec(f"boolean is not a number: {value!r}")
    if isinstance(value, (Fraction, int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidSpec(f"cannot parse number {value!r}") from exc
    try:
        x = float(value)
    except (TypeError, ValueError) as exc:
        raise InvalidSpec(f"cannot parse number {value!r}") from exc
    if not math.isfinite(x):
        raise InvalidSpec(f"non-finite number {value!r}")
    return x


def number_to_json(x: Number):
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    return float(x)


def is_exact(values: Iterable) -> bool:
    return all(isinstance(v, Fraction) for v in values)


def _palindrome(values: Sequence[Number]) -> bool:
    k = len(values)
    for i in range(k // 2):
        a, b = values[i], values[k - 1 - i]
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            if a != b:
                return False
        elif not math.isclose(float(a), float(b), rel_tol=1e-12, abs_tol=1e-300):
            return False
    return True


@dataclass(frozen=True)
class ChainSpec:
    n: int
    delta: Number
    couplings: tuple
    fields: tuple

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 2:
            raise InvalidSpec(f"site count must be an integer >= 2, got {self.n!r}")
        if len(self.couplings) != self.n - 1:
            raise InvalidSpec(
                f"expected {self.n - 1} couplings for n={self.n}, got {len(self.couplings)}"
            )
        if len(self.fields) != self.n:
            raise InvalidSpec(f"expected {self.n} fields for n={self.n}, got {len(self.fields)}")
        for i, j in enumerate(self.couplings):
            if not j > 0:
                raise InvalidSpec(f"coupling {i} (bond {i + 1}-{i + 2}) is not strictly positive: {j}")

    @property
    def is_symmetric(self) -> bool:
        return _palindrome(self.couplings) and _palindrome(self.fields)

    @property
    def is_exact(self) -> bool:
        return is_exact((self.delta, *self.couplings, *self.fields))

    @property
    def has_fields(self) -> bool:
        return any(b != 0 for b in self.fields)

    def scaled(self, s) -> "ChainSpec":
        """Return the chain with every coupling and field multiplied by ``s``."""
        s = as_number(s)
        return ChainSpec(self.n, self.delta,
                         tuple(j * s for j in self.couplings),
                         tuple(b * s for b in self.fields))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "delta": number_to_json(self.delta),
            "couplings": [number_to_json(j) for j in self.couplings],
            "fields": [number_to_json(b) for b in self.fields],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "ChainSpec":
        if not isinstance(data, dict):
            raise InvalidSpec("chain spec must be a JSON object")
        unknown = set(data) - {"n", "delta", "couplings", "fields"}
        if unknown:
            raise InvalidSpec(f"unknown chain spec keys: {sorted(unknown)}")
        try:
            n = data["n"]
            couplings = data["couplings"]
        except KeyError as exc:
            raise InvalidSpec(f"missing key {exc.args[0]!r}") from exc
        if not isinstance(couplings, list):
            raise InvalidSpec("couplings must be a list")
        fields = data.get("fields")
        if fields is None and isinstance(n, int):
            fields = [0] * n
        if not isinstance(fields, list):
            raise InvalidSpec("fields must be a list")
        return make_chain(n, data.get("delta", 1), couplings, fields)

    @classmethod
    def from_json(cls, text: str) -> "ChainSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidSpec(f"malformed JSON: {exc}") from exc
        return cls.from_dict(data)


def make_chain(n, delta, couplings, fields=None) -> ChainSpec:
    if fields is None:
        fields = [0] * n if isinstance(n, int) else []
    return ChainSpec(
        n=n,
        delta=as_number(delta),
        couplings=tuple(as_number(j) for j in couplings),
        fields=tuple(as_number(b) for b in fields),
    )


def make_xx_engineered(n: int, unit_spacing: bool = True) -> ChainSpec:
    """XX chain with couplings proportional to sqrt(i(n-i)).

    With ``unit_spacing`` the couplings carry an extra factor 1/4, which puts
    the one-excitation spectrum on ``-(n-1)/2, ..., (n-1)/2`` with unit gaps.
    Without it the couplings are exactly ``sqrt(i(n-i))`` and the gaps are 4.
    """
    scale = 0.25 if unit_spacing else 1.0
    couplings = [scale * math.sqrt(i * (n - i)) for i in range(1, n)]
    return make_chain(n, 0, couplings, [0] * n)


def make_uniform_bose(n: int, j=1, b=0) -> ChainSpec:
    """Uniform Heisenberg chain with every coupling ``j/2`` and every field ``b``."""
    j = as_number(j)
    if not j > 0:
        raise InvalidSpec(f"j must be positive, got {j}")
    half = j / 2
    return make_chain(n, 1, [half] * (n - 1), [as_number(b)] * n)


class Normalization(enum.Enum):
    PHYSICAL = "physical"
    LAPLACIAN = "laplacian"


@dataclass(frozen=True)
class OneExcHamiltonian:
    """Symmetric tridiagonal one-excitation block.

    ``diag[j]`` is the energy of the state with site ``j+1`` flipped and
    ``offdiag[j]`` couples sites ``j+1`` and ``j+2``.
    """

    n: int
    diag: tuple
    offdiag: tuple
    vacuum_energy: Number
    normalization: Normalization

    @property
    def is_exact(self) -> bool:
        return is_exact((*self.diag, *self.offdiag, self.vacuum_energy))

    def dense(self):
        import numpy as np

        h = np.diag(np.array([float(d) for d in self.diag]))
        e = np.array([float(x) for x in self.offdiag])
        idx = np.arange(self.n - 1)
        h[idx, idx + 1] = e
        h[idx + 1, idx] = e
        return h


def _bond(couplings, k: int, n: int):
    # couplings[k-1] is J_k; J_0 = J_n = 0
    if 1 <= k <= n - 1:
        return couplings[k - 1]
    return 0


def one_excitation(spec: ChainSpec, normalization=Normalization.PHYSICAL) -> OneExcHamiltonian:
    normalization = Normalization(normalization)
    n, J, B = spec.n, spec.couplings, spec.fields
    if normalization is Normalization.LAPLACIAN:
        if spec.delta != 1 or spec.has_fields:
            raise UnsupportedNormalization(
                "the Laplacian form exists only for delta=1 with zero fields"
            )
        diag = tuple((_bond(J, j - 1, n) + _bond(J, j, n)) / 2 for j in range(1, n + 1))
        offdiag = tuple(-j / 2 for j in J)
        return OneExcHamiltonian(n, diag, offdiag, Fraction(0), normalization)

    delta = spec.delta
    zz = delta * sum(J)
    zfield = sum(B)
    e0 = zz + zfield
    diag = tuple(
        e0 - 2 * delta * (_bond(J, j - 1, n) + _bond(J, j, n)) - 2 * B[j - 1]
        for j in range(1, n + 1)
    )
    offdiag = tuple(2 * j for j in J)
    return OneExcHamiltonian(n, diag, offdiag, e0, normalization)
