"""Coupling and field design for end-to-end transfer.

``field_cancellation`` is the analytic construction that flattens the
one-excitation diagonal of a Heisenberg chain so it behaves like an XX
chain. ``optimize_mirror_fidelity`` searches symmetric chains numerically
for the largest end-to-end amplitude reachable within a bounded horizon.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .chain import ChainSpec, as_number, make_chain
from .dynamics import Propagator, scan_propagator
from .errors import InvalidSpec, SpinChainError

# horizon in units of the mean level spacing: one estimated revival period
HORIZON_PERIODS = 1.0


def field_cancellation(couplings: Sequence, offset=0) -> list:
    """Fields ``B_j = -(J_{j-1} + J_j) + offset`` with ``J_0 = J_n = 0``."""
    js = [as_number(j) for j in couplings]
    if any(not j > 0 for j in js):
        raise InvalidSpec("all couplings must be strictly positive")
    offset = as_number(offset)
    n = len(js) + 1
    padded = [0, *js, 0]
    return [-(padded[j] + padded[j + 1]) + offset for j in range(n)]


def engineered_heisenberg(n: int, offset=0) -> ChainSpec:
    """Heisenberg chain with couplings sqrt(i(n-i))/4 and cancelling fields."""
    js = [0.25 * math.sqrt(i * (n - i)) for i in range(1, n)]
    return make_chain(n, 1, js, field_cancellation(js, offset))


@dataclass(frozen=True)
class DesignResult:
    spec: ChainSpec
    best_abs_f: float
    best_time: float
    evaluations: int
    seed: int
    allow_fields: bool
    horizon: float

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "best_abs_f": self.best_abs_f,
            "best_time": self.best_time,
            "evaluations": self.evaluations,
            "seed": self.seed,
            "allow_fields": self.allow_fields,
            "horizon": self.horizon,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def transfer_horizon(prop: Propagator, n: int) -> float:
    """Time window for the end-to-end peak search.

    ``2 pi / g`` with ``g`` the mean level spacing; for a chain with a
    uniformly spaced spectrum this is one full period, whose midpoint is
    the mirror time. Scales as ``1/s`` under ``H -> s H``.
    """
    mean_gap = prop.spread / (n - 1)
    return HORIZON_PERIODS * 2 * math.pi / mean_gap


def max_transfer(spec: ChainSpec, horizon: Optional[float] = None) -> tuple[float, float, float]:
    """(max |f_{1->n}|, time of the max, horizon) over ``[0, horizon]``."""
    prop = Propagator.for_sites(spec, 1, spec.n)
    if horizon is None:
        horizon = transfer_horizon(prop, spec.n)
    rep = scan_propagator(prop, horizon, refine=True, phase_compensated=True)
    return rep.peak_abs_f, rep.peak_time, horizon


class _Parameterization:
    """Maps an unconstrained vector to a symmetric chain.

    The first ``ceil((n-1)/2)`` entries are log-couplings, the remaining
    ``ceil(n/2)`` (if fields are allowed) are fields in units of the mean
    coupling.
    """

    def __init__(self, n: int, allow_fields: bool, delta=1):
        self.n = n
        self.allow_fields = allow_fields
        self.delta = delta
        self.kj = n // 2
        self.kb = (n + 1) // 2 if allow_fields else 0

    @property
    def dim(self) -> int:
        return self.kj + self.kb

    def spec(self, x: np.ndarray) -> ChainSpec:
        n = self.n
        half_j = np.exp(np.clip(x[: self.kj], -30, 30))
        js = [float(half_j[min(i, n - 2 - i)]) for i in range(n - 1)]
        if self.kb:
            scale = float(np.mean(js))
            half_b = x[self.kj:] * scale
            bs = [float(half_b[min(i, n - 1 - i)]) for i in range(n)]
        else:
            bs = [0.0] * n
        return make_chain(n, self.delta, js, bs)


def optimize_mirror_fidelity(n: int, allow_fields: bool, budget: int, seed: int,
                             restarts: int = 8, delta=1) -> DesignResult:
    """Multi-start Nelder-Mead search for the best end-to-end amplitude.

    The budget counts objective evaluations and is split evenly across the
    restarts (the first restart takes the remainder). Restart ``r`` draws
    its start from child ``r`` of ``SeedSequence(seed)``; ties go to the
    lower restart index.
    """
    if n < 2 or budget < 1:
        raise ValueError("need n >= 2 and budget >= 1")
    par = _Parameterization(n, allow_fields, delta)
    restarts = max(1, min(restarts, budget))
    shares = [budget // restarts] * restarts
    shares[0] += budget - sum(shares)

    best = (-1.0, None, math.nan, math.nan)  # (|f|, x, t, horizon)
    used = 0
    for r, child in enumerate(np.random.SeedSequence(seed).spawn(restarts)):
        rng = np.random.default_rng(child)
        x0 = rng.normal(0.0, 0.5, size=par.dim)
        cache: dict = {}

        def objective(x):
            nonlocal used
            key = x.tobytes()
            if key not in cache:
                used += 1
                try:
                    cache[key] = max_transfer(par.spec(x))
                except SpinChainError:
                    cache[key] = (0.0, math.nan, math.nan)
            return -cache[key][0]

        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"maxfev": shares[r], "xatol": 1e-12, "fatol": 1e-15,
                                "adaptive": par.dim > 2})
        key = res.x.tobytes()
        f_best, t_best, hor = cache[key] if key in cache else max_transfer(par.spec(res.x))
        if f_best > best[0]:
            best = (f_best, res.x.copy(), t_best, hor)

    f_best, x_best, t_best, hor = best
    # |f| can exceed 1 by roundoff at a perfect-transfer point
    f_best = min(max(float(f_best), 0.0), 1.0)
    return DesignResult(par.spec(x_best), f_best, float(t_best), used, seed,
                        allow_fields, float(hor))
