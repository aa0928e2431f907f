"""Single-excitation transfer amplitudes, Haar-averaged fidelity and peak scans.

The propagator is evaluated spectrally, ``sum_k exp(-i E_k t) v_k v_k^T``,
so any time (including very long horizons) costs one pass over the
eigenvalues. Amplitudes are referenced to the vacuum phase: the logical
zero ``|00...0>`` acquires ``exp(-i E0 t)`` and only the relative phase is
meaningful for the transmitted qubit.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, TextIO

import numpy as np
from scipy.optimize import minimize_scalar

from .chain import ChainSpec, Normalization, one_excitation
from .errors import InvalidAmplitude, InvalidSite, NotMirrorSymmetric
from .spectral import SpectralData, commensurability, eigensystem

MIRROR_TOL = 1e-8


@lru_cache(maxsize=256)
def _physical_spectrum(spec: ChainSpec) -> tuple[SpectralData, float]:
    h = one_excitation(spec, Normalization.PHYSICAL)
    return eigensystem(h), float(h.vacuum_energy)


@dataclass(frozen=True)
class Propagator:
    """Transfer amplitude between two fixed sites, ready for repeated evaluation."""

    energies: np.ndarray
    weights: np.ndarray  # v_k[target] * v_k[source]
    vacuum_energy: float

    @classmethod
    def for_sites(cls, spec: ChainSpec, source: int = 1, target: Optional[int] = None) -> "Propagator":
        target = spec.n if target is None else target
        for site in (source, target):
            if not (isinstance(site, (int, np.integer)) and 1 <= site <= spec.n):
                raise InvalidSite(f"site {site!r} outside 1..{spec.n}")
        sd, e0 = _physical_spectrum(spec)
        v = sd.eigenvectors
        return cls(sd.eigenvalues, v[target - 1, :] * v[source - 1, :], e0)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        # shift energies by E0 before exponentiating; keeps phases small at long times
        rel = self.energies - self.vacuum_energy
        phases = np.exp(-1j * np.multiply.outer(t, rel))
        return phases @ self.weights

    @property
    def spread(self) -> float:
        return float(self.energies[-1] - self.energies[0])


def transition_amplitude(spec: ChainSpec, source: int, target: int, t):
    """``exp(i E0 t) <target| exp(-i H t) |source>`` for scalar or array ``t``."""
    f = Propagator.for_sites(spec, source, target)(t)
    return complex(f) if np.ndim(f) == 0 else f


def haar_average_fidelity(f, phase_compensated: bool = True):
    """Input-averaged fidelity of the received qubit given amplitude ``f``.

    ``F = 1/2 + |f| cos(arg f) / 3 + |f|^2 / 6``; in compensated mode the
    phase is assumed corrected by a suitable uniform field, so ``cos = 1``.
    """
    f = np.asarray(f, dtype=complex)
    a = np.abs(f)
    if np.any(a > 1 + 1e-9):
        raise InvalidAmplitude(f"|f| = {float(np.max(a))} exceeds 1")
    cos_term = a if phase_compensated else f.real
    out = 0.5 + cos_term / 3 + a * a / 6
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TransferReport:
    times: np.ndarray
    amplitude: np.ndarray
    abs_f: np.ndarray
    fidelity: np.ndarray
    peak_time: float
    peak_fidelity: float
    peak_abs_f: float
    t_max: float
    phase_compensated: bool

    def write_csv(self, stream: TextIO) -> None:
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(["t", "re_f", "im_f", "abs_f", "avg_fidelity"])
        for t, f, a, F in zip(self.times, self.amplitude, self.abs_f, self.fidelity):
            w.writerow([f"{t:.17g}", f"{f.real:.17g}", f"{f.imag:.17g}", f"{a:.17g}", f"{F:.17g}"])


def default_points(t_max: float, spread: float) -> int:
    return max(2048, 16 * math.ceil(t_max * spread / math.pi))


def fidelity_scan(spec: ChainSpec, source: int = 1, target: Optional[int] = None,
                  t_max: float = 10.0, points: Optional[int] = None, refine: bool = True,
                  phase_compensated: bool = True) -> TransferReport:
    prop = Propagator.for_sites(spec, source, target)
    return scan_propagator(prop, t_max, points, refine, phase_compensated)


def scan_propagator(prop: Propagator, t_max: float, points: Optional[int] = None,
                    refine: bool = True, phase_compensated: bool = True) -> TransferReport:
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    if points is None:
        points = default_points(t_max, prop.spread)
    if points < 2:
        raise ValueError("need at least two grid points")
    times = np.linspace(0.0, t_max, points)
    amp = prop(times)
    fid = haar_average_fidelity(amp, phase_compensated)
    best = int(np.argmax(fid))
    peak_t, peak_F = float(times[best]), float(fid[best])
    if refine:
        dt = times[1] - times[0]
        lo, hi = max(0.0, peak_t - dt), min(t_max, peak_t + dt)
        res = minimize_scalar(
            lambda t: -haar_average_fidelity(prop(t), phase_compensated),
            bounds=(lo, hi), method="bounded", options={"xatol": 1e-10},
        )
        if -res.fun > peak_F:
            peak_t, peak_F = float(res.x), float(-res.fun)
    return TransferReport(
        times=times, amplitude=amp, abs_f=np.abs(amp), fidelity=fid,
        peak_time=peak_t, peak_fidelity=peak_F, peak_abs_f=float(abs(prop(peak_t))),
        t_max=float(t_max), phase_compensated=phase_compensated,
    )


def mirror_time(spec: ChainSpec, tol: float = 1e-9, q_max: int = 10**6) -> Optional[float]:
    """Half period of a commensurate spectrum if it carries site 1 to site n, else None."""
    if not spec.is_symmetric:
        raise NotMirrorSymmetric("mirror time is defined for symmetric chains only")
    sd, _ = _physical_spectrum(spec)
    comm = commensurability(sd.eigenvalues, tol, q_max)
    if not comm.commensurate:
        return None
    t_half = comm.period / 2
    if abs(transition_amplitude(spec, 1, spec.n, t_half)) >= 1 - MIRROR_TOL:
        return t_half
    return None
