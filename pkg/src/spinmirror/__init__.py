"""Spin-1/2 chain state transfer: spectra, parity folding and the mirroring no-go."""

__version__ = "0.1.0"

from .chain import (ChainSpec, Normalization, OneExcHamiltonian, make_chain, make_uniform_bose,
                    make_xx_engineered, one_excitation)
from .design import DesignResult, field_cancellation, optimize_mirror_fidelity
from .dynamics import TransferReport, fidelity_scan, haar_average_fidelity, mirror_time, transition_amplitude
from .nogo import Certificate, SpmcVerdict, certificate, randomized_identity_suite, spmc_classify
from .parity import IdentityReport, ParityBlocks, char_poly_exact, fold, identities
from .spectral import SpectralData, commensurability, eigensystem, endpoint_overlap_check

__all__ = [
    "ChainSpec", "Normalization", "OneExcHamiltonian", "make_chain", "make_uniform_bose",
    "make_xx_engineered", "one_excitation", "DesignResult", "field_cancellation",
    "optimize_mirror_fidelity", "TransferReport", "fidelity_scan", "haar_average_fidelity",
    "mirror_time", "transition_amplitude", "Certificate", "SpmcVerdict", "certificate",
    "randomized_identity_suite", "spmc_classify", "IdentityReport", "ParityBlocks",
    "char_poly_exact", "fold", "identities", "SpectralData", "commensurability", "eigensystem",
    "endpoint_overlap_check",
]
