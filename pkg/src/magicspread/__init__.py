"""magicspread: how one unit of locally injected magic spreads under Clifford dynamics."""

__version__ = "0.1.0"

from .codestate import CodeState, NoMagicInjected, extend_with_reference, inject_t
from .lengthscales import Interval, MlmiSet, fleom, lml, minimal_intervals, typical_length
from .magic import (
    MagicClass,
    compute_bmg_alg3,
    dense_oracle_sre2,
    destroyable,
    extraction_witness,
    pauli_spectrum_summary,
    sre2_from_spectrum,
    subsystem_magic_alg1,
    subsystem_magic_alg2,
)
from .pauli import PauliString, format_pauli, parse_pauli
from .tableau import CliffordGate, StabilizerState, apply_gate, entropy, measure_pauli, sample_clifford_2q

__all__ = [
    "CodeState",
    "CliffordGate",
    "Interval",
    "MagicClass",
    "MlmiSet",
    "NoMagicInjected",
    "PauliString",
    "StabilizerState",
    "apply_gate",
    "compute_bmg_alg3",
    "dense_oracle_sre2",
    "destroyable",
    "entropy",
    "extend_with_reference",
    "extraction_witness",
    "fleom",
    "format_pauli",
    "inject_t",
    "lml",
    "measure_pauli",
    "minimal_intervals",
    "parse_pauli",
    "pauli_spectrum_summary",
    "sample_clifford_2q",
    "sre2_from_spectrum",
    "subsystem_magic_alg1",
    "subsystem_magic_alg2",
    "typical_length",
]
