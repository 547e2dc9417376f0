"""Measurement-based quantum computation on gapped spin-1 AKLT chains.

Modules:

* :mod:`gmqc.spin` -- spin operators, two-body projectors, measurement frame
* :mod:`gmqc.hamiltonian` -- AKLT Hamiltonians, ground spaces, gaps, string operators
* :mod:`gmqc.mps` -- bond-dimension-2 ground state, amplitudes, correlators
* :mod:`gmqc.protocol` -- measurement gates with Pauli-frame tracking
* :mod:`gmqc.compiler` -- logical circuits, scheduling and seeded runs
* :mod:`gmqc.oracle` -- ideal-unitary, branch-enumeration and dense-physics oracles
"""

from .compiler import CPhase, Init, LogicalCircuit, Readout, RX, RZ, expected_sites, parse_circuit, run, validate
from .hamiltonian import ChainSpec, build_hamiltonian, spectral_gap
from .mps import build_aklt_mps, correlator
from .protocol import LogicalRegister, PauliFrame

__version__ = "0.1.0"

__all__ = [
    "CPhase",
    "ChainSpec",
    "Init",
    "LogicalCircuit",
    "LogicalRegister",
    "PauliFrame",
    "RX",
    "RZ",
    "Readout",
    "build_aklt_mps",
    "build_hamiltonian",
    "correlator",
    "expected_sites",
    "parse_circuit",
    "run",
    "spectral_gap",
    "validate",
]
