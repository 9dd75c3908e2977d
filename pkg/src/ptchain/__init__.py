"""Quantum transport through a PT-symmetric quantum-dot chain between two leads.

Modules
-------
model      circuit parameterisation (chain, leads, bonds, flux gauge)
leads      lead surface Green function, self-energies, broadening
linalg     small dense LU / eigen solvers
negf       Green function, transmission and transmission amplitude
molecular  molecular-orbital decomposition and decoupled states
analytic   closed-form amplitudes for two and three dots
analysis   sweeps, peaks, antiresonances, phase features
presets    figure parameter sets
config     run configuration (INI)
verify     self-verification suite
cli        command-line entry point
"""

from .model import (Allocation, ChainSpec, CircuitSpec, CouplingSpec, LeadSpec,
                    make_circuit, make_pt_chain)
from .negf import evaluate, transmission, transmission_amplitude

__all__ = [
    "Allocation", "ChainSpec", "CircuitSpec", "CouplingSpec", "LeadSpec",
    "make_circuit", "make_pt_chain", "evaluate", "transmission", "transmission_amplitude",
]
