"""Uncertainty principles and exact recovery for Dirac combs on Z_N^d."""
from .comb import (
    CoefficientSet,
    DiracComb,
    EffectiveTriple,
    build_comb,
    concentration_level,
    decompose,
    effective_triple,
    to_signal,
    uncertainty_report,
)
from .fourier import (
    Signal,
    Spectrum,
    forward_dft,
    frequency_limit,
    inverse_dft,
    plancherel_defect,
    spectrum_support,
)
from .lattice import Grid, LatticePoint, LatticeSet, dot, enumerate_grid

__version__ = "0.1.0"

__all__ = [
    "CoefficientSet", "DiracComb", "EffectiveTriple", "build_comb", "concentration_level",
    "decompose", "effective_triple", "to_signal", "uncertainty_report", "Signal",
    "Spectrum", "forward_dft", "frequency_limit", "inverse_dft", "plancherel_defect",
    "spectrum_support", "Grid", "LatticePoint", "LatticeSet", "dot", "enumerate_grid",
]
