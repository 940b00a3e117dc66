# Standard Library
from enum import Enum


class SubCommand(str, Enum):
    SOLVE = "solve"
    SWEEP_DISTANCE = "sweep-distance"
    SPECTRUM_SHIFT = "spectrum-shift"
    ENTROPY_SPECTRUM = "entropy-spectrum"
    GRID_MASS_WIDTH = "grid-mass-width"
    CONVERGE = "converge"
    DECOHERE = "decohere"
    FEASIBILITY = "feasibility"
    WAVEFUNCTION = "wavefunction"
    MODES = "modes"
