"""Probability-vector dynamics of N-level systems and no-signaling-in-time witnesses."""
from .gellmann import GeneratorBasis, build_basis, structure_constants, verify_basis
from .states import (
    BlochVector,
    DensityMatrix,
    ProbabilityVector,
    bloch_from_density,
    density_from_bloch,
    expectations_from_probabilities,
    probability_vector_from_density,
)
from .dynamics import HamiltonianSpec, TransferMatrix, bloch_generator, evolve_probabilities, transfer_matrix
from .measurement import MeasurementRecord, collapse, negativity_scan, reconstruct_pseudodensity, witness_gamma

__version__ = "0.1.0"
