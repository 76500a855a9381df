"""Contrast the classical spin ensemble (residual at rounding level) with the
qubit witness along a grid of times."""
import numpy as np

from nsit import classical
from nsit.gellmann import build_basis
from nsit.measurement import MeasurementRecord, witness_gamma
from nsit.states import DensityMatrix, probability_vector_from_density

ens = classical.sample_ensemble("uniform-sphere", 200_000, seed=1)
ref = classical.sample_ensemble("uniform-sphere", 200_000, seed=2)
print("t     same-sample residual   two-sample residual / stderr")
for t in np.linspace(0.25, 3.0, 12):
    same = classical.nsit_residual(ens, (0, 0, 1), "x", t, classical.OBSERVABLES["sy"])
    two = classical.nsit_residual(ens, (0, 0, 1), "x", t, classical.OBSERVABLES["sy"], reference=ref)
    print(f"{t:4.2f}  {same['residual']:.2e}               {two['residual'] / two['stderr']:.2f}")

basis = build_basis(2)
p = probability_vector_from_density(DensityMatrix.from_ket([1, 1]), basis)
print("\nqubit |+x>, measure y: gamma =", witness_gamma(p, MeasurementRecord(1, 0), basis).gamma)
