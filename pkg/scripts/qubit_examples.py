"""Worked single-qubit numbers: witness values, the bound, and a negativity scan."""
import numpy as np

from nsit.dynamics import HamiltonianSpec, evolve_probabilities, transfer_matrix
from nsit.gellmann import build_basis
from nsit.measurement import MeasurementRecord, collapse, negativity_scan, witness_gamma
from nsit.qubit import witness_set
from nsit.states import DensityMatrix, probability_vector_from_density

basis = build_basis(2)
states = {
    "I/2": DensityMatrix.maximally_mixed(2),
    "|+x>": DensityMatrix.from_ket([1, 1]),
    "|0>": DensityMatrix.from_ket([1, 0]),
    "tilted pure": DensityMatrix.from_ket([np.cos(0.4), np.exp(0.7j) * np.sin(0.4)]),
}

print(f"{'state':>12}  {'gamma_x':>9} {'gamma_y':>9} {'gamma_z':>9} {'delta':>9} {'sum g(1+g)':>11}")
for name, rho in states.items():
    p = probability_vector_from_density(rho, basis)
    gammas = [witness_gamma(p, MeasurementRecord(a, 0), basis).gamma for a in range(3)]
    ws = witness_set(p.tuples @ basis.eigenvalues[0])
    print(f"{name:>12}  " + " ".join(f"{g:9.6f}" for g in gammas) + f" {ws.delta:9.6f} {ws.bound_lhs:11.6f}")

# |+x> measured along y with outcome +1, then precession about z
tm = transfer_matrix(HamiltonianSpec.from_field(0, 0, 1), basis)
post = collapse(probability_vector_from_density(states["|+x>"], basis), MeasurementRecord(1, 0))
scan = negativity_scan(post, tm, np.linspace(0, np.pi, 315))
print("\npost-measurement vector", post.flat)
print("scan:", scan.to_dict())
for t in (0.5, 1.0, 2.0):
    print(f"t={t}:", np.round(evolve_probabilities(post, tm, t).flat, 6))
