"""Closed-form single-qubit witness quantities.

Inputs are Bloch triples (<sx>, <sy>, <sz>) of the pre-measurement state.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import PAULI, TransferMatrix
from .errors import InvalidQuantumState

BOUND = 0.5
TOL = 1e-9


@dataclass(frozen=True)
class QubitWitnessSet:
    gamma_x: float
    gamma_y: float
    gamma_z: float
    delta: float
    bloch: tuple[float, float, float]

    @property
    def gammas(self) -> np.ndarray:
        return np.array([self.gamma_x, self.gamma_y, self.gamma_z])

    @property
    def bound_lhs(self) -> float:
        g = self.gammas
        return float(np.sum(g * (1 + g)))


def _bloch(bloch) -> np.ndarray:
    v = np.asarray(bloch, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a Bloch triple, got shape {v.shape}")
    if v @ v > 1 + TOL:
        raise InvalidQuantumState(f"Bloch norm^2 {v @ v:.6g} exceeds 1")
    return v


def gamma_closed_form(bloch) -> np.ndarray:
    """gamma_a = (sqrt(1 + sum_{b != a} <s_b>^2) - 1) / 2 for a = x, y, z."""
    v = _bloch(bloch)
    sq = v * v
    others = sq.sum() - sq
    return 0.5 * (np.sqrt(1.0 + others) - 1.0)


def averaged_postmeasurement(rho: np.ndarray, axis: int) -> np.ndarray:
    """sum_s P_{a,s} rho P_{a,s} for a projective measurement of sigma_axis."""
    out = np.zeros((2, 2), dtype=complex)
    for s in (1, -1):
        p = 0.5 * (np.eye(2) + s * PAULI[axis])
        out += p @ rho @ p
    return out


def delta_measure(bloch) -> float:
    """Mean-square backreaction (1/3) sum_a sum_b (delta sigma_b(a))^2.

    Computed from the averaged post-measurement states; equals (2/3)|bloch|^2.
    """
    v = _bloch(bloch)
    rho = 0.5 * (np.eye(2) + np.einsum("a,aij->ij", v, PAULI))
    total = 0.0
    for a in range(3):
        post = averaged_postmeasurement(rho, a)
        after = np.einsum("bij,ji->b", PAULI, post).real
        total += np.sum((after - v) ** 2)
    return total / 3.0


def delta_closed_form(bloch) -> float:
    v = _bloch(bloch)
    return float(2.0 / 3.0 * (v @ v))


def bound_check(gx: float, gy: float, gz: float) -> dict:
    g = np.array([gx, gy, gz], dtype=float)
    if np.any(g < 0):
        raise ValueError("gamma values must be non-negative")
    lhs = float(np.sum(g * (1 + g)))
    return {"lhs": lhs, "satisfied": lhs <= BOUND + TOL}


def witness_set(bloch) -> QubitWitnessSet:
    v = _bloch(bloch)
    g = gamma_closed_form(v)
    return QubitWitnessSet(*map(float, g), delta=delta_measure(v), bloch=tuple(map(float, v)))


def transfer_matrix_2level(b) -> TransferMatrix:
    """The qubit transfer matrix written out entry by entry."""
    bx, by, bz = (float(x) / 2 for x in b)
    rows = [
        [0, 0, -bz, bz, by, -by],
        [0, 0, bz, -bz, -by, by],
        [bz, -bz, 0, 0, -bx, bx],
        [-bz, bz, 0, 0, bx, -bx],
        [-by, by, bx, -bx, 0, 0],
        [by, -by, -bx, bx, 0, 0],
    ]
    return TransferMatrix(2, np.array(rows, dtype=float))
