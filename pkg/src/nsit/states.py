"""Density matrices, Bloch vectors and probability vectors, plus conversions.

Positivity of a density matrix is never enforced: pseudodensity matrices with
negative eigenvalues are representable and ``positivity_check`` is a query.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InconsistentProbabilities, NotHermitian
from .gellmann import GeneratorBasis

HERMITIAN_TOL = 1e-10
TUPLE_SUM_TOL = 1e-9
# expectations_from_probabilities refuses tuples further off than this
MALFORMED_TOL = 1e-6
QUANTUM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.dim, self.dim):
            raise DimensionError(f"expected {self.dim}x{self.dim} matrix, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise NotHermitian("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > HERMITIAN_TOL:
            raise InconsistentProbabilities(f"trace {np.trace(m).real:.3g} != 1")
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_ket(cls, ket) -> "DensityMatrix":
        v = np.asarray(ket, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(len(v), np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, n: int) -> "DensityMatrix":
        return cls(n, np.eye(n) / n)


@dataclass(frozen=True, eq=False)
class BlochVector:
    dim: int
    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float).reshape(-1)
        if len(c) != self.dim**2 - 1:
            raise DimensionError(f"need {self.dim**2 - 1} coordinates for N={self.dim}, got {len(c)}")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    """N^2-1 tuples of N emergent probabilities, stored as an (N^2-1, N) array.

    Row n holds p_n(k) for the eigenvalues of generator n in descending order.
    Components may be negative for evolved or post-measurement diagnostics.
    """

    dim: int
    tuples: np.ndarray

    def __post_init__(self):
        t = np.array(self.tuples, dtype=float)
        n = self.dim
        if t.size != n * (n * n - 1):
            raise DimensionError(f"need {n * (n * n - 1)} components for N={n}, got {t.size}")
        t = t.reshape(n * n - 1, n)
        t.setflags(write=False)
        object.__setattr__(self, "tuples", t)

    @property
    def flat(self) -> np.ndarray:
        return self.tuples.reshape(-1)

    def tuple_sum_error(self) -> float:
        return float(np.max(np.abs(self.tuples.sum(axis=1) - 1.0)))

    def min_component(self) -> float:
        return float(self.tuples.min())


def _check_dims(a: int, basis: GeneratorBasis):
    if a != basis.dim:
        raise DimensionError(f"object has dim {a}, basis has dim {basis.dim}")


def bloch_from_density(rho: DensityMatrix, basis: GeneratorBasis) -> BlochVector:
    _check_dims(rho.dim, basis)
    v = np.einsum("aij,ji->a", basis.generators, rho.matrix)
    return BlochVector(rho.dim, v.real)


def density_matrix_from_coords(coords: np.ndarray, basis: GeneratorBasis) -> np.ndarray:
    """Raw (1/N)(I + sum_n c_n l_n); also used for pseudodensity reconstruction."""
    n = basis.dim
    return (np.eye(n) + np.einsum("a,aij->ij", coords, basis.generators)) / n


def density_from_bloch(v: BlochVector, basis: GeneratorBasis) -> DensityMatrix:
    _check_dims(v.dim, basis)
    if not np.all(np.isfinite(v.coords)):
        raise ValueError("Bloch coordinates must be finite")
    return DensityMatrix(v.dim, density_matrix_from_coords(v.coords, basis))


def probability_vector_from_density(rho: DensityMatrix, basis: GeneratorBasis) -> ProbabilityVector:
    _check_dims(rho.dim, basis)
    p = np.einsum("akij,ji->ak", basis.projectors, rho.matrix)
    return ProbabilityVector(rho.dim, p.real)


def reconstruct_coords_matrix(p: ProbabilityVector, basis: GeneratorBasis) -> np.ndarray:
    """Matrix whose emergent expectations match p, with no normalization checks."""
    coords = np.sum(basis.eigenvalues * p.tuples, axis=1)
    return density_matrix_from_coords(coords, basis)


def expectations_from_probabilities(p: ProbabilityVector, basis: GeneratorBasis) -> BlochVector:
    _check_dims(p.dim, basis)
    err = p.tuple_sum_error()
    if err > MALFORMED_TOL:
        raise InconsistentProbabilities(f"tuple sums deviate from 1 by {err:.3g}")
    return BlochVector(p.dim, np.sum(basis.eigenvalues * p.tuples, axis=1))


def bloch_norm_check(v: BlochVector) -> dict:
    """Squared Bloch norm and whether it respects sum <l_n>^2 <= N - 1."""
    norm2 = float(np.dot(v.coords, v.coords))
    return {"norm2": norm2, "within_ball": norm2 <= v.dim - 1 + QUANTUM_TOL}


def positivity_check(rho: DensityMatrix) -> dict:
    lo = float(np.linalg.eigvalsh(rho.matrix)[0])
    return {"min_eigenvalue": lo, "is_quantum": lo >= -QUANTUM_TOL}


def overlap_condition(v1: BlochVector, v2: BlochVector) -> dict:
    """Necessary condition v1 . v2 >= -1 for two valid quantum states."""
    if v1.dim != v2.dim:
        raise DimensionError(f"dims differ: {v1.dim} vs {v2.dim}")
    dot = float(np.dot(v1.coords, v2.coords))
    return {"dot": dot, "satisfied": dot >= -1.0 - QUANTUM_TOL}


def random_density(n: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Random valid density matrix from a Ginibre draw (test and demo helper)."""
    rank = n if rank is None else rank
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    m = g @ g.conj().T
    return DensityMatrix(n, m / np.trace(m).real)
