"""Unitary dynamics in the Bloch and probability-vector representations.

hbar = 1 throughout, so Hamiltonian entries are angular frequencies.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NotHermitian
from .gellmann import GeneratorBasis
from .states import BlochVector, DensityMatrix, ProbabilityVector

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


@dataclass(frozen=True, eq=False)
class HamiltonianSpec:
    dim: int
    matrix: np.ndarray
    field: tuple[float, float, float] | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.dim, self.dim):
            raise DimensionError(f"expected {self.dim}x{self.dim} Hamiltonian, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > 1e-10:
            raise NotHermitian("Hamiltonian is not Hermitian")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_field(cls, bx: float, by: float, bz: float) -> "HamiltonianSpec":
        """Qubit Hamiltonian (1/2)(Bx sx + By sy + Bz sz)."""
        b = (float(bx), float(by), float(bz))
        return cls(2, 0.5 * np.einsum("a,aij->ij", b, PAULI), field=b)


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """Real generator of probability-vector dynamics, indexed by flattened (n, k)."""

    dim: int
    entries: np.ndarray

    def __post_init__(self):
        n = self.dim
        size = n * (n * n - 1)
        e = np.array(self.entries, dtype=float)
        if e.shape != (size, size):
            raise DimensionError(f"transfer matrix for N={n} must be {size}x{size}, got {e.shape}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)


def _check(h_spec: HamiltonianSpec, basis: GeneratorBasis):
    if h_spec.dim != basis.dim:
        raise DimensionError(f"Hamiltonian dim {h_spec.dim} != basis dim {basis.dim}")


def bloch_generator(h_spec: HamiltonianSpec, basis: GeneratorBasis) -> np.ndarray:
    """h[n, m] = -(i/N) Tr[l_m [l_n, H]], so d<l_n>/dt = sum_m h[n, m] <l_m>."""
    _check(h_spec, basis)
    gens, ham = basis.generators, h_spec.matrix
    comm = gens @ ham - ham @ gens
    h = -1j / basis.dim * np.einsum("bij,aji->ab", gens, comm)
    return h.real.copy()


def transfer_matrix(h_spec: HamiltonianSpec, basis: GeneratorBasis) -> TransferMatrix:
    """H[(n,k),(m,l)] = l_m(l) / (N i) Tr[l_m [P_n(k), H]]."""
    _check(h_spec, basis)
    n = basis.dim
    proj = basis.flat_projectors
    ham = h_spec.matrix
    comm = proj @ ham - ham @ proj
    k_coef = np.einsum("mij,rji->rm", basis.generators, comm) / (1j * n)
    entries = k_coef.real[:, :, None] * basis.eigenvalues[None, :, :]
    return TransferMatrix(n, entries.reshape(len(proj), -1))


def expm_taylor(a: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    """exp(a) by scaling and squaring with a truncated Taylor series.

    The matrix is scaled by 2^-s until its 1-norm is at most 1, the series is
    summed until a term's 1-norm drops below ``tol``, and the result is squared
    s times.  No eigendecomposition is involved.
    """
    a = np.asarray(a)
    norm = np.linalg.norm(a, 1) if a.size else 0.0
    s = max(0, int(np.ceil(np.log2(norm)))) if norm > 1.0 else 0
    scaled = a / 2.0**s
    result = np.eye(a.shape[0], dtype=a.dtype)
    term = result.copy()
    for j in range(1, 60):
        term = term @ scaled / j
        result = result + term
        if np.linalg.norm(term, 1) < tol:
            break
    for _ in range(s):
        result = result @ result
    return result


def propagator(tm: TransferMatrix, t: float) -> np.ndarray:
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    return expm_taylor(t * tm.entries)


def evolve_probabilities(p0: ProbabilityVector, tm: TransferMatrix, t: float) -> ProbabilityVector:
    """p(t) = exp(tH) p(0).  Negative components are kept; they signal interference."""
    if p0.dim != tm.dim:
        raise DimensionError(f"vector dim {p0.dim} != transfer matrix dim {tm.dim}")
    return ProbabilityVector(p0.dim, propagator(tm, t) @ p0.flat)


def evolve_density_oracle(rho0: DensityMatrix, h_spec: HamiltonianSpec, t: float) -> DensityMatrix:
    """Reference evolution e^{-iHt} rho e^{iHt} through an eigendecomposition of H."""
    if rho0.dim != h_spec.dim:
        raise DimensionError(f"state dim {rho0.dim} != Hamiltonian dim {h_spec.dim}")
    energies, vecs = np.linalg.eigh(h_spec.matrix)
    u = (vecs * np.exp(-1j * energies * t)) @ vecs.conj().T
    return DensityMatrix(rho0.dim, u @ rho0.matrix @ u.conj().T)


def evolve_bloch(v0: BlochVector, h: np.ndarray, t: float) -> BlochVector:
    h = np.asarray(h, dtype=float)
    if h.shape != (len(v0.coords),) * 2:
        raise DimensionError(f"generator shape {h.shape} does not match Bloch vector")
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    return BlochVector(v0.dim, expm_taylor(t * h) @ v0.coords)


def random_hamiltonian(n: int, rng: np.random.Generator, scale: float = 1.0) -> HamiltonianSpec:
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return HamiltonianSpec(n, scale * 0.5 * (g + g.conj().T))
