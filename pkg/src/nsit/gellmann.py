"""Generalized Gell-Mann generators of SU(N), scaled so that Tr[l_n l_m] = N delta_nm.

Generators are ordered symmetric off-diagonal, antisymmetric off-diagonal,
diagonal; off-diagonal pairs (j, k), j < k, run in lexicographic order.  For
N = 2 this yields (sigma_x, sigma_y, sigma_z).

Each generator carries a fixed rank-1 spectral decomposition.  Eigenvalues are
sorted in descending order; degenerate eigenvalues keep the order of the
canonical eigenvectors (analytic superpositions first, then standard basis
vectors by index), so the projector list is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import DimensionError

# construction tolerance / algebraic closure tolerance
TOL = 1e-10
CLOSURE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GeneratorBasis:
    dim: int
    generators: np.ndarray  # (M, N, N) complex, M = N^2 - 1
    eigenvalues: np.ndarray  # (M, N) real, descending per row
    projectors: np.ndarray  # (M, N, N, N) complex rank-1 projectors
    structure: np.ndarray = field(repr=False)  # (M, M, M) real

    @property
    def size(self) -> int:
        """Number of generators, N^2 - 1."""
        return self.dim * self.dim - 1

    @property
    def flat_projectors(self) -> np.ndarray:
        """Projectors reshaped to (M*N, N, N) in probability-vector order."""
        n = self.dim
        return self.projectors.reshape(self.size * n, n, n)

    @property
    def flat_eigenvalues(self) -> np.ndarray:
        return self.eigenvalues.reshape(-1)


def _spectral_data(n: int):
    """Yield (matrix, [(eigenvalue, eigenvector), ...]) for every generator, unscaled."""
    basis = np.eye(n, dtype=complex)
    pairs = list(combinations(range(n), 2))
    r2 = 1.0 / np.sqrt(2.0)

    for j, k in pairs:
        m = np.zeros((n, n), dtype=complex)
        m[j, k] = m[k, j] = 1.0
        others = [(0.0, basis[i]) for i in range(n) if i not in (j, k)]
        spec = [(1.0, r2 * (basis[j] + basis[k]))] + others + [(-1.0, r2 * (basis[j] - basis[k]))]
        yield m, spec

    for j, k in pairs:
        m = np.zeros((n, n), dtype=complex)
        m[j, k] = -1j
        m[k, j] = 1j
        others = [(0.0, basis[i]) for i in range(n) if i not in (j, k)]
        spec = [(1.0, r2 * (basis[j] + 1j * basis[k]))] + others + [(-1.0, r2 * (basis[j] - 1j * basis[k]))]
        yield m, spec

    for l in range(1, n):
        a = np.sqrt(2.0 / (l * (l + 1)))
        diag = np.array([a] * l + [-l * a] + [0.0] * (n - l - 1))
        spec = [(diag[i], basis[i]) for i in range(n)]
        # stable sort keeps index order among ties
        spec.sort(key=lambda pair: -pair[0])
        yield np.diag(diag).astype(complex), spec


def structure_constants(basis: GeneratorBasis) -> np.ndarray:
    """Real tensor g[n, m, l] with [l_n, l_m] = i sum_l g[n, m, l] l_l."""
    return _structure(basis.generators, basis.dim)


def _structure(gens: np.ndarray, n: int) -> np.ndarray:
    prod = np.einsum("aij,bjk->abik", gens, gens)
    comm = prod - prod.transpose(1, 0, 2, 3)
    g = np.einsum("abij,cji->abc", comm, gens) / (1j * n)
    return g.real.copy()


def build_basis(n: int) -> GeneratorBasis:
    """Scaled generalized Gell-Mann basis for dimension ``n`` (n >= 2)."""
    if int(n) != n or n < 2:
        raise DimensionError(f"dimension must be an integer >= 2, got {n!r}")
    n = int(n)
    scale = np.sqrt(n / 2.0)

    gens, evals, projs = [], [], []
    for m, spec in _spectral_data(n):
        gens.append(scale * m)
        evals.append([scale * v for v, _ in spec])
        projs.append([np.outer(vec, vec.conj()) for _, vec in spec])

    gens = np.array(gens)
    evals = np.array(evals)
    projs = np.array(projs)
    g = _structure(gens, n)
    for arr in (gens, evals, projs, g):
        arr.setflags(write=False)
    return GeneratorBasis(dim=n, generators=gens, eigenvalues=evals, projectors=projs, structure=g)


def verify_basis(basis: GeneratorBasis) -> dict[str, float]:
    """Max residual of each basis invariant.  Never mutates the basis."""
    n = basis.dim
    gens = basis.generators
    eye = np.eye(n)

    herm = np.max(np.abs(gens - gens.conj().transpose(0, 2, 1)))
    trace = np.max(np.abs(np.trace(gens, axis1=1, axis2=2)))
    gram = np.einsum("aij,bji->ab", gens, gens)
    ortho = np.max(np.abs(gram - n * np.eye(len(gens))))

    recon = np.einsum("ak,akij->aij", basis.eigenvalues, basis.projectors)
    spectral = np.max(np.abs(recon - gens))
    completeness = np.max(np.abs(basis.projectors.sum(axis=1) - eye))
    pp = np.einsum("akij,aljm->aklim", basis.projectors, basis.projectors)
    kron = np.eye(n)[None, :, :, None, None]
    idem = np.max(np.abs(pp - kron * basis.projectors[:, :, None, :, :]))

    prod = np.einsum("aij,bjk->abik", gens, gens)
    comm = prod - prod.transpose(1, 0, 2, 3)
    expanded = 1j * np.einsum("abc,cij->abij", basis.structure, gens)
    closure = np.max(np.abs(comm - expanded))
    antisym = np.max(np.abs(basis.structure + basis.structure.transpose(1, 0, 2)))

    return {
        "hermiticity": float(herm),
        "trace": float(trace),
        "orthonormality": float(ortho),
        "spectral": float(max(spectral, completeness, idem)),
        "closure": float(max(closure, antisym)),
    }
