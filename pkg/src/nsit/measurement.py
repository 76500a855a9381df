"""Noninvasive collapse, pseudodensity reconstruction and the interference witness."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import TransferMatrix, expm_taylor
from .errors import DimensionError, InconsistentProbabilities
from .gellmann import GeneratorBasis
from .states import MALFORMED_TOL, DensityMatrix, ProbabilityVector, density_matrix_from_coords

GAMMA_TOL = 1e-10  # eigenvalues below -GAMMA_TOL count toward gamma
SCAN_TOL = 1e-8  # evolved components below -SCAN_TOL count as negative
CROSSING_TOL = 1e-6


@dataclass(frozen=True)
class MeasurementRecord:
    """Outcome k (eigenvalue index, descending order) observed for generator n.

    Both indices are zero-based.
    """

    n: int
    k: int

    def check(self, dim: int):
        if not (0 <= self.n < dim * dim - 1 and 0 <= self.k < dim):
            raise IndexError(f"measurement ({self.n}, {self.k}) out of range for N={dim}")


@dataclass(frozen=True, eq=False)
class WitnessReport:
    gamma: float
    negative_eigenvalues: np.ndarray
    spectrum: np.ndarray

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "negative_eigenvalues": self.negative_eigenvalues.tolist(),
            "spectrum": self.spectrum.tolist(),
        }


@dataclass(frozen=True)
class ScanReport:
    violating: bool
    # (grid time, n, k, value) of the most negative component at the first offending grid time
    first_negative: tuple[float, int, int, float] | None
    # first threshold crossing, refined by bisection between grid points
    crossing_time: float | None = None

    def to_dict(self) -> dict:
        return {
            "violating": self.violating,
            "first_negative": list(self.first_negative) if self.first_negative else None,
            "crossing_time": self.crossing_time,
        }


def _require_normalized(p: ProbabilityVector):
    err = p.tuple_sum_error()
    if err > MALFORMED_TOL:
        raise InconsistentProbabilities(f"tuple sums deviate from 1 by {err:.3g}")


def collapse(p: ProbabilityVector, m: MeasurementRecord) -> ProbabilityVector:
    """Replace sector n by the one-hot tuple at k; all other sectors are untouched."""
    _require_normalized(p)
    m.check(p.dim)
    t = p.tuples.copy()
    t[m.n] = 0.0
    t[m.n, m.k] = 1.0
    return ProbabilityVector(p.dim, t)


def reconstruct_pseudodensity(p_post: ProbabilityVector, basis: GeneratorBasis) -> DensityMatrix:
    if p_post.dim != basis.dim:
        raise DimensionError(f"vector dim {p_post.dim} != basis dim {basis.dim}")
    _require_normalized(p_post)
    coords = np.sum(basis.eigenvalues * p_post.tuples, axis=1)
    return DensityMatrix(basis.dim, density_matrix_from_coords(coords, basis))


def gamma_from_spectrum(spectrum) -> float:
    spectrum = np.asarray(spectrum)
    return float(-spectrum[spectrum < -GAMMA_TOL].sum())


def witness_gamma(p: ProbabilityVector, m: MeasurementRecord, basis: GeneratorBasis) -> WitnessReport:
    rho = reconstruct_pseudodensity(collapse(p, m), basis)
    spectrum = np.linalg.eigvalsh(rho.matrix)
    neg = spectrum[spectrum < -GAMMA_TOL]
    return WitnessReport(gamma=float(-neg.sum()), negative_eigenvalues=neg, spectrum=spectrum)


def negativity_scan(p_post: ProbabilityVector, tm: TransferMatrix, t_grid) -> ScanReport:
    """Evolve along an ascending time grid and report the first negative component."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0:
        raise ValueError("time grid is empty")
    if np.any(np.diff(t_grid) < 0):
        raise ValueError("time grid must be sorted ascending")
    if p_post.dim != tm.dim:
        raise DimensionError(f"vector dim {p_post.dim} != transfer matrix dim {tm.dim}")

    gen = tm.entries
    cache: dict[float, np.ndarray] = {}

    def step(dt: float) -> np.ndarray:
        if dt not in cache:
            cache[dt] = expm_taylor(dt * gen)
        return cache[dt]

    p0 = p_post.flat
    prev_t, prev_p = 0.0, p0
    if t_grid[0] != 0.0:
        prev_p = expm_taylor(t_grid[0] * gen) @ p0
        prev_t = t_grid[0]
    for t in t_grid:
        p = prev_p if t == prev_t else step(float(t - prev_t)) @ prev_p
        idx = int(np.argmin(p))
        if p[idx] < -SCAN_TOL:
            n, k = divmod(idx, tm.dim)
            crossing = _refine_crossing(gen, prev_t, prev_p, float(t)) if t > prev_t else float(t)
            return ScanReport(True, (float(t), n, k, float(p[idx])), crossing)
        prev_t, prev_p = float(t), p
    return ScanReport(False, None, None)


def _refine_crossing(gen: np.ndarray, t_lo: float, p_lo: np.ndarray, t_hi: float) -> float:
    """Bisect for the earliest time the minimum component drops below -SCAN_TOL."""
    lo, hi = t_lo, t_hi
    while hi - lo > CROSSING_TOL:
        mid = 0.5 * (lo + hi)
        if np.min(expm_taylor((mid - t_lo) * gen) @ p_lo) < -SCAN_TOL:
            hi = mid
        else:
            lo = mid
    return hi
