"""Pseudorandom labeled probability vectors for NSIT classification.

A state is built as sum_m q_m |f_m><f_m| from a Gram-Schmidt frame {f_m} and
a spectrum q.  Conforming (label 0) spectra are uniform on the probability
simplex; violating (label 1) spectra are N uniform draws on [low, high],
shifted to sum to one and redrawn until the smallest entry is negative.  The
probability vector is read off with the Gell-Mann projectors and any vector
with a negative component is discarded.

Seeding: attempts are grouped in blocks of ``block_size``; block b of class c
draws from ``default_rng([seed, c, b])``.  Output therefore depends only on the
configuration, never on how blocks are distributed over workers.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .errors import SamplerError
from .gellmann import GeneratorBasis, build_basis
from .measurement import GAMMA_TOL
from .states import ProbabilityVector, reconstruct_coords_matrix

CONFORMING, VIOLATING = 0, 1
REJECT_TOL = 1e-12
PIVOT_TOL = 1e-8
MAX_FRAME_RETRIES = 100
MIN_ACCEPTANCE = 0.01
ACCEPTANCE_WINDOW = 100_000


@dataclass(frozen=True)
class GenerationConfig:
    dim: int
    count: int  # examples per class
    seed: int
    low: float = -0.5
    high: float = 1.0
    block_size: int = 4096
    workers: int = 1

    def validate(self):
        if self.dim < 2:
            raise ValueError(f"dim must be >= 2, got {self.dim}")
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if not self.low < 0 < self.high:
            raise ValueError("violating sampler needs low < 0 < high")
        if self.block_size < 1 or self.workers < 1:
            raise ValueError("block_size and workers must be positive")

    def metadata(self) -> dict:
        meta = asdict(self)
        meta.pop("workers")
        meta["samplers"] = {
            "frame": "complex standard normal columns, classical Gram-Schmidt, "
            f"redraw when a pivot norm < {PIVOT_TOL:g}",
            "conforming": "uniform on the simplex (normalized i.i.d. Exp(1))",
            "violating": f"i.i.d. U[{self.low:g}, {self.high:g}], shifted by (1 - sum)/N, "
            f"redrawn until min < -{GAMMA_TOL:g}",
            "filter": f"discard vectors with a component < -{REJECT_TOL:g}",
            "seeding": "default_rng([seed, label, block_index])",
        }
        return meta


@dataclass(frozen=True, eq=False)
class LabeledExample:
    vector: ProbabilityVector
    label: int
    gamma: float
    # attempt index within the (seed, label) stream
    index: int = -1


def gram_schmidt(vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormalize the columns of each matrix in a (B, N, N) stack.

    Returns the orthonormal stack and, per matrix, the smallest pivot norm
    encountered (small pivots flag near-linear dependence).
    """
    v = np.array(vectors, dtype=complex, copy=True)
    if v.ndim == 2:
        q, piv = gram_schmidt(v[None])
        return q[0], piv[:1]
    n = v.shape[-1]
    q = np.empty_like(v)
    pivots = np.full(v.shape[0], np.inf)
    for j in range(n):
        col = v[:, :, j]
        for i in range(j):
            col = col - q[:, :, i] * np.einsum("bk,bk->b", q[:, :, i].conj(), col)[:, None]
        norm = np.linalg.norm(col, axis=1)
        pivots = np.minimum(pivots, norm)
        q[:, :, j] = col / np.where(norm > 0, norm, 1.0)[:, None]
    return q, pivots


def random_frames(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """(size, n, n) stack whose columns are orthonormal frames."""
    raw = rng.normal(size=(size, n, n)) + 1j * rng.normal(size=(size, n, n))
    frames, pivots = gram_schmidt(raw)
    for _ in range(MAX_FRAME_RETRIES):
        bad = pivots < PIVOT_TOL
        if not bad.any():
            return frames
        k = int(bad.sum())
        redraw = rng.normal(size=(k, n, n)) + 1j * rng.normal(size=(k, n, n))
        frames[bad], pivots[bad] = gram_schmidt(redraw)
    raise SamplerError("Gram-Schmidt kept hitting linearly dependent draws")


def random_frame(n: int, seed) -> np.ndarray:
    """N orthonormal complex vectors, returned as the columns of an N x N matrix."""
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    return random_frames(n, 1, np.random.default_rng(seed))[0]


def conforming_spectra(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    e = rng.exponential(size=(size, n))
    return e / e.sum(axis=1, keepdims=True)


def violating_spectra(n: int, size: int, rng: np.random.Generator, low=-0.5, high=1.0) -> np.ndarray:
    out = np.empty((size, n))
    todo = np.arange(size)
    for _ in range(10_000):
        x = rng.uniform(low, high, size=(len(todo), n))
        x += (1.0 - x.sum(axis=1, keepdims=True)) / n
        ok = x.min(axis=1) < -GAMMA_TOL
        out[todo[ok]] = x[ok]
        todo = todo[~ok]
        if todo.size == 0:
            return out
    raise SamplerError("violating spectrum sampler never produced a negative entry")


def probability_vectors(spectra: np.ndarray, frames: np.ndarray, basis: GeneratorBasis) -> np.ndarray:
    """(B, M*N) emergent probabilities of sum_m q_m |f_m><f_m|."""
    rho = np.einsum("bim,bm,bjm->bij", frames, spectra, frames.conj())
    return np.einsum("rij,bji->br", basis.flat_projectors, rho).real


def state_from_spectrum(spectrum, frame, basis: GeneratorBasis, label: int, index: int = -1):
    """Build one example from an explicit spectrum and frame; None if filtered out."""
    spectrum = np.asarray(spectrum, dtype=float)
    p = probability_vectors(spectrum[None], np.asarray(frame)[None], basis)[0]
    if p.min() < -REJECT_TOL:
        return None
    gamma = float(-spectrum[spectrum < 0].sum()) if label == VIOLATING else 0.0
    return LabeledExample(ProbabilityVector(basis.dim, p), label, gamma, index)


def _block(cfg: GenerationConfig, basis: GeneratorBasis, label: int, block: int):
    """Run one block of attempts; returns (attempt offsets, vectors, gammas) of survivors."""
    rng = np.random.default_rng([cfg.seed, label, block])
    size = cfg.block_size
    if label == CONFORMING:
        spectra = conforming_spectra(cfg.dim, size, rng)
    else:
        spectra = violating_spectra(cfg.dim, size, rng, cfg.low, cfg.high)
    frames = random_frames(cfg.dim, size, rng)
    p = probability_vectors(spectra, frames, basis)
    keep = p.min(axis=1) >= -REJECT_TOL
    gammas = -np.where(spectra < 0, spectra, 0.0).sum(axis=1)
    if label == CONFORMING:
        gammas[:] = 0.0
    return np.flatnonzero(keep), p[keep], gammas[keep]


def generate_state(cfg: GenerationConfig, label: int, seed) -> LabeledExample | None:
    """Single attempt for one class.  Returns None when the filter rejects it."""
    cfg.validate()
    rng = np.random.default_rng(seed)
    basis = build_basis(cfg.dim)
    if label == CONFORMING:
        spec = conforming_spectra(cfg.dim, 1, rng)[0]
    elif label == VIOLATING:
        spec = violating_spectra(cfg.dim, 1, rng, cfg.low, cfg.high)[0]
    else:
        raise ValueError(f"label must be 0 or 1, got {label!r}")
    return state_from_spectrum(spec, random_frames(cfg.dim, 1, rng)[0], basis, label)


def generate_class(cfg: GenerationConfig, label: int, basis: GeneratorBasis | None = None):
    """``cfg.count`` accepted examples of one class plus the observed acceptance rate."""
    basis = basis or build_basis(cfg.dim)
    examples: list[LabeledExample] = []
    attempts = 0
    next_block = 0
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        while len(examples) < cfg.count:
            ids = range(next_block, next_block + cfg.workers)
            next_block += cfg.workers
            for b, (offsets, vecs, gammas) in zip(ids, pool.map(lambda b: _block(cfg, basis, label, b), ids)):
                start = b * cfg.block_size
                take = min(len(offsets), cfg.count - len(examples))
                for off, vec, g in zip(offsets[:take], vecs[:take], gammas[:take]):
                    examples.append(LabeledExample(ProbabilityVector(cfg.dim, vec), label, float(g), start + int(off)))
                if len(examples) == cfg.count:
                    attempts = start + int(offsets[take - 1]) + 1 if take else start
                    break
                attempts = start + cfg.block_size
                if attempts >= ACCEPTANCE_WINDOW and len(examples) < MIN_ACCEPTANCE * attempts:
                    raise SamplerError(
                        f"acceptance rate {len(examples) / attempts:.2%} for label {label} "
                        f"after {attempts} attempts; sampler misconfigured"
                    )
    return examples, len(examples) / attempts


def generate_dataset(cfg: GenerationConfig) -> tuple[list[LabeledExample], dict]:
    """Balanced, shuffled dataset and its metadata (config, samplers, acceptance rates)."""
    cfg.validate()
    basis = build_basis(cfg.dim)
    conforming, rate0 = generate_class(cfg, CONFORMING, basis)
    violating, rate1 = generate_class(cfg, VIOLATING, basis)
    data = conforming + violating
    order = np.random.default_rng([cfg.seed, 2]).permutation(len(data))
    meta = cfg.metadata()
    meta["acceptance_rate"] = {"conforming": rate0, "violating": rate1}
    return [data[i] for i in order], meta


def gamma_histogram(gammas, bins=50) -> dict:
    """Histogram of witness values and their mean."""
    g = np.asarray([x.gamma if isinstance(x, LabeledExample) else x for x in gammas], dtype=float)
    if g.size == 0:
        raise ValueError("no gamma values to histogram")
    counts, edges = np.histogram(g, bins=bins)
    return {"counts": counts, "edges": edges, "mean": float(g.mean())}


def sample_bloch_points(count: int, seed) -> tuple[np.ndarray, np.ndarray]:
    """Qubit Bloch triples: ``count`` inside the unit ball and ``count`` in the cube but outside it."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    inside, outside = [], []
    n_in = n_out = 0
    while n_in < count or n_out < count:
        pts = rng.uniform(-1.0, 1.0, size=(4 * count, 3))
        r2 = np.einsum("ij,ij->i", pts, pts)
        inside.append(pts[r2 <= 1.0])
        outside.append(pts[r2 > 1.0])
        n_in += len(inside[-1])
        n_out += len(outside[-1])
    return np.concatenate(inside)[:count], np.concatenate(outside)[:count]


def oracle_label(p: ProbabilityVector, basis: GeneratorBasis) -> int:
    """Label by eigendecomposition of the matrix reconstructed from p (tomography)."""
    rho = reconstruct_coords_matrix(p, basis)
    return int(np.linalg.eigvalsh(rho)[0] < -GAMMA_TOL)
