"""Monte Carlo ensembles of classical spins, the NSIT-respecting reference theory.

Spins precess under dS/dt = A(B) S with

    A(B) = [[0, Bz, -By], [-Bz, 0, Bx], [By, -Bx, 0]],

integrated exactly by a Rodrigues rotation.  Measuring S_a keeps the samples
whose sign eps(S_a) matches the outcome, with eps(0) = +1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import EmptyConditional

AXES = {"x": 0, "y": 1, "z": 2}
DISTRIBUTIONS = ("uniform-sphere", "gaussian", "point-mass")


@dataclass(frozen=True, eq=False)
class SpinEnsemble:
    samples: np.ndarray  # (n, 3)
    seed: int | None = None

    def __post_init__(self):
        s = np.array(self.samples, dtype=float).reshape(-1, 3)
        if len(s) < 1:
            raise EmptyConditional("ensemble has no samples")
        if not np.all(np.isfinite(s)):
            raise ValueError("spin components must be finite")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    def __len__(self):
        return len(self.samples)


@dataclass(frozen=True, eq=False)
class ClassicalMarginals:
    probs: np.ndarray  # (3, 2): axis x outcome (+1, -1)
    stderr: np.ndarray  # (3,)

    @property
    def flat(self) -> np.ndarray:
        return self.probs.reshape(-1)


def _axis(axis) -> int:
    if isinstance(axis, str):
        return AXES[axis]
    if axis not in (0, 1, 2):
        raise ValueError(f"axis must be x, y, z or 0..2, got {axis!r}")
    return int(axis)


def sample_ensemble(dist: str, n: int, seed: int, **params) -> SpinEnsemble:
    """Draw n spins from a named distribution.

    uniform-sphere(radius=1), gaussian(sigma=1), point-mass(spin=(sx, sy, sz)).
    """
    if n < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    if dist == "uniform-sphere":
        v = rng.normal(size=(n, 3))
        v *= params.get("radius", 1.0) / np.linalg.norm(v, axis=1, keepdims=True)
    elif dist == "gaussian":
        v = params.get("sigma", 1.0) * rng.normal(size=(n, 3))
    elif dist == "point-mass":
        v = np.tile(np.asarray(params.get("spin", (0.0, 0.0, 1.0)), dtype=float), (n, 1))
    else:
        raise ValueError(f"unknown distribution {dist!r}; expected one of {DISTRIBUTIONS}")
    return SpinEnsemble(v, seed)


def precession_generator(b) -> np.ndarray:
    bx, by, bz = map(float, b)
    return np.array([[0.0, bz, -by], [-bz, 0.0, bx], [by, -bx, 0.0]])


def rotation(b, t: float) -> np.ndarray:
    """exp(t A(B)) in closed form."""
    a = precession_generator(b)
    w = math.sqrt(sum(float(x) ** 2 for x in b))
    if w == 0.0 or t == 0.0:
        return np.eye(3)
    k = a / w
    th = w * t
    return np.eye(3) + math.sin(th) * k + (1.0 - math.cos(th)) * (k @ k)


def evolve_ensemble(e: SpinEnsemble, b, t: float) -> SpinEnsemble:
    return SpinEnsemble(e.samples @ rotation(b, t).T, e.seed)


def _sign_mask(samples: np.ndarray, axis: int, outcome: int) -> np.ndarray:
    up = samples[:, axis] >= 0.0
    return up if outcome == 1 else ~up


def coarse_grain(e: SpinEnsemble) -> ClassicalMarginals:
    n = len(e)
    plus = (e.samples >= 0.0).sum(axis=0) / n
    probs = np.stack([plus, 1.0 - plus], axis=1)
    return ClassicalMarginals(probs, np.sqrt(plus * (1.0 - plus) / n))


def conditional_update(e: SpinEnsemble, axis, outcome: int) -> tuple[SpinEnsemble, float]:
    """Keep samples with eps(S_axis) == outcome; return them with the survivor fraction."""
    if outcome not in (1, -1):
        raise ValueError(f"outcome must be +1 or -1, got {outcome!r}")
    mask = _sign_mask(e.samples, _axis(axis), outcome)
    kept = int(mask.sum())
    if kept == 0:
        raise EmptyConditional(f"no samples with outcome {outcome:+d} on axis {axis}")
    return SpinEnsemble(e.samples[mask], e.seed), kept / len(e)


def nsit_residual(
    e: SpinEnsemble,
    b,
    axis,
    t: float,
    observable: Callable[[np.ndarray], np.ndarray],
    reference: SpinEnsemble | None = None,
) -> dict:
    """|E_measured - E_unmeasured| for an observable at time t after measuring S_axis at 0.

    The measured branch mixes the conditioned-then-evolved ensembles with their
    outcome weights.  The unmeasured branch evolves ``reference`` if given (an
    independent draw, which makes the comparison a genuine two-sample test),
    otherwise ``e`` itself.  ``observable`` maps an (n, 3) array to n values.
    """
    a = _axis(axis)
    rot = rotation(b, t)

    mixed = 0.0
    parts = []
    for s in (1, -1):
        mask = _sign_mask(e.samples, a, s)
        if not mask.any():
            continue
        vals = np.asarray(observable(e.samples[mask] @ rot.T), dtype=float)
        w = mask.sum() / len(e)
        mixed += w * vals.mean()
        parts.append(vals)
    pooled = np.concatenate(parts)
    # the weighted mixture has the same spread as the pooled sample
    var_mixed = pooled.var(ddof=1) / len(pooled) if len(pooled) > 1 else 0.0

    ref = e if reference is None else reference
    plain = np.asarray(observable(ref.samples @ rot.T), dtype=float)
    unmeasured = plain.mean()
    if reference is None:
        stderr = math.sqrt(var_mixed)
    else:
        var_plain = plain.var(ddof=1) / len(plain) if len(plain) > 1 else 0.0
        stderr = math.sqrt(var_mixed + var_plain)
    return {
        "residual": float(abs(mixed - unmeasured)),
        "stderr": float(stderr),
        "measured": float(mixed),
        "unmeasured": float(unmeasured),
    }


OBSERVABLES: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sx": lambda s: s[:, 0],
    "sy": lambda s: s[:, 1],
    "sz": lambda s: s[:, 2],
}
