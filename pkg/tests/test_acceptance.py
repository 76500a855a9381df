"""Acceptance criteria, one test per criterion.

Each test prints a ``[ACCEPT n] PASS|FAIL`` line (also collected into the
pytest terminal summary) before asserting.
"""
import time

import numpy as np
import pytest
from scipy.stats import binomtest

from nsit import classical
from nsit.classifier import TrainConfig, evaluate, train
from nsit.datagen import VIOLATING, GenerationConfig, generate_class, generate_dataset, oracle_label
from nsit.dynamics import (
    HamiltonianSpec,
    evolve_density_oracle,
    evolve_probabilities,
    random_hamiltonian,
    transfer_matrix,
)
from nsit.gellmann import CLOSURE_TOL, TOL, verify_basis
from nsit.measurement import MeasurementRecord, negativity_scan, witness_gamma
from nsit.qubit import delta_measure, gamma_closed_form, transfer_matrix_2level
from nsit.states import (
    DensityMatrix,
    ProbabilityVector,
    probability_vector_from_density,
    random_density,
)
from conftest import ACCEPTANCE_LINES, basis_for


def report(n, ok, detail, started):
    line = f"[ACCEPT {n:2d}] {'PASS' if ok else 'FAIL'}  {detail}  ({time.perf_counter() - started:.1f} s)"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def random_ball(rng, count, pure=False):
    v = rng.normal(size=(count, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    if not pure:
        v *= rng.uniform(size=(count, 1)) ** (1 / 3)
    return v


def test_criterion_01_qubit_transfer_matrix():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    worst = 0.0
    for b in rng.normal(scale=2.0, size=(20, 3)):
        got = transfer_matrix(HamiltonianSpec.from_field(*b), basis_for(2)).entries
        worst = max(worst, np.max(np.abs(got - transfer_matrix_2level(b).entries)))
    report(1, worst <= 1e-12, f"qubit transfer matrix, max entry error {worst:.2e}", t0)


def test_criterion_02_witness_values():
    t0 = time.perf_counter()
    b = basis_for(2)
    plus = probability_vector_from_density(DensityMatrix.from_ket([1, 1]), b)
    target = (np.sqrt(2) - 1) / 2
    err = max(abs(witness_gamma(plus, MeasurementRecord(1, k), b).gamma - target) for k in (0, 1))
    mixed = probability_vector_from_density(DensityMatrix.maximally_mixed(2), b)
    mixed_gammas = [witness_gamma(mixed, MeasurementRecord(a, k), b).gamma for a in range(3) for k in range(2)]
    ok = err <= 1e-12 and all(g == 0.0 for g in mixed_gammas)
    report(2, ok, f"|+x> along y error {err:.1e}; I/2 gammas over all {len(mixed_gammas)} (axis, outcome) pairs max {max(abs(g) for g in mixed_gammas):.1e}", t0)


def test_criterion_03_delta_gamma_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    id_err, worst_lhs = 0.0, 0.0
    for v in random_ball(rng, 10_000):
        g = gamma_closed_form(v)
        lhs = float(np.sum(g * (1 + g)))
        id_err = max(id_err, abs(delta_measure(v) - 4 / 3 * lhs))
        worst_lhs = max(worst_lhs, lhs)
    pure_err = 0.0
    for v in random_ball(rng, 1_000, pure=True):
        g = gamma_closed_form(v)
        pure_err = max(pure_err, abs(float(np.sum(g * (1 + g))) - 0.5))
    ok = id_err <= 1e-10 and worst_lhs <= 0.5 + 1e-9 and pure_err <= 1e-9
    report(3, ok, f"identity error {id_err:.1e}, max bound lhs {worst_lhs:.12f}, pure-state gap {pure_err:.1e}", t0)


def test_criterion_04_evolution_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    worst, worst_sum = 0.0, 0.0
    for n in (2, 3, 4, 5):
        b = basis_for(n)
        for _ in range(100):
            ham = random_hamiltonian(n, rng)
            rho = random_density(n, rng)
            t = rng.uniform(0, 5)
            got = evolve_probabilities(probability_vector_from_density(rho, b), transfer_matrix(ham, b), t)
            expected = probability_vector_from_density(evolve_density_oracle(rho, ham, t), b)
            worst = max(worst, np.max(np.abs(got.tuples - expected.tuples)))
            worst_sum = max(worst_sum, got.tuple_sum_error())
    ok = worst <= 1e-8 and worst_sum <= 1e-8
    report(4, ok, f"max deviation {worst:.2e}, max tuple-sum drift {worst_sum:.2e}", t0)


def test_criterion_05_negativity_scan():
    t0 = time.perf_counter()
    grid = np.linspace(0, np.pi, 629)
    tm = transfer_matrix(HamiltonianSpec.from_field(0, 0, 1), basis_for(2))
    hit = negativity_scan(ProbabilityVector(2, [1, 0, 1, 0, 0.5, 0.5]), tm, grid)
    rng = np.random.default_rng(5)
    b = basis_for(2)
    false_hits = 0
    for _ in range(100):
        p = probability_vector_from_density(random_density(2, rng, rank=1 + int(rng.integers(2))), b)
        tm_r = transfer_matrix(HamiltonianSpec.from_field(*rng.normal(size=3)), b)
        false_hits += negativity_scan(p, tm_r, grid).violating
    ok = hit.violating and hit.first_negative[0] > 0 and false_hits == 0
    report(5, ok, f"collapsed start negative at t={hit.first_negative[0]:.4f} (value {hit.first_negative[3]:.2e}); "
           f"{false_hits}/100 valid starts negative", t0)


def test_criterion_06_classical_oracle():
    t0 = time.perf_counter()
    ens = classical.sample_ensemble("uniform-sphere", 1_000_000, seed=6)
    worst = 0.0
    ok = True
    for t in (0.5, 1.5):
        for name, obs in classical.OBSERVABLES.items():
            r = classical.nsit_residual(ens, (0, 0, 1), "x", t, obs)
            ok &= r["residual"] < 3 * r["stderr"]
            worst = max(worst, r["residual"] / r["stderr"])
    report(6, ok, f"max residual {worst:.2e} standard errors over 6 cases", t0)


@pytest.mark.slow
def test_criterion_07_gamma_grows_with_dimension():
    t0 = time.perf_counter()
    means = {}
    for n in (2, 4, 6):
        examples, _ = generate_class(GenerationConfig(n, 100_000, seed=7), VIOLATING)
        means[n] = float(np.mean([e.gamma for e in examples]))
    ok = means[2] < means[4] < means[6]
    report(7, ok, "mean gamma " + ", ".join(f"N={n}: {m:.4f}" for n, m in means.items()), t0)


def test_criterion_08_dataset_audit():
    t0 = time.perf_counter()
    data, _ = generate_dataset(GenerationConfig(4, 10_000, seed=8))
    b = basis_for(4)
    idx = np.random.default_rng(80).choice(len(data), size=len(data) // 100, replace=False)
    sub = [data[i] for i in idx]
    mismatches = sum(oracle_label(e.vector, b) != e.label for e in sub)
    negatives = sum(e.vector.min_component() < 0 for e in sub)
    sum_err = max(e.vector.tuple_sum_error() for e in sub)
    ok = len(data) == 20_000 and mismatches == 0 and negatives == 0 and sum_err <= 1e-9
    report(8, ok, f"{len(sub)} audited: {mismatches} label mismatches, {negatives} with negative components, "
           f"max tuple-sum error {sum_err:.1e}", t0)


def test_criterion_09_classifier():
    t0 = time.perf_counter()
    train_set, _ = generate_dataset(GenerationConfig(2, 5_000, seed=9))
    test_set, _ = generate_dataset(GenerationConfig(2, 1_000, seed=90))
    model = train(train_set, TrainConfig(epochs=2000, learning_rate=10.0, seed=9))
    m = evaluate(model, test_set)
    hits = m.tp + m.tn
    lower = binomtest(hits, m.total).proportion_ci(confidence_level=0.99).low
    ok = lower > 0.5 and m.accuracy >= 0.85
    report(9, ok, f"held-out accuracy {m.accuracy:.4f} on {m.total}, 99% lower bound {lower:.4f}", t0)


def test_criterion_10_basis_algebra():
    t0 = time.perf_counter()
    worst = {}
    for n in range(2, 9):
        for key, val in verify_basis(basis_for(n)).items():
            worst[key] = max(worst.get(key, 0.0), val)
    ok = all(v <= (CLOSURE_TOL if k == "closure" else TOL) for k, v in worst.items())
    report(10, ok, "N=2..8 worst residuals " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()), t0)
