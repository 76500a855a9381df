import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from nsit.dynamics import (
    HamiltonianSpec,
    TransferMatrix,
    bloch_generator,
    evolve_bloch,
    evolve_density_oracle,
    evolve_probabilities,
    expm_taylor,
    propagator,
    random_hamiltonian,
    transfer_matrix,
)
from nsit.errors import DimensionError, NotHermitian
from nsit.qubit import transfer_matrix_2level
from nsit.states import BlochVector, DensityMatrix, bloch_from_density, probability_vector_from_density, random_density
from conftest import basis_for


def test_bloch_generator_for_z_field():
    h = bloch_generator(HamiltonianSpec.from_field(0, 0, 1), basis_for(2))
    # d<sx>/dt = -Bz <sy>, d<sy>/dt = Bz <sx> under H = sz/2
    np.testing.assert_allclose(h, [[0, -1, 0], [1, 0, 0], [0, 0, 0]], atol=1e-15)


def test_bloch_generator_antisymmetric(rng):
    for n in (2, 3, 4):
        h = bloch_generator(random_hamiltonian(n, rng), basis_for(n))
        np.testing.assert_allclose(h, -h.T, atol=1e-12)


def test_bloch_evolution_quarter_turn():
    h = bloch_generator(HamiltonianSpec.from_field(0, 0, 1), basis_for(2))
    v = evolve_bloch(BlochVector(2, [1, 0, 0]), h, np.pi / 2)
    np.testing.assert_allclose(v.coords, [0, 1, 0], atol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bloch_evolution_matches_heisenberg_oracle(n, rng):
    b = basis_for(n)
    ham = random_hamiltonian(n, rng)
    rho = random_density(n, rng)
    h = bloch_generator(ham, b)
    v = evolve_bloch(bloch_from_density(rho, b), h, 1.7)
    expected = bloch_from_density(evolve_density_oracle(rho, ham, 1.7), b)
    np.testing.assert_allclose(v.coords, expected.coords, atol=1e-10)


def test_transfer_matrix_qubit_entry():
    tm = transfer_matrix(HamiltonianSpec.from_field(0, 0, 1), basis_for(2))
    assert tm.entries[0, 2] == pytest.approx(-0.5)


def test_transfer_matrix_matches_written_out_form(rng):
    for _ in range(5):
        b = rng.normal(size=3)
        tm = transfer_matrix(HamiltonianSpec.from_field(*b), basis_for(2))
        np.testing.assert_allclose(tm.entries, transfer_matrix_2level(b).entries, atol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_transfer_matrix_gives_instantaneous_rate(n, rng):
    # oracle: dp_n(k)/dt = -i Tr[P_n(k) [H, rho]] computed directly
    b = basis_for(n)
    ham = random_hamiltonian(n, rng)
    rho = random_density(n, rng)
    p = probability_vector_from_density(rho, b).flat
    rate = -1j * np.einsum("rij,ji->r", b.flat_projectors, ham.matrix @ rho.matrix - rho.matrix @ ham.matrix)
    np.testing.assert_allclose(transfer_matrix(ham, b).entries @ p, rate.real, atol=1e-12)


def test_columns_sum_to_zero_per_tuple(rng):
    b = basis_for(3)
    tm = transfer_matrix(random_hamiltonian(3, rng), b)
    sums = tm.entries.reshape(8, 3, -1).sum(axis=1)
    np.testing.assert_allclose(sums, 0, atol=1e-12)


def test_plus_x_precession_closed_form():
    b = basis_for(2)
    tm = transfer_matrix(HamiltonianSpec.from_field(0, 0, 1), b)
    p0 = probability_vector_from_density(DensityMatrix.from_ket([1, 1]), b)
    for t in np.linspace(0, 6, 13):
        p = evolve_probabilities(p0, tm, t).tuples
        assert p[0, 0] == pytest.approx((1 + np.cos(t)) / 2, abs=1e-12)
        assert p[1, 0] == pytest.approx((1 + np.sin(t)) / 2, abs=1e-12)
        assert p[2, 0] == pytest.approx(0.5, abs=1e-12)


def test_propagator_at_zero_is_identity(rng):
    tm = transfer_matrix(random_hamiltonian(3, rng), basis_for(3))
    assert np.array_equal(propagator(tm, 0.0), np.eye(24))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.floats(0.01, 40), st.integers(0, 2**31))
def test_expm_taylor_matches_scipy(size, scale, seed):
    a = np.random.default_rng(seed).normal(size=(size, size)) * scale / size
    expected = scipy.linalg.expm(a)
    got = expm_taylor(a)
    assert np.max(np.abs(got - expected)) <= 1e-10 * max(1.0, np.max(np.abs(expected)))


def test_expm_taylor_complex():
    a = 1j * np.array([[0, 1], [1, 0]]) * 0.7
    np.testing.assert_allclose(expm_taylor(a), scipy.linalg.expm(a), atol=1e-14)


def test_errors(rng):
    with pytest.raises(NotHermitian):
        HamiltonianSpec(2, [[0, 1], [0, 0]])
    with pytest.raises(DimensionError):
        TransferMatrix(2, np.zeros((5, 5)))
    with pytest.raises(DimensionError):
        transfer_matrix(random_hamiltonian(3, rng), basis_for(2))
    tm = transfer_matrix(HamiltonianSpec.from_field(0, 0, 1), basis_for(2))
    with pytest.raises(ValueError):
        propagator(tm, np.inf)
