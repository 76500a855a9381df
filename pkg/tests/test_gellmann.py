import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nsit.errors import DimensionError
from nsit.gellmann import build_basis, structure_constants, verify_basis
from conftest import basis_for

PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]])


def test_qubit_basis_is_pauli():
    b = build_basis(2)
    np.testing.assert_allclose(b.generators, PAULI, atol=0)
    gram = np.einsum("aij,bji->ab", b.generators, b.generators)
    np.testing.assert_allclose(gram, 2 * np.eye(3))


def test_sigma_z_spectrum():
    b = build_basis(2)
    np.testing.assert_allclose(b.eigenvalues[2], [1, -1])
    np.testing.assert_allclose(b.projectors[2, 0], np.diag([1, 0]))
    np.testing.assert_allclose(b.projectors[2, 1], np.diag([0, 1]))


def test_qutrit_first_diagonal_generator():
    b = build_basis(3)
    # first diagonal generator sits after 3 symmetric + 3 antisymmetric ones
    g = b.generators[6]
    np.testing.assert_allclose(g, np.sqrt(1.5) * np.diag([1, -1, 0]), atol=1e-15)
    np.testing.assert_allclose(b.eigenvalues[6], [np.sqrt(1.5), 0, -np.sqrt(1.5)], atol=1e-15)
    assert sorted(np.linalg.eigvalsh(g)) == pytest.approx(sorted(b.eigenvalues[6]))


def test_pauli_structure_constant():
    g = structure_constants(build_basis(2))
    assert g[0, 1, 2] == pytest.approx(2.0)
    assert g[1, 0, 2] == pytest.approx(-2.0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_diagonal_slices_vanish(n):
    g = structure_constants(basis_for(n))
    for a in range(n * n - 1):
        assert np.all(g[a, a] == 0)


def test_qutrit_structure_constants_match_least_squares_expansion():
    b = build_basis(3)
    gens = b.generators
    # expand each commutator in the generator basis by solving a linear system
    design = gens.reshape(8, -1).T
    expected = np.zeros((8, 8, 8))
    for a in range(8):
        for c in range(8):
            comm = gens[a] @ gens[c] - gens[c] @ gens[a]
            coef, *_ = np.linalg.lstsq(design, (comm / 1j).reshape(-1), rcond=None)
            expected[a, c] = coef.real
    np.testing.assert_allclose(structure_constants(b), expected, atol=1e-10)


@pytest.mark.parametrize("n", range(2, 9))
def test_all_invariants_hold(n):
    r = verify_basis(basis_for(n))
    assert r["hermiticity"] <= 1e-12
    assert r["trace"] <= 1e-12
    assert r["orthonormality"] <= 1e-10
    assert r["spectral"] <= 1e-10
    assert r["closure"] <= 1e-9


@pytest.mark.parametrize("n", range(2, 9))
def test_eigenvalues_descending_and_match_numpy(n):
    b = basis_for(n)
    assert np.all(np.diff(b.eigenvalues, axis=1) <= 0)
    for g, ev in zip(b.generators, b.eigenvalues):
        np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(g))[::-1], ev, atol=1e-12)


def test_projectors_are_rank_one():
    b = basis_for(4)
    ranks = np.linalg.matrix_rank(b.flat_projectors, tol=1e-9)
    assert np.all(ranks == 1)


def test_deterministic():
    a, b = build_basis(5), build_basis(5)
    assert np.array_equal(a.projectors, b.projectors)


def test_zeroed_generator_shows_in_report():
    b = build_basis(3)
    gens = b.generators.copy()
    gens[4] = 0
    broken = dataclasses.replace(b, generators=gens)
    assert verify_basis(broken)["orthonormality"] == pytest.approx(3.0)


def test_verify_does_not_mutate():
    b = build_basis(3)
    before = b.generators.copy()
    verify_basis(b)
    assert np.array_equal(before, b.generators)


@pytest.mark.parametrize("bad", [1, 0, -3, 2.5])
def test_invalid_dimension(bad):
    with pytest.raises(DimensionError):
        build_basis(bad)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 6), st.integers(0, 34), st.integers(0, 34))
def test_structure_tensor_antisymmetric(n, a, c):
    m = n * n - 1
    a, c = a % m, c % m
    g = basis_for(n).structure
    np.testing.assert_allclose(g[a, c], -g[c, a], atol=1e-12)
