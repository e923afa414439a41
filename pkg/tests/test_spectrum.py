import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from subradiant.errors import IndexOutOfRange, InvalidPair, NotAGrid
from subradiant.geometry import LatticeDescriptor, generate_array, square_array
from subradiant.green import build_hamiltonian
from subradiant.spectrum import (classify_basis_irrep, decompose, decompose_vector, degenerate_clusters,
                                 diagonalize, standing_wave_basis, symmetrize, target_vector)

ns = st.integers(2, 14)


@settings(max_examples=40, deadline=None)
@given(ns)
def test_basis_orthonormal(n):
    b = np.column_stack([standing_wave_basis(n, mx, my) for mx in range(1, n + 1) for my in range(1, n + 1)])
    assert np.abs(b.T @ b - np.eye(n * n)).max() < 1e-10


@settings(max_examples=40, deadline=None)
@given(ns, st.integers(0, 2 ** 32 - 1))
def test_decomposition_round_trip(n, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=n * n) + 1j * rng.normal(size=n * n)
    v /= np.linalg.norm(v)
    d = decompose_vector(v, n)
    assert abs(d.weights().sum() - 1.0) < 1e-10
    assert np.abs(d.reconstruct() - v).max() < 1e-10


def test_harmonic_indexing():
    n = 6
    d = decompose_vector(standing_wave_basis(n, 2, 5), n)
    assert d.dominant(1)[0][0] == (2, 5)
    assert d.dominant(1)[0][1] == pytest.approx(1.0)


def test_closed_form_corner_values():
    # site (i, j) = (row, column); values for N = 12
    v = symmetrize(12, 10, 12, -1).reshape(12, 12)
    assert v[0, 1] == pytest.approx(7.680e-3, abs=5e-7)
    assert standing_wave_basis(12, 12, 12).reshape(12, 12)[0, 0] == pytest.approx(8.811e-3, abs=5e-7)


def test_basis_errors():
    with pytest.raises(IndexOutOfRange):
        standing_wave_basis(4, 0, 1)
    with pytest.raises(InvalidPair):
        symmetrize(6, 3, 4, 1)
    with pytest.raises(InvalidPair):
        symmetrize(6, 4, 4, -1)
    with pytest.raises(NotAGrid):
        decompose_vector(np.ones(10), 4)


@pytest.mark.parametrize("mx,my,sign,label", [(1, 1, None, "A1"), (2, 2, None, "B2"), (1, 3, -1, "B1"),
                                              (2, 4, -1, "A2"), (2, 4, 1, "B2"), (1, 2, None, "E")])
def test_basis_irreps(mx, my, sign, label):
    assert classify_basis_irrep(mx, my, sign) == label


@pytest.mark.parametrize("n", [6, 8])
def test_basis_irreps_agree_with_character_projection(n):
    # C4v label from characters of the actual vector on the array
    from subradiant.spectrum import classify_state_irrep, CollectiveState
    arr = square_array(n, 0.3)
    for name, label in [("NN", "B2"), ("NN-2-", "A2")]:
        s = CollectiveState(0, 0.0, 0.0, target_vector(n, name))
        assert classify_state_irrep(s, arr) == label


def _random_array(kind, n, a, pol):
    return generate_array(LatticeDescriptor(kind, n, a), pol)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["square", "diagonal", "triangle", "hexagon"]), st.integers(2, 6),
       st.floats(0.15, 0.6), st.sampled_from(["z", "+", "-"]))
def test_sum_rule_and_ordering(kind, n, a, pol):
    states = diagonalize(build_hamiltonian(_random_array(kind, n, a, pol)))
    g = np.array([s.decay for s in states])
    assert abs(g.sum() - len(g)) < 1e-8 * len(g)
    assert np.all(np.diff(g) >= 0)
    assert all(s.irrep != "unresolved" for s in states)


@settings(max_examples=15, deadline=None)
@given(st.integers(4, 9), st.floats(0.2, 0.5))
def test_a2_b1_states_have_no_diagonal_harmonics(n, a):
    for s in diagonalize(build_hamiltonian(square_array(n, a))):
        if s.irrep in ("A2", "B1"):
            c = decompose(s, n).coefficients
            assert np.abs(np.diag(c)).max() < 1e-8


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["square", "triangle", "hexagon"]), st.integers(3, 6), st.floats(0.15, 0.5))
def test_sigma_plus_minus_spectra_identical(kind, n, a):
    arr = _random_array(kind, n, a, "+")
    wp = [s.eigenvalue for s in diagonalize(build_hamiltonian(arr), classify=False)]
    wm = [s.eigenvalue for s in diagonalize(build_hamiltonian(arr.with_polarization("-")), classify=False)]
    assert np.allclose(wp, wm, rtol=0, atol=1e-12)


def test_degenerate_pairs_are_e():
    states = diagonalize(build_hamiltonian(square_array(6, 0.3)))
    w = np.array([s.eigenvalue for s in states])
    for c in degenerate_clusters(w):
        labels = {states[i].irrep for i in c}
        assert labels == {"E"} if len(c) == 2 else labels <= {"A1", "A2", "B1", "B2"}


def test_deterministic_gauge():
    h = build_hamiltonian(square_array(5, 0.33))
    a = diagonalize(h)
    b = diagonalize(h)
    for x, y in zip(a, b):
        assert np.array_equal(x.amplitudes, y.amplitudes)
        assert x.irrep == y.irrep
