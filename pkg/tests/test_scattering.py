import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from subradiant.geometry import AtomArray, square_array
from subradiant.green import COUPLING, build_hamiltonian
from subradiant.scattering import (SIGMA0, BeamParams, PlaneWave, Scatterer, bessel_beam_field,
                                   modal_basis, polarizability, solve_coupled_dipoles)
from subradiant.spectrum import diagonalize


def _scatterer(arr, field):
    h = build_hamiltonian(arr)
    return Scatterer(h, field, diagonalize(h))


def test_single_atom_lorentzian():
    sc = _scatterer(AtomArray.from_positions([[0.0, 0.0]]), PlaneWave())
    for d in (-3.0, -0.5, 0.0, 0.2, 1.7):
        assert sc.total(d) == pytest.approx(0.25 / (d * d + 0.25), rel=1e-10)
    assert abs(sc.total(0.0) - 1.0) < 1e-10
    assert SIGMA0 == pytest.approx(3 / (2 * np.pi))


def test_single_atom_polarizability():
    sc = _scatterer(AtomArray.from_positions([[0.0, 0.0]]), PlaneWave())
    for d in (-1.0, 0.3):
        assert sc.amplitudes(d)[0] == pytest.approx(polarizability(d), rel=1e-12)


def test_dimer_superradiant_lorentzian():
    # a uniform z-polarized wave only drives the symmetric dimer mode
    dist = 0.2
    sc = _scatterer(AtomArray.from_positions([[0, 0], [dist, 0]]), PlaneWave())
    g = oracles.projected((dist, 0, 0), oracles.EZ)
    det, dec = -COUPLING * g.real, 1 + 2 * COUPLING * g.imag
    for d in np.linspace(-2, 2, 9):
        ref = 2 * (dec / 4) / ((d - det) ** 2 + dec ** 2 / 4)
        assert sc.total(d) == pytest.approx(ref, rel=1e-10)


@settings(max_examples=15, deadline=None)
@given(st.floats(-5, 5), st.floats(0.5, 3.0))
def test_linearity(d, scale):
    arr = square_array(3, 0.3)
    h = build_hamiltonian(arr)
    rng = np.random.default_rng(1)
    e = rng.normal(size=arr.n_tot) + 1j * rng.normal(size=arr.n_tot)
    x1 = solve_coupled_dipoles(h, e, d)
    x2 = solve_coupled_dipoles(h, scale * e, d)
    assert np.allclose(x2, scale * x1, rtol=1e-12, atol=0)


@pytest.mark.parametrize("a", [0.25, 0.31])
def test_modal_sum_equals_total(a):
    arr = square_array(5, a)
    sc = _scatterer(arr, bessel_beam_field(BeamParams(l=1, s=1), arr.centroid))
    spec = sc.spectrum(np.linspace(-3, 3, 41))
    assert spec.max_modal_mismatch() < 1e-8


def test_modal_basis_bilinear_orthogonal():
    states = diagonalize(build_hamiltonian(square_array(6, 0.3)))
    b = modal_basis(states)
    gram = b.vectors.T @ b.vectors
    assert np.abs(gram - np.diag(np.diag(gram))).max() < 1e-10


@pytest.mark.parametrize("l,s", [(0, 1), (3, 1), (9, 1), (7, -1)])
def test_beam_winding_and_axis(l, s):
    beam = bessel_beam_field(BeamParams(l=l, s=s))
    assert beam.winding_number() == l + s
    on_axis = abs(beam(np.zeros((1, 2)))[0, 2])
    assert on_axis < 1e-10 * beam.peak_ez or l + s == 0


def test_beam_rotation_covariance():
    # rotating the sample point by phi multiplies E_z by e^{iJ phi}
    beam = bessel_beam_field(BeamParams(l=5, s=1))
    r, phi = 0.3, 0.7
    p0 = np.array([[r, 0.0]])
    p1 = np.array([[r * np.cos(phi), r * np.sin(phi)]])
    assert beam(p1)[0, 2] == pytest.approx(beam(p0)[0, 2] * np.exp(6j * phi), rel=1e-9)


def test_beam_selection_rule():
    # J = l + s = 10 = 2 mod 4 cannot excite A1/A2 modes of a centred square array
    arr = square_array(6, 0.281)
    h = build_hamiltonian(arr)
    states = diagonalize(h)
    sc = Scatterer(h, bessel_beam_field(BeamParams(l=9, s=1), arr.centroid), states)
    proj = np.abs(sc.basis.vectors.T @ sc.drive) / np.abs(sc.drive).max()
    for s, p in zip(states, proj):
        if s.irrep in ("A1", "A2", "E"):
            assert p < 1e-8
