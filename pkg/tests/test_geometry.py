import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from subradiant.errors import ConfigInvalid, InvalidSize, NotAGrid, PeriodTooSmall
from subradiant.geometry import (AtomArray, LatticeDescriptor, LatticeKind, Polarization, generate_array,
                                 grid_coords, grid_index, square_array)
from subradiant.symmetry import point_group

KINDS = ["square", "diagonal", "rectangular", "triangle", "hexagon"]


@pytest.mark.parametrize("kind,n,count", [("square", 4, 16), ("diagonal", 4, 25), ("triangle", 5, 15),
                                          ("hexagon", 3, 19), ("rectangular", 3, 9)])
def test_counts(kind, n, count):
    arr = generate_array(LatticeDescriptor(kind, n, 0.3))
    assert arr.n_tot == count == arr.descriptor.expected_count


@pytest.mark.parametrize("kind,group", [("square", "C4v"), ("diagonal", "C4v"), ("triangle", "C3v"),
                                        ("hexagon", "C6v")])
def test_point_groups(kind, group):
    assert point_group(generate_array(LatticeDescriptor(kind, 4, 0.3))).name == group


def test_rectangle_point_group():
    arr = generate_array(LatticeDescriptor("rectangular", 4, 0.3, 0.33))
    assert point_group(arr).name == "C2v"


@pytest.mark.parametrize("kind", KINDS)
def test_nearest_neighbour_distance(kind):
    arr = generate_array(LatticeDescriptor(kind, 5, 0.27))
    d = np.hypot(*(arr.positions[:, None, :] - arr.positions[None, :, :]).transpose(2, 0, 1))
    d[np.diag_indices_from(d)] = np.inf
    assert d.min() == pytest.approx(0.27, rel=1e-12)


def test_errors():
    with pytest.raises(PeriodTooSmall):
        square_array(4, 0.1)
    with pytest.raises(InvalidSize):
        square_array(1, 0.3)
    with pytest.raises(ConfigInvalid):
        LatticeDescriptor("square", 4, 0.3, 0.4)
    with pytest.raises(NotAGrid):
        grid_index(generate_array(LatticeDescriptor("triangle", 4, 0.3)), 1, 1)
    with pytest.raises(ValueError):
        AtomArray.from_positions([[0, 0], [0, 0]])


def test_positions_read_only():
    arr = square_array(3, 0.3)
    with pytest.raises(ValueError):
        arr.positions[0, 0] = 1.0


def test_grid_layout():
    arr = square_array(4, 0.25)
    i = grid_index(arr, 3, 2)
    assert np.allclose(arr.positions[i], [0.5, 0.25])
    assert grid_coords(arr, i) == (3, 2)
    assert np.allclose(arr.positions[grid_index(arr, 1, 1)], 0.0)


def test_descriptor_round_trip():
    d = LatticeDescriptor("rectangular", 5, 0.3, 0.31, 6)
    assert LatticeDescriptor.from_dict(d.to_dict()) == d
    assert generate_array(d).n_tot == 30


def test_polarization_parse():
    assert Polarization.parse("plus") is Polarization.SIGMA_PLUS
    assert Polarization.parse("-") is Polarization.SIGMA_MINUS
    e = Polarization.SIGMA_PLUS.dipole_vector
    assert np.vdot(e, e) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        Polarization.parse("x")
    assert LatticeKind.parse("diagonal-square") is LatticeKind.DIAGONAL_SQUARE


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(KINDS), st.integers(2, 7), st.floats(0.11, 0.6))
def test_generated_arrays_are_symmetric(kind, n, a):
    arr = generate_array(LatticeDescriptor(kind, n, a))
    assert arr.n_tot == arr.descriptor.expected_count
    assert point_group(arr) is not None
