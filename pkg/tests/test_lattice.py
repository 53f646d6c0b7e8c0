import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wiretap_lattice.errors import EnumerationBudgetExceeded, SingularGenerator
from wiretap_lattice.lattice import (Lattice, catalog_lattice, checkerboard_lattice, e8_lattice,
                                     enumerate_points, first_minimum, integer_lattice,
                                     nearest_coords, nearest_point, second_moment, volume)
from wiretap_lattice.oracles import brute_force_nearest, brute_force_points


def test_from_rows_transposes():
    lat = Lattice.from_rows([[1, 0], [1, 2]])
    np.testing.assert_array_equal(lat.point([0, 1]), [1, 2])


def test_singular_generator_rejected():
    with pytest.raises(SingularGenerator):
        Lattice([[1, 2], [2, 4]])
    with pytest.raises(ValueError):
        Lattice([[1, 2, 3], [4, 5, 6]])


def test_catalog_volumes_and_minima():
    assert volume(integer_lattice(3)) == pytest.approx(1.0)
    assert volume(checkerboard_lattice(4)) == pytest.approx(2.0)
    assert volume(e8_lattice()) == pytest.approx(1.0, abs=1e-12)
    assert first_minimum(e8_lattice()) == pytest.approx(np.sqrt(2))
    assert first_minimum(checkerboard_lattice(4)) == pytest.approx(np.sqrt(2))
    # kissing numbers
    assert len(enumerate_points(e8_lattice(), np.sqrt(2)).nonzero()) == 240
    assert len(enumerate_points(checkerboard_lattice(4), np.sqrt(2)).nonzero()) == 24
    with pytest.raises(ValueError):
        catalog_lattice("A2", 2)


def test_second_moment_of_cube():
    # integral of |x|^2 over [-1/2, 1/2)^n is n/12
    assert second_moment(integer_lattice(3)) == pytest.approx(0.25)
    assert second_moment(integer_lattice(2).scaled(2)) == pytest.approx(4 * 2 * 4 / 12)


def test_enumeration_order_and_annulus():
    sh = enumerate_points(integer_lattice(2), 2.0)
    norms = sh.norms
    assert np.all(np.diff(norms) >= -1e-12)
    assert tuple(sh.coords[0]) == (0, 0)
    # ties broken lexicographically on coordinates
    assert [tuple(c) for c in sh.coords[1:5]] == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    ring = enumerate_points(integer_lattice(2), 2.0, inner_radius=1.0)
    assert all(1.0 < r <= 2.0 + 1e-12 for r in ring.norms)
    assert len(ring) == len(sh) - 5


def test_budget():
    with pytest.raises(EnumerationBudgetExceeded):
        enumerate_points(integer_lattice(3), 10.0, budget=100)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**31 - 1), st.floats(0.5, 3.0))
def test_enumeration_property(n, seed, radius):
    rng = np.random.default_rng(seed)
    lat = Lattice(rng.normal(size=(n, n)) + 2 * np.eye(n))
    got = {tuple(u) for u in enumerate_points(lat, radius).coords}
    assert got == {tuple(u) for u in brute_force_points(lat, radius)}


def test_exact_nearest_point_matches_brute_force():
    rng = np.random.default_rng(5)
    lat = Lattice.from_rows([[1, 0], [0.9, 0.3]])  # skewed, rounding often wrong
    wrong = 0
    for _ in range(200):
        y = rng.normal(size=2) * 3
        u = nearest_coords(lat, y, "exact")
        assert tuple(u) == brute_force_nearest(lat, y, 3.0)
        wrong += tuple(nearest_coords(lat, y)) != tuple(u)
    assert wrong > 0
    np.testing.assert_allclose(nearest_point(lat, lat.point([2, -1])), lat.point([2, -1]))
    with pytest.raises(ValueError):
        nearest_coords(lat, [0, 0], "sphere")


def test_exact_decoder_tie_break():
    # midpoint between 0 and 1 on Z: lexicographically smallest wins
    assert nearest_coords(integer_lattice(1), [0.5], "exact")[0] == 0
    assert nearest_coords(integer_lattice(1), [-0.5], "exact")[0] == -1
