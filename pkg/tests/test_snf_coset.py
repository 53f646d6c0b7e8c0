import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wiretap_lattice.coset import (bits_to_label, build_coset_code, coset_label, encode,
                                   label_to_bits)
from wiretap_lattice.errors import IndexOverflow, LabelOutOfRange, NotNested
from wiretap_lattice.lattice import Lattice, checkerboard_lattice, integer_lattice
from wiretap_lattice.snf import smith_normal_form


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3), min_size=3, max_size=3))
def test_snf_properties(A):
    D, U, V, Uinv = smith_normal_form(A)
    assert _matmul(_matmul(U, A), V) == D
    assert _matmul(U, Uinv) == [[int(i == j) for j in range(3)] for i in range(3)]
    assert round(abs(np.linalg.det(np.array(U, dtype=float)))) == 1
    assert round(abs(np.linalg.det(np.array(V, dtype=float)))) == 1
    diag = [D[i][i] for i in range(3)]
    assert all(D[i][j] == 0 for i in range(3) for j in range(3) if i != j)
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else b % a == 0


def test_snf_diagonal_untouched():
    D, U, V, _ = smith_normal_form([[2, 0], [0, 6]])
    assert D == [[2, 0], [0, 6]] and U == [[1, 0], [0, 1]] and V == [[1, 0], [0, 1]]
    D, _, _, _ = smith_normal_form([[2, 0], [0, 3]])
    assert D == [[1, 0], [0, 6]]


def test_coset_code_structure():
    code = build_coset_code(integer_lattice(2), checkerboard_lattice(2))
    assert code.index == 2 and code.secret_bits == 1
    code = build_coset_code(integer_lattice(3), integer_lattice(3).scaled(2))
    assert code.index == 8 and code.invariants == (2, 2, 2)
    assert code.rates(3.0) == pytest.approx((2.0, 1.0, 1.0))
    reps = code.reps
    assert len({coset_label(code, r) for r in reps}) == 8


def test_non_power_of_two_index():
    code = build_coset_code(integer_lattice(1), integer_lattice(1).scaled(3))
    assert code.index == 3 and code.secret_bits == 1


def test_errors():
    Z2 = integer_lattice(2)
    with pytest.raises(NotNested):
        build_coset_code(Z2, Z2.scaled(1.5))
    with pytest.raises(IndexOverflow):
        build_coset_code(Z2, Z2.scaled(2**17))
    code = build_coset_code(Z2, Z2.scaled(2))
    with pytest.raises(LabelOutOfRange):
        encode(code, 4, [0, 0])
    with pytest.raises(ValueError):
        encode(code, 1, [1, 0])


def test_skewed_pair_roundtrip():
    fine = Lattice.from_rows([[1, 0], [0.5, 0.8]])
    B = np.array([[3, 1], [0, 2]])
    coarse = Lattice(fine.generator @ B)
    code = build_coset_code(fine, coarse)
    assert code.index == 6
    for label in range(6):
        for r in ([0, 0], [2, -1], [-3, 4]):
            x = encode(code, label, coarse.point(r))
            assert coset_label(code, x) == label


def test_bits_roundtrip():
    assert bits_to_label([1, 0, 1]) == 5
    assert label_to_bits(5, 3) == [1, 0, 1]
