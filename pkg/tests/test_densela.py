import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ngmlimit.densela import (Matrix, cofactor_det, determinant, identity,
                              inf_norm, inverse, matmul, minor, set_entry)
from ngmlimit.errors import SingularMatrixError

WORKED_3X3 = Matrix([[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]])


def minor_by_index_remap(m: Matrix, i: int, j: int) -> Matrix:
    """Independent oracle: rebuild the minor entry by entry."""
    rows = [[m.entry(r, c) for c in range(1, m.cols + 1) if c != j]
            for r in range(1, m.rows + 1) if r != i]
    return Matrix(rows)


# ---------------------------------------------------------------------------
# construction / value semantics

def test_matrix_fields():
    m = Matrix([[1.0, 2.0], [3.0, 4.0]])
    assert (m.rows, m.cols) == (2, 2)
    assert m.data == (1.0, 2.0, 3.0, 4.0)
    assert m.entry(2, 1) == 3.0


def test_from_flat_round_trip():
    m = Matrix.from_flat(2, 3, [1, 2, 3, 4, 5, 6])
    assert m.to_lists() == [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]
    with pytest.raises(ValueError):
        Matrix.from_flat(2, 3, [1, 2, 3])


@pytest.mark.parametrize("bad", [float("nan"), float("inf"), -float("inf")])
def test_non_finite_entries_rejected(bad):
    with pytest.raises(ValueError):
        Matrix([[1.0, bad], [0.0, 1.0]])


def test_ragged_rows_rejected():
    with pytest.raises(ValueError):
        Matrix([[1.0, 2.0], [3.0]])


def test_to_numpy_returns_a_detached_copy():
    m = Matrix([[1.0, 2.0], [3.0, 4.0]])
    arr = m.to_numpy()
    arr[0, 0] = 99.0
    assert m.entry(1, 1) == 1.0


# ---------------------------------------------------------------------------
# minor

def test_minor_identity_case():
    assert minor(identity(3), 1, 1) == identity(2)


def test_minor_forced_by_definition():
    assert minor(Matrix([[1, 2], [3, 4]]), 1, 2) == Matrix([[3.0]])


def test_minor_worked_example_against_remap_oracle():
    got = minor(WORKED_3X3, 2, 2)
    assert got == Matrix([[2.0, 0.0], [0.0, 4.0]])
    assert got == minor_by_index_remap(WORKED_3X3, 2, 2)


def test_minor_rejects_small_or_out_of_range():
    with pytest.raises(ValueError):
        minor(Matrix([[1.0]]), 1, 1)
    with pytest.raises(ValueError):
        minor(identity(3), 0, 1)
    with pytest.raises(ValueError):
        minor(identity(3), 1, 4)


def test_minor_matches_remap_oracle_on_random_rectangles():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n, m = int(rng.integers(2, 6)), int(rng.integers(2, 6))
        mat = Matrix(rng.uniform(-1, 1, (n, m)).tolist())
        i, j = int(rng.integers(1, n + 1)), int(rng.integers(1, m + 1))
        assert minor(mat, i, j) == minor_by_index_remap(mat, i, j)


def test_minor_removal_order_commutes_on_4x4():
    # removing diagonal indices i then k equals k then i, with the
    # second index shifted when it comes after the first removal
    rng = np.random.default_rng(11)
    a = Matrix(rng.uniform(-1, 1, (4, 4)).tolist())
    for i in range(1, 5):
        for k in range(1, 5):
            if i == k:
                continue
            lo, hi = min(i, k), max(i, k)
            via_lo = minor(minor(a, lo, lo), hi - 1, hi - 1)
            via_hi = minor(minor(a, hi, hi), lo, lo)
            assert via_lo == via_hi


# ---------------------------------------------------------------------------
# determinants

def test_determinant_trivial_cases():
    assert determinant(identity(4)) == 1.0
    assert determinant(Matrix([[2.0, 0.0], [0.0, 4.0]])) == 8.0


def test_determinant_rejects_non_square():
    with pytest.raises(ValueError):
        determinant(Matrix([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]))


def test_cofactor_det_base_and_identity():
    assert cofactor_det(Matrix([[7.5]])) == 7.5
    assert cofactor_det(identity(3)) == 1.0


def test_cofactor_det_worked_example():
    # expansion along the first row: 2*(12-1) - 1*(4-0) + 0 = 18
    assert cofactor_det(WORKED_3X3) == pytest.approx(18.0, abs=0.0)
    assert determinant(WORKED_3X3) == pytest.approx(18.0, rel=1e-14)


def test_cofactor_det_size_guard():
    with pytest.raises(ValueError):
        cofactor_det(identity(11))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7, 8])
def test_determinant_agrees_with_cofactor_oracle(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(5):
        a = Matrix(rng.uniform(-1, 1, (n, n)).tolist())
        expected = cofactor_det(a)
        assert determinant(a) == pytest.approx(
            expected, abs=1e-10 * max(1.0, abs(expected)))


def test_determinant_of_singular_matrix_is_zero():
    assert determinant(Matrix([[1.0, 2.0], [2.0, 4.0]])) == 0.0
    assert determinant(Matrix([[0.0, 0.0], [0.0, 0.0]])) == 0.0


# ---------------------------------------------------------------------------
# inverse

def test_inverse_trivial_cases():
    assert inverse(identity(5)) == identity(5)
    assert inverse(Matrix([[2.0, 0.0], [0.0, 4.0]])) == \
        Matrix([[0.5, 0.0], [0.0, 0.25]])


def test_inverse_residual_on_random_matrices():
    rng = np.random.default_rng(7)
    for _ in range(25):
        n = int(rng.integers(2, 7))
        a = Matrix((rng.uniform(-1, 1, (n, n)) + 2.0 * np.eye(n)).tolist())
        residual = matmul(a, inverse(a)) - identity(n)
        assert inf_norm(residual) <= 1e-9 * inf_norm(a) * n


def test_inverse_singular_reports_pivot():
    with pytest.raises(SingularMatrixError) as excinfo:
        inverse(Matrix([[1.0, 2.0], [2.0, 4.0]]))
    assert excinfo.value.pivot <= 1e-12 * 6.0
    assert excinfo.value.column == 2


def test_determinant_inverse_reciprocity():
    rng = np.random.default_rng(13)
    for _ in range(25):
        n = int(rng.integers(2, 7))
        a = Matrix((rng.uniform(-1, 1, (n, n)) + 2.0 * np.eye(n)).tolist())
        assert determinant(inverse(a)) * determinant(a) == \
            pytest.approx(1.0, rel=1e-8)


# ---------------------------------------------------------------------------
# plumbing operations

def test_matmul_identity_and_mismatch():
    b = Matrix([[1.0, 2.0], [3.0, 4.0]])
    assert matmul(identity(2), b) == b
    assert (identity(2) @ b) == b
    with pytest.raises(ValueError):
        matmul(b, Matrix([[1.0, 2.0, 3.0]]))


def test_inf_norm_values():
    assert inf_norm(identity(3)) == 1.0
    assert inf_norm(Matrix([[1.0, -2.0], [3.0, 4.0]])) == 7.0


def test_set_entry_basic():
    z = Matrix([[0.0, 0.0], [0.0, 0.0]])
    assert set_entry(z, 1, 1, 7.0) == Matrix([[7.0, 0.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        set_entry(z, 3, 1, 1.0)
    with pytest.raises(ValueError):
        set_entry(z, 1, 1, float("nan"))


@given(
    value=st.floats(min_value=-1e6, max_value=1e6,
                    allow_nan=False, allow_infinity=False),
    i=st.integers(min_value=1, max_value=3),
    j=st.integers(min_value=1, max_value=3),
)
@settings(max_examples=50)
def test_set_entry_round_trip_restores_exactly(value, i, j):
    rng = np.random.default_rng(3)
    a = Matrix(rng.uniform(-1, 1, (3, 3)).tolist())
    old = a.entry(i, j)
    mutated = set_entry(a, i, j, value)
    assert mutated.entry(i, j) == value
    assert set_entry(mutated, i, j, old) == a
