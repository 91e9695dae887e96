import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ngmlimit.densela import Matrix, identity, inf_norm
from ngmlimit.eigen import (Spectrum, eigenvalues, spectral_abscissa,
                            spectral_radius)
from ngmlimit.errors import ConvergenceError


def companion(coeffs):
    """Companion matrix of the monic polynomial x^n + c[n-1] x^(n-1) + ...

    Its eigenvalues are the polynomial's roots by construction.
    """
    n = len(coeffs)
    m = np.zeros((n, n))
    m[1:, :-1] = np.eye(n - 1)
    m[:, -1] = [-c for c in coeffs]
    return Matrix(m.tolist())


def test_eigenvalues_of_diagonal():
    spec = eigenvalues(Matrix([[1.0, 0, 0], [0, 2.0, 0], [0, 0, 3.0]]))
    assert spec.values == (1.0 + 0.0j, 2.0 + 0.0j, 3.0 + 0.0j)


def test_eigenvalues_of_rotation_block():
    spec = eigenvalues(Matrix([[0.0, 1.0], [-1.0, 0.0]]))
    assert spec.values[0] == pytest.approx(-1.0j, abs=1e-12)
    assert spec.values[1] == pytest.approx(1.0j, abs=1e-12)


def test_eigenvalues_of_companion_matrix():
    # roots placed by construction: (x - 2)(x + 3)(x - 0.5)
    # = x^3 + 0.5 x^2 - 6.5 x + 3
    spec = eigenvalues(companion([3.0, -6.5, 0.5]))
    got = sorted(v.real for v in spec.values)
    assert got == pytest.approx([-3.0, 0.5, 2.0], rel=1e-10)
    assert all(v.imag == 0.0 for v in spec.values)


def test_characteristic_polynomial_residual():
    rng = np.random.default_rng(21)
    for _ in range(20):
        n = int(rng.integers(2, 7))
        a = rng.uniform(-1, 1, (n, n))
        m = Matrix(a.tolist())
        bound = 1e-6 * inf_norm(m) ** n
        for lam in eigenvalues(m).values:
            residual = abs(np.linalg.det(a - lam * np.eye(n)))
            assert residual <= bound


def test_spectrum_conjugate_closure_and_order():
    rng = np.random.default_rng(33)
    for _ in range(20):
        n = int(rng.integers(2, 8))
        spec = eigenvalues(Matrix(rng.uniform(-1, 1, (n, n)).tolist()))
        assert len(spec) == n
        values = list(spec.values)
        assert values == sorted(values, key=lambda v: (v.real, v.imag))
        complexes = [v for v in values if v.imag != 0.0]
        for v in complexes:
            partner = min(complexes, key=lambda w: abs(w - v.conjugate()))
            assert abs(partner - v.conjugate()) <= 1e-8 * max(1.0, abs(v))


def test_spectral_radius_trivial_cases():
    assert spectral_radius(identity(3)) == 1.0
    assert spectral_radius(Matrix([[1.0, 0.0], [0.0, -3.0]])) == 3.0
    assert spectral_radius(Matrix([[0.0]])) == 0.0
    assert spectral_radius(Matrix([[0.0, 0.0], [0.0, 0.0]])) == 0.0


def test_spectral_radius_symmetric_off_diagonal():
    assert spectral_radius(Matrix([[0.0, 2.0], [2.0, 0.0]])) == \
        pytest.approx(2.0, rel=1e-12)


def test_spectral_abscissa_cases():
    assert spectral_abscissa(-1.0 * identity(2)) == -1.0
    assert spectral_abscissa(Matrix([[-1.0, 0.0], [0.0, 0.5]])) == 0.5
    assert spectral_abscissa(Matrix([[-2.0, 1.0], [0.0, -3.0]])) == -2.0


def test_similarity_invariance():
    rng = np.random.default_rng(8)
    a = rng.uniform(-1, 1, (5, 5))
    radius = spectral_radius(Matrix(a.tolist()))
    for _ in range(10):
        p = rng.uniform(-1, 1, (5, 5)) + 3.0 * np.eye(5)
        conjugated = np.linalg.inv(p) @ a @ p
        assert spectral_radius(Matrix(conjugated.tolist())) == \
            pytest.approx(radius, rel=1e-7)


@given(c=st.floats(min_value=-100.0, max_value=100.0,
                   allow_nan=False, allow_infinity=False))
@settings(max_examples=40)
def test_spectral_radius_scaling(c):
    a = Matrix([[0.3, -0.7, 0.2], [0.5, 0.1, -0.4], [-0.2, 0.6, 0.9]])
    scaled = spectral_radius(c * a)
    assert scaled == pytest.approx(abs(c) * spectral_radius(a), rel=1e-9,
                                   abs=1e-300)


def test_spectral_radius_continuity_probe():
    # |rho(A + E) - rho(A)| shrinks with the perturbation size
    rng = np.random.default_rng(55)
    a = np.diag([3.0, 1.0, -0.5]) + 0.1 * rng.uniform(-1, 1, (3, 3))
    direction = rng.uniform(-1, 1, (3, 3))
    direction /= np.abs(direction).sum(axis=1).max()
    base = spectral_radius(Matrix(a.tolist()))
    gaps = []
    for eps in (1e-3, 1e-4, 1e-5):
        perturbed = Matrix((a + eps * direction).tolist())
        gaps.append(abs(spectral_radius(perturbed) - base))
    assert gaps[0] >= gaps[1] >= gaps[2]
    assert gaps[2] <= 1e-4


def test_eigenvalues_rejects_non_square():
    with pytest.raises(ValueError):
        eigenvalues(Matrix([[1.0, 2.0]]))


def test_lapack_failure_becomes_convergence_error(monkeypatch):
    def boom(_):
        raise np.linalg.LinAlgError("Eigenvalues did not converge")

    monkeypatch.setattr(np.linalg, "eigvals", boom)
    with pytest.raises(ConvergenceError):
        eigenvalues(identity(2))


def test_spectrum_is_a_value_container():
    spec = Spectrum((1.0 + 0.0j, 2.0 + 0.0j))
    assert len(spec) == 2
    assert list(spec) == [1.0 + 0.0j, 2.0 + 0.0j]
