import numpy as np
import pytest

from secest import (
    LinearSystem,
    NumericalError,
    ValidationError,
    is_positive_definite,
    solve_discounted_lyapunov,
    spectral_radius,
    validate_system,
)


def test_spectral_radius_triangular():
    A = np.array([[1.2, 1.0], [0.0, 1.1]])
    assert spectral_radius(A) == pytest.approx(1.2, abs=1e-12)


def test_spectral_radius_rotation():
    # complex pair, modulus 2
    A = 2.0 * np.array([[0.0, -1.0], [1.0, 0.0]])
    assert spectral_radius(A) == pytest.approx(2.0, abs=1e-12)


def test_positive_definite_classification():
    assert is_positive_definite(np.array([[2.0, 1.0], [1.0, 1.0]]))  # eigs (3±sqrt5)/2
    assert not is_positive_definite(np.array([[1.0, 2.0], [2.0, 1.0]]))  # eig -1
    assert not is_positive_definite(np.diag([1.0, 0.0]))
    assert not is_positive_definite(np.array([[1.0, 0.3], [0.2, 1.0]]))  # asymmetric


class TestLinearSystem:
    def test_scalars_promote_to_matrices(self):
        sys = LinearSystem(A=1.2, C=1.0, Q=1.0, R=1.0, Sigma0=1.0)
        assert sys.n == 1 and sys.m == 1
        assert sys.A.shape == (1, 1)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            LinearSystem(A=np.eye(2), C=np.array([[1.0, 0.0, 0.0]]),
                         Q=np.eye(2), R=1.0, Sigma0=np.eye(2))

    def test_nonsquare_A_rejected(self):
        with pytest.raises(ValidationError):
            LinearSystem(A=np.ones((2, 3)), C=np.ones((1, 2)),
                         Q=np.eye(2), R=1.0, Sigma0=np.eye(2))

    def test_nonfinite_rejected(self):
        with pytest.raises(ValidationError):
            LinearSystem(A=np.nan, C=1.0, Q=1.0, R=1.0, Sigma0=1.0)

    def test_matrices_are_read_only(self):
        sys = LinearSystem(A=1.2, C=1.0, Q=1.0, R=1.0, Sigma0=1.0)
        with pytest.raises(ValueError):
            sys.A[0, 0] = 2.0


def test_validate_system_clean(second_order_sys):
    report = validate_system(second_order_sys)
    assert report.ok
    assert report.spectral_radius == pytest.approx(1.2)
    assert report.failures == [] and report.warnings == []


def test_validate_system_failures_and_warnings():
    sys = LinearSystem(A=0.9, C=1.0, Q=1.0, R=1.0, Sigma0=1.0)
    report = validate_system(sys)
    assert not report.ok
    assert any("spectral radius" in f for f in report.failures)

    A = np.array([[1.2, 1.0], [0.0, 1.1]])
    sys = LinearSystem(A=A, C=np.array([[0.0, 1.0]]), Q=np.eye(2), R=1.0,
                       Sigma0=np.eye(2))
    report = validate_system(sys)
    assert report.ok  # observability loss is a warning, not a failure
    assert any("observability" in w for w in report.warnings)

    sys = LinearSystem(A=A, C=np.array([[1.0, 0.0]]), Q=np.diag([1.0, 0.0]),
                       R=1.0, Sigma0=np.eye(2))
    report = validate_system(sys)
    assert any("Q positive definite" in f for f in report.failures)
    assert any("controllability" in w for w in report.warnings)


class TestDiscountedLyapunov:
    """X = alpha A X A' + Q, solved through the Kronecker-vectorized form."""

    def test_scalar_closed_form(self):
        S = solve_discounted_lyapunov(np.array([[1.2]]), np.array([[1.0]]), 0.625)
        # 1 / (1 - 0.625 * 1.44) = 10
        assert S[0, 0] == pytest.approx(10.0, abs=1e-10)

    def test_diagonal_closed_form(self):
        A = np.diag([1.2, 1.1])
        S = solve_discounted_lyapunov(A, np.eye(2), 0.5)
        assert S[0, 0] == pytest.approx(1.0 / (1.0 - 0.5 * 1.44), abs=1e-10)
        assert S[1, 1] == pytest.approx(1.0 / (1.0 - 0.5 * 1.21), abs=1e-10)
        assert S[0, 1] == pytest.approx(0.0, abs=1e-12)

    def test_matches_fixed_point_iteration(self):
        A = np.array([[1.2, 1.0], [0.0, 1.1]])
        Q = np.array([[1.0, 0.5], [0.5, 2.0]])
        alpha = 0.5
        S = solve_discounted_lyapunov(A, Q, alpha)
        X = np.zeros((2, 2))
        for _ in range(2000):
            X = alpha * A @ X @ A.T + Q
        assert np.max(np.abs(S - X)) < 1e-9

    def test_monotone_in_alpha(self):
        A = np.array([[1.2, 1.0], [0.0, 1.1]])
        Q = np.array([[1.0, 0.5], [0.5, 2.0]])
        traces = [np.trace(solve_discounted_lyapunov(A, Q, a))
                  for a in (0.0, 0.2, 0.4, 0.6)]
        assert all(t1 > t0 for t0, t1 in zip(traces, traces[1:]))

    def test_alpha_zero_returns_Q(self):
        Q = np.array([[1.0, 0.5], [0.5, 2.0]])
        S = solve_discounted_lyapunov(np.array([[1.2, 1.0], [0.0, 1.1]]), Q, 0.0)
        assert np.allclose(S, Q, atol=1e-14)

    def test_divergent_alpha_raises(self):
        with pytest.raises(NumericalError):
            solve_discounted_lyapunov(np.array([[1.2]]), np.array([[1.0]]), 0.7)

    def test_alpha_range_checked(self):
        with pytest.raises(ValidationError):
            solve_discounted_lyapunov(np.array([[1.2]]), np.array([[1.0]]), -0.1)
        with pytest.raises(ValidationError):
            solve_discounted_lyapunov(np.array([[1.2]]), np.array([[1.0]]), 1.1)
