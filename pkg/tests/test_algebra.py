import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from gframemod.algebra import (
    absolute_value,
    adjoint,
    is_positive,
    operator_norm,
    psd_leq,
)
from gframemod.exceptions import NonHermitian

from conftest import random_matrix


def complex_matrices(d, scale=10.0):
    real = arrays(np.float64, (d, d),
                  elements=st.floats(-scale, scale, allow_nan=False, allow_infinity=False))
    return st.tuples(real, real).map(lambda p: p[0] + 1j * p[1])


def test_adjoint_identity_is_self_adjoint():
    eye = np.eye(3, dtype=complex)
    np.testing.assert_array_equal(adjoint(eye), eye)


def test_adjoint_of_nilpotent():
    u = np.array([[0, 1], [0, 0]], dtype=complex)
    np.testing.assert_array_equal(adjoint(u), np.array([[0, 0], [1, 0]], dtype=complex))


@settings(deadline=None, max_examples=50)
@given(u=complex_matrices(3), v=complex_matrices(3))
def test_adjoint_antihomomorphism(u, v):
    assert operator_norm(adjoint(u @ v) - adjoint(v) @ adjoint(u)) <= 1e-12 * (1 + operator_norm(u) * operator_norm(v))


@settings(deadline=None, max_examples=50)
@given(u=complex_matrices(2), v=complex_matrices(2),
       re=st.floats(-5, 5), im=st.floats(-5, 5))
def test_adjoint_conjugate_linear(u, v, re, im):
    alpha = complex(re, im)
    lhs = adjoint(alpha * u + v)
    rhs = np.conj(alpha) * adjoint(u) + adjoint(v)
    np.testing.assert_array_equal(lhs, rhs)


def test_adjoint_involution(rng):
    u = random_matrix(rng, 3)
    np.testing.assert_array_equal(adjoint(adjoint(u)), u)


def test_operator_norm_zero():
    assert operator_norm(np.zeros((2, 2))) == 0.0


def test_operator_norm_diagonal():
    assert operator_norm(np.diag([3.0, -4.0])) == pytest.approx(4.0)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_cstar_identity(rng, d):
    for _ in range(100):
        u = random_matrix(rng, d)
        n = operator_norm(u)
        assert abs(operator_norm(adjoint(u) @ u) - n**2) <= 1e-10 * (1 + n**2)


def test_absolute_value_diagonal():
    np.testing.assert_allclose(absolute_value(np.diag([-2.0, 3.0])), np.diag([2.0, 3.0]), atol=1e-12)


def test_absolute_value_of_unitary(rng):
    z = random_matrix(rng, 3)
    q, _ = np.linalg.qr(z)
    np.testing.assert_allclose(absolute_value(q), np.eye(3), atol=1e-12)


def test_absolute_value_squares_to_gram(rng):
    for _ in range(20):
        eta = random_matrix(rng, 3)
        a = absolute_value(eta)
        gram = adjoint(eta) @ eta
        assert is_positive(a, 1e-10)
        assert operator_norm(a @ a - gram) <= 1e-10 * (1 + operator_norm(gram))


def test_is_positive_identity():
    assert is_positive(np.eye(2), 1e-10)


def test_is_positive_indefinite():
    assert not is_positive(np.diag([1.0, -1.0]), 1e-10)


def test_is_positive_gram(rng):
    for _ in range(50):
        v = random_matrix(rng, 3)
        assert is_positive(adjoint(v) @ v, 1e-10)


def test_psd_leq_trivial():
    assert psd_leq(np.zeros((2, 2)), np.eye(2), 1e-10)
    assert not psd_leq(np.eye(2), np.eye(2) / 2, 1e-10)


def test_psd_leq_rejects_non_hermitian():
    with pytest.raises(NonHermitian):
        psd_leq(np.array([[0, 1], [0, 0]], dtype=complex), np.eye(2), 1e-10)
    with pytest.raises(NonHermitian):
        psd_leq(np.eye(2), np.array([[0, 1], [0, 0]], dtype=complex), 1e-10)


def test_psd_leq_scaling_of_psd(rng):
    for _ in range(20):
        v = random_matrix(rng, 2)
        g = adjoint(v) @ v
        assert psd_leq(g, 2 * g, 1e-10)
        assert not psd_leq(2 * g + np.eye(2), g, 1e-10)


def test_psd_leq_partial_order(rng):
    tol = 1e-9
    u = adjoint(random_matrix(rng, 3)) @ random_matrix(rng, 3)
    u = (u + adjoint(u)) / 2
    assert psd_leq(u, u, tol)  # reflexive
    # antisymmetry up to tolerance: both orders force near-equality
    bump = np.diag([tol / 10, 0, 0]).astype(complex)
    v = u + bump
    assert psd_leq(u, v, tol) and psd_leq(v, u, tol)
    assert operator_norm(u - v) <= 10 * tol * (1 + operator_norm(u))
