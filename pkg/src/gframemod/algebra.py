"""The scalar algebra: d x d complex matrices under the conjugate-transpose
involution and the spectral norm.

Elements are plain numpy arrays of shape (d, d), dtype complex128. The
positivity tolerance is relative (min eigenvalue >= -tol * (1 + norm)) so that
PSD verdicts are invariant under frame scaling.
"""

import numpy as np

from .exceptions import NonHermitian

DEFAULT_TOL = 1e-9


def as_algebra_element(u) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1] or u.shape[0] == 0:
        raise ValueError(f"algebra element must be a nonempty square matrix, got shape {u.shape}")
    return u


def adjoint(u) -> np.ndarray:
    """Conjugate transpose."""
    return as_algebra_element(u).conj().T


def operator_norm(u) -> float:
    """Largest singular value (the C*-norm of the matrix algebra)."""
    return float(np.linalg.norm(as_algebra_element(u), 2))


def absolute_value(eta) -> np.ndarray:
    """The unique PSD square root of eta* eta."""
    eta = as_algebra_element(eta)
    gram = eta.conj().T @ eta
    gram = (gram + gram.conj().T) / 2.0
    w, v = np.linalg.eigh(gram)
    w = np.sqrt(np.clip(w, 0.0, None))
    return (v * w) @ v.conj().T


def is_hermitian(u, tol: float = DEFAULT_TOL) -> bool:
    u = as_algebra_element(u)
    return operator_norm(u - u.conj().T) <= tol * (1.0 + operator_norm(u))


def is_positive(u, tol: float = DEFAULT_TOL) -> bool:
    """Hermitian within tol, with min eigenvalue >= -tol * (1 + ||u||)."""
    u = as_algebra_element(u)
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    if not is_hermitian(u, tol):
        return False
    lo = float(np.linalg.eigvalsh((u + u.conj().T) / 2.0)[0])
    return lo >= -tol * (1.0 + operator_norm(u))


def psd_leq(u, v, tol: float = DEFAULT_TOL) -> bool:
    """u <= v in the PSD order on Hermitian elements.

    Non-Hermitian operands are an error, not False; silently symmetrizing
    would mask bugs upstream.
    """
    u = as_algebra_element(u)
    v = as_algebra_element(v)
    for side, x in (("left", u), ("right", v)):
        if not is_hermitian(x, tol):
            raise NonHermitian(f"{side} operand of psd_leq is not Hermitian within {tol}")
    return is_positive(v - u, tol)
