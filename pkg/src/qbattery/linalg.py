"""Dense complex matrix helpers: tensor products, Hermitian spectral routines,
scaled exponentials and Frobenius distances.

Everything operates on square numpy arrays of complex128 and is pure; dims stay
small (<= 256) so no sparse storage is ever needed.
"""

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-10


def as_matrix(a):
    """Coerce to a square complex128 ndarray."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def matrices_close(a, b, tol):
    """Entrywise equality within an absolute tolerance.

    The tolerance is a required argument on purpose: hidden defaults are how
    silent precision regressions slip in.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        return False
    return bool(np.max(np.abs(a - b)) <= tol)


def kron(a, b):
    """Kronecker product, left factor varies slowest."""
    return np.kron(as_matrix(a), as_matrix(b))


def hermiticity_defect(a):
    """max |a - a†| entrywise."""
    a = as_matrix(a)
    return float(np.max(np.abs(a - a.conj().T)))


@dataclass(frozen=True)
class HermitianEig:
    """Spectral decomposition A = V diag(w) V† with w ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(a):
    from .errors import NonHermitianInput

    a = as_matrix(a)
    defect = hermiticity_defect(a)
    if defect > HERMITICITY_TOL:
        raise NonHermitianInput(f"max |a - a^dag| = {defect:.3e} > {HERMITICITY_TOL}")
    w, v = np.linalg.eigh(a)
    return HermitianEig(eigenvalues=w, eigenvectors=v)


def expm_hermitian_scaled(a, s):
    """V diag(exp(s*w)) V† for Hermitian a and a complex scalar s.

    With s = -i*t this is the propagator exp(-i*a*t) and is unitary.
    """
    eig = hermitian_eig(a)
    v = eig.eigenvectors
    return (v * np.exp(s * eig.eigenvalues)) @ v.conj().T


def frob_dist(a, b):
    """Frobenius distance sqrt(sum |a_ij - b_ij|^2)."""
    from .errors import DimensionMismatch

    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))
