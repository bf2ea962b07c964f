"""Gibbs thermal states: numeric (any Hermitian H) and analytic (two-mode)."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonPositiveTemperature
from .linalg import as_matrix, hermitian_eig
from .model import ModeSpec, build_h_mode, mode_coefficients

TRACE_TOL = 1e-10
HERM_TOL = 1e-10
POSITIVITY_FLOOR = -1e-8


@dataclass(frozen=True)
class Temperature:
    """Strictly positive temperature in energy units (k_B = 1)."""

    t: float
    beta: float = field(init=False)

    def __post_init__(self):
        if not (self.t > 0.0 and math.isfinite(self.t)):
            raise NonPositiveTemperature(f"temperature must be finite and > 0, got {self.t}")
        object.__setattr__(self, "beta", 1.0 / self.t)


@dataclass(frozen=True)
class DensityMatrix:
    """Validated quantum state: trace one, Hermitian, positive semidefinite."""

    mat: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        m = as_matrix(self.mat)
        object.__setattr__(self, "mat", m)
        object.__setattr__(self, "dim", m.shape[0])
        tr = m.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {tr} deviates from 1 beyond {TRACE_TOL}")
        if np.max(np.abs(m - m.conj().T)) > HERM_TOL:
            raise ValueError("state is not Hermitian within tolerance")
        min_eig = float(np.linalg.eigvalsh(m)[0])
        if min_eig < POSITIVITY_FLOOR:
            raise ValueError(f"minimum eigenvalue {min_eig} below {POSITIVITY_FLOOR}")


def gibbs_state(h, temp: Temperature) -> DensityMatrix:
    """exp(-beta H) / Z via eigendecomposition.

    Eigenvalues are shifted by their minimum before exponentiation; the shift
    cancels in the normalization and keeps exp() from overflowing at any beta.
    """
    eig = hermitian_eig(h)
    w = eig.eigenvalues
    pops = np.exp(-temp.beta * (w - w[0]))
    pops /= pops.sum()
    v = eig.eigenvectors
    zeta = (v * pops) @ v.conj().T
    zeta = (zeta + zeta.conj().T) / 2
    return DensityMatrix(zeta)


def gibbs_mode_analytic(spec: ModeSpec, temp: Temperature) -> DensityMatrix:
    """Closed-form thermal state of the 4x4 two-mode Hamiltonian.

    Basis ordering matches build_h_mode: (|00>, |11>, |10>, |01>). All entries
    are evaluated scaled by exp(-beta*max(Lambda,|P|)) so the hyperbolic terms
    never overflow; the common factor cancels against the partition function.
    """
    c = mode_coefficients(spec)
    beta = temp.beta
    lam, p = c.lambda_k, c.p_k
    scale = max(lam, abs(p))
    # scaled building blocks: every exponent below is <= 0
    e_lam_minus = math.exp(beta * (lam - scale))
    e_lam_plus = math.exp(beta * (-lam - scale))
    cosh_lam = (e_lam_minus + e_lam_plus) / 2
    sinh_lam = (e_lam_minus - e_lam_plus) / 2
    cosh_p = (math.exp(beta * (p - scale)) + math.exp(beta * (-p - scale))) / 2
    z = 2.0 * (cosh_lam + cosh_p)
    cos2phi = math.cos(2 * c.phi_k)
    sin2phi = math.sin(2 * c.phi_k)
    zeta = np.zeros((4, 4), dtype=np.complex128)
    zeta[0, 0] = cosh_lam + cos2phi * sinh_lam
    zeta[1, 1] = cosh_lam - cos2phi * sinh_lam
    zeta[0, 1] = -np.exp(-1j * c.theta_k) * sin2phi * sinh_lam
    zeta[1, 0] = np.conj(zeta[0, 1])
    zeta[2, 2] = math.exp(beta * (-p - scale))
    zeta[3, 3] = math.exp(beta * (p - scale))
    zeta /= z
    return DensityMatrix(zeta)


def mode_gibbs(spec: ModeSpec, temp: Temperature) -> DensityMatrix:
    """Numeric-route thermal state of the two-mode Hamiltonian (source of truth)."""
    return gibbs_state(build_h_mode(spec), temp)
