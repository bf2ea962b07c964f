"""Spin-chain and two-mode Hamiltonian constructors.

The chain operators realize the open-chain XY model with a two-spin Gamma
interaction and a transverse Zeeman term; the 4x4 mode Hamiltonian is the
fermionized (k, -k) block of the same model, parameterized by the Bogoliubov
coefficient functions.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import SiteOutOfRange, UnknownParameter
from .linalg import as_matrix, kron

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}
IDENTITY2 = np.eye(2, dtype=np.complex128)


@dataclass(frozen=True)
class ChainSpec:
    """Parameters of the N-site chain battery Hamiltonian."""

    n_sites: int
    j_coupling: float = 0.0
    delta: float = 0.0
    gamma_cap: float = 0.0
    gamma: float = 0.0
    b_field: float = 0.0

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError("n_sites must be >= 2, the bond sum needs a neighbour")


@dataclass(frozen=True)
class ModeSpec:
    """Parameters of the (k, -k) two-mode battery Hamiltonian."""

    k: float
    j_coupling: float = 0.0
    delta: float = 0.0
    gamma_cap: float = 0.0
    gamma: float = 0.0
    b_field: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.k < math.pi:
            raise ValueError(f"momentum k must lie in (0, pi), got {self.k}")


@dataclass(frozen=True)
class ModeCoefficients:
    a_k: float
    b_k: float
    p_k: float
    q_k: float
    lambda_k: float
    phi_k: float
    theta_k: float


def site_operator(n_sites, site, axis):
    """Pauli operator at a 1-based site embedded in the full chain space."""
    if axis not in PAULI:
        raise UnknownParameter(f"axis must be one of x,y,z, got {axis!r}")
    if not 1 <= site <= n_sites:
        raise SiteOutOfRange(f"site {site} outside 1..{n_sites}")
    op = np.ones((1, 1), dtype=np.complex128)
    for pos in range(1, n_sites + 1):
        op = kron(op, PAULI[axis] if pos == site else IDENTITY2)
    return op


def _bond_sum(n_sites, left_axis, right_axis):
    """Sum over nearest-neighbour bonds of sigma_left(n) sigma_right(n+1)."""
    dim = 2**n_sites
    total = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(1, n_sites):
        total += site_operator(n_sites, n, left_axis) @ site_operator(n_sites, n + 1, right_axis)
    return total


def build_h_xy(spec: ChainSpec):
    """Anisotropic XY exchange, open chain."""
    j, d = spec.j_coupling, spec.delta
    if j == 0.0:
        dim = 2**spec.n_sites
        return np.zeros((dim, dim), dtype=np.complex128)
    xx = _bond_sum(spec.n_sites, "x", "x")
    yy = _bond_sum(spec.n_sites, "y", "y")
    return j * ((1 + d) / 2 * xx + (1 - d) / 2 * yy)


def build_h_gamma(spec: ChainSpec):
    """Two-spin Gamma interaction: Gamma * (sx sy + gamma * sy sx) per bond."""
    g = spec.gamma_cap
    if g == 0.0:
        dim = 2**spec.n_sites
        return np.zeros((dim, dim), dtype=np.complex128)
    xy = _bond_sum(spec.n_sites, "x", "y")
    yx = _bond_sum(spec.n_sites, "y", "x")
    return g * (xy + spec.gamma * yx)


def build_h_field(spec: ChainSpec):
    """Zeeman term B * sum_i sigma_i^z; diagonal."""
    dim = 2**spec.n_sites
    h = np.zeros((dim, dim), dtype=np.complex128)
    if spec.b_field == 0.0:
        return h
    for i in range(1, spec.n_sites + 1):
        h += site_operator(spec.n_sites, i, "z")
    return spec.b_field * h


def build_h_qb(spec: ChainSpec):
    """Full battery Hamiltonian: exchange + Gamma interaction + field."""
    return build_h_xy(spec) + build_h_gamma(spec) + build_h_field(spec)


def build_h_charge(n_sites, omega, axis="x"):
    """Charging Hamiltonian Omega * sum_i sigma_i^axis."""
    if axis not in ("x", "y"):
        raise UnknownParameter(f"charging axis must be x or y, got {axis!r}")
    if not math.isfinite(omega):
        raise ValueError("omega must be finite")
    dim = 2**n_sites
    h = np.zeros((dim, dim), dtype=np.complex128)
    if omega == 0.0:
        return h
    for i in range(1, n_sites + 1):
        h += site_operator(n_sites, i, axis)
    return omega * h


def mode_coefficients(spec: ModeSpec) -> ModeCoefficients:
    """Bogoliubov coefficient functions of the (k, -k) block."""
    sin_k = math.sin(spec.k)
    a = 2.0 * (spec.j_coupling * math.cos(spec.k) + spec.b_field)
    b = 2.0 * spec.j_coupling * spec.delta * sin_k
    p = 2.0 * spec.gamma_cap * (spec.gamma - 1.0) * sin_k
    q = 2.0 * spec.gamma_cap * (spec.gamma + 1.0) * sin_k
    lam = math.sqrt(a * a + b * b + q * q)
    # two-argument arctangent keeps the a <= 0 branch continuous; at a = 0 it
    # lands on sgn(k)*pi/4 automatically (k > 0 here, so sgn(k) = 1)
    phi = 0.5 * math.atan2(math.copysign(1.0, spec.k) * math.hypot(b, q), a)
    theta = math.atan2(b, q)
    return ModeCoefficients(a_k=a, b_k=b, p_k=p, q_k=q, lambda_k=lam, phi_k=phi, theta_k=theta)


def build_h_mode(spec: ModeSpec):
    """4x4 two-mode Hamiltonian in the ordered basis (|00>, |11>, |10>, |01>).

    The pair states |00>, |11> form a 2x2 block with coupling q -/+ i*b; the
    singly occupied states are already diagonal with energies a +/- p - 2B.
    """
    c = mode_coefficients(spec)
    b_field = spec.b_field
    h = np.zeros((4, 4), dtype=np.complex128)
    h[0, 0] = -2.0 * b_field
    h[1, 1] = 2.0 * c.a_k - 2.0 * b_field
    h[2, 2] = c.a_k + c.p_k - 2.0 * b_field
    h[3, 3] = c.a_k - c.p_k - 2.0 * b_field
    h[0, 1] = c.q_k - 1j * c.b_k
    h[1, 0] = c.q_k + 1j * c.b_k
    return as_matrix(h)


# index permutation taking the standard two-site kron basis (00,01,10,11)
# into the mode basis ordering (00,11,10,01): swap positions 1 and 3
MODE_BASIS_PERMUTATION = np.array([0, 3, 2, 1])


def to_mode_basis(op_standard):
    """Reindex a two-site operator from kron ordering into the mode ordering."""
    op = as_matrix(op_standard)
    if op.shape != (4, 4):
        raise ValueError("mode basis reindexing is defined for 4x4 operators")
    return op[np.ix_(MODE_BASIS_PERMUTATION, MODE_BASIS_PERMUTATION)]
