"""Open-system charging: Lindblad master equation with local transverse-axis
dephasing, integrated by fixed-step classic Runge-Kutta.

Per-site sigma-x jump operators are scaled bit-flip permutations, so their
sandwich terms reduce to index gathers and the anticommutator collapses to a
scalar multiple of the state; integrate() detects that structure and compiles
the cheap right-hand side, falling back to the generic dense formula for
arbitrary jump operators. Both paths are equality-tested against each other.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NumericalBlowup
from .linalg import as_matrix
from .model import site_operator
from .thermal import DensityMatrix

ENTRY_BLOWUP_LIMIT = 1e6
RENORM_THRESHOLD = 1e-12


@dataclass(frozen=True)
class LindbladSpec:
    """Total Hamiltonian (battery + charger) plus the jump operators."""

    h_total: np.ndarray
    jump_ops: tuple
    g: float

    def __post_init__(self):
        h = as_matrix(self.h_total)
        object.__setattr__(self, "h_total", h)
        ops = tuple(as_matrix(op) for op in self.jump_ops)
        object.__setattr__(self, "jump_ops", ops)
        if self.g < 0:
            raise ValueError(f"dephasing rate g must be >= 0, got {self.g}")
        for op in ops:
            if op.shape != h.shape:
                raise DimensionMismatch(f"jump op shape {op.shape} vs H {h.shape}")


def site_dephasing_spec(h_total, n_sites, g, axis="x") -> LindbladSpec:
    """One sqrt(g)-scaled single-site Pauli jump operator per site."""
    root = math.sqrt(g)
    ops = tuple(root * site_operator(n_sites, i, axis) for i in range(1, n_sites + 1))
    return LindbladSpec(h_total=h_total, jump_ops=ops, g=g)


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    t_max: float
    record_stride: int = 20
    trace_tol: float = 1e-7
    hermiticity_tol: float = 1e-8

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be > 0")
        if not self.t_max > 0:
            raise ValueError("t_max must be > 0")
        if not self.dt < self.t_max:
            raise ValueError("dt must be smaller than t_max")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")
        if not (self.trace_tol > 0 and self.hermiticity_tol > 0):
            raise ValueError("tolerances must be > 0")


@dataclass(frozen=True)
class Trajectory:
    """Recorded time series plus numerical-health diagnostics."""

    times: np.ndarray
    xi: np.ndarray
    trace_err: np.ndarray
    min_eig: np.ndarray
    herm_err: np.ndarray

    def __post_init__(self):
        n = len(self.times)
        if not len(self.xi) == len(self.trace_err) == len(self.min_eig) == len(self.herm_err) == n:
            raise ValueError("trajectory arrays must have equal length")
        if n and abs(self.xi[0]) > 1e-10:
            raise ValueError(f"xi must start at 0, got {self.xi[0]}")


def lindblad_rhs(rho, spec: LindbladSpec):
    """-i[H, rho] + sum_k (L rho L^dag - (1/2){L^dag L, rho}).

    Generic dense evaluation straight from the definition; the integrator's
    compiled fast path is checked against this function.
    """
    rho = as_matrix(rho)
    h = spec.h_total
    if rho.shape != h.shape:
        raise DimensionMismatch(f"rho shape {rho.shape} vs H {h.shape}")
    out = -1j * (h @ rho - rho @ h)
    for op in spec.jump_ops:
        op_dag = op.conj().T
        sandwich = op_dag @ op
        out += op @ rho @ op_dag - 0.5 * (sandwich @ rho + rho @ sandwich)
    return out


def _xor_mask_of(op, g, dim):
    """Mask m when op == sqrt(g) * (bit-flip permutation i -> i XOR m), else None."""
    if g <= 0:
        return None
    root = math.sqrt(g)
    first_row = np.flatnonzero(op[0])
    if first_row.size != 1 or first_row[0] == 0:
        return None
    mask = int(first_row[0])
    idx = np.arange(dim) ^ mask
    expected = np.zeros((dim, dim), dtype=np.complex128)
    expected[np.arange(dim), idx] = root
    return mask if np.array_equal(op, expected) else None


def _compile_rhs(spec: LindbladSpec):
    """Returns (rhs_function, used_fast_path).

    The fast path requires every jump operator to be a sqrt(g)-scaled bit-flip
    permutation (which sigma-x site operators are); then L rho L^dag is an
    index gather and sum_k L^dag L = (n_ops * g) * I.
    """
    h = spec.h_total
    dim = h.shape[0]
    if not spec.jump_ops or (spec.g == 0 and not any(op.any() for op in spec.jump_ops)):
        def rhs_unitary(rho):
            hr = h @ rho
            return -1j * (hr - hr.conj().T)

        return rhs_unitary, True

    masks = [_xor_mask_of(op, spec.g, dim) for op in spec.jump_ops]
    if all(m is not None for m in masks):
        g = spec.g
        decay = g * len(masks)
        flat_gathers = []
        for m in masks:
            s = np.arange(dim) ^ m
            flat_gathers.append((s[:, None] * dim + s[None, :]).ravel())

        def rhs_fast(rho):
            hr = h @ rho
            out = -1j * (hr - hr.conj().T)
            flat = rho.ravel()
            for gather in flat_gathers:
                out += g * flat.take(gather).reshape(dim, dim)
            out -= decay * rho
            return out

        return rhs_fast, True

    ops = spec.jump_ops
    dags = tuple(op.conj().T for op in ops)
    total_sandwich = sum(d @ o for o, d in zip(ops, dags))

    def rhs_generic(rho):
        out = -1j * (h @ rho - rho @ h)
        for op, dag in zip(ops, dags):
            out += op @ rho @ dag
        out -= 0.5 * (total_sandwich @ rho + rho @ total_sandwich)
        return out

    return rhs_generic, False


def _real_trace_product(h, rho):
    """Re Tr[H rho] for Hermitian H."""
    return float(np.vdot(h, rho).real)


def integrate(
    zeta: DensityMatrix,
    spec: LindbladSpec,
    h_reference,
    config: IntegratorConfig,
    early_stop=None,
) -> Trajectory:
    """Fixed-step RK4 evolution of the master equation.

    After every step the state is symmetrized, (rho + rho^dag)/2, and the trace
    is renormalized only when its drift exceeds 1e-12; the drift is recorded
    before renormalization. Recorded points carry the extractable work against
    h_reference (the battery Hamiltonian alone), the trace drift, the minimum
    eigenvalue and the post-symmetrization hermiticity defect.

    early_stop, when given, is (window, rel_tol): integration halts once the
    spread of the trailing `window` recorded values falls below
    rel_tol * max|xi|.
    """
    h_ref = as_matrix(h_reference)
    if h_ref.shape != spec.h_total.shape or zeta.dim != spec.h_total.shape[0]:
        raise DimensionMismatch(
            f"state dim {zeta.dim}, H dim {spec.h_total.shape[0]}, reference dim {h_ref.shape[0]}"
        )
    rhs, _ = _compile_rhs(spec)
    dt = config.dt
    n_steps = int(round(config.t_max / dt))
    rho = zeta.mat.copy()
    base_energy = _real_trace_product(h_ref, zeta.mat)

    times, xi, trace_err, min_eig, herm_err = [], [], [], [], []

    def record(step, drift):
        times.append(step * dt)
        xi.append(_real_trace_product(h_ref, rho) - base_energy)
        trace_err.append(drift)
        min_eig.append(float(np.linalg.eigvalsh(rho)[0]))
        herm_err.append(float(np.max(np.abs(rho - rho.conj().T))))

    record(0, float(rho.trace().real) - 1.0)
    half = dt / 2
    sixth = dt / 6
    for step in range(1, n_steps + 1):
        k1 = rhs(rho)
        k2 = rhs(rho + half * k1)
        k3 = rhs(rho + half * k2)
        k4 = rhs(rho + dt * k3)
        rho = rho + sixth * (k1 + 2 * k2 + 2 * k3 + k4)
        rho = (rho + rho.conj().T) / 2

        tr = float(rho.trace().real)
        drift = tr - 1.0
        peak_entry = float(np.max(np.abs(rho)))
        if peak_entry > ENTRY_BLOWUP_LIMIT or abs(drift) > config.trace_tol:
            raise NumericalBlowup(
                f"step {step} (t={step * dt:.4g}): max|entry|={peak_entry:.3e}, "
                f"trace drift={drift:.3e}"
            )
        if abs(drift) > RENORM_THRESHOLD:
            rho = rho / tr

        if step % config.record_stride == 0:
            record(step, drift)
            if early_stop is not None:
                window, rel_tol = early_stop
                if _tail_settled(xi, window, rel_tol):
                    break

    return Trajectory(
        times=np.asarray(times),
        xi=np.asarray(xi),
        trace_err=np.asarray(trace_err),
        min_eig=np.asarray(min_eig),
        herm_err=np.asarray(herm_err),
    )


def _tail_settled(xi_list, window, rel_tol):
    if len(xi_list) < window:
        return False
    tail = xi_list[-window:]
    scale = max(abs(v) for v in xi_list)
    return (max(tail) - min(tail)) <= rel_tol * scale


def peak_ergotropy(traj: Trajectory):
    """Maximum recorded xi and its time; ties broken by the earliest time."""
    if traj.xi.size == 0:
        raise ValueError("empty trajectory")
    idx = int(np.argmax(traj.xi))
    return float(traj.xi[idx]), float(traj.times[idx])


def steady_state_reached(traj: Trajectory, window, rel_tol):
    """True when the trailing window of xi has settled to within rel_tol of
    the trajectory's overall scale."""
    if window < 2:
        raise ValueError("window must be >= 2")
    if traj.xi.size < window:
        return False
    tail = traj.xi[-window:]
    scale = float(np.max(np.abs(traj.xi)))
    return bool(float(tail.max() - tail.min()) <= rel_tol * scale)
