"""Spin-chain quantum battery simulator.

Library layers: dense linear algebra (`linalg`), Hamiltonian construction
(`model`), thermal states (`thermal`), closed-system charging sweeps
(`closed`), dephased open-system charging (`open_system`), power-law scaling
fits (`scaling`), and the experiment runner/CLI (`config`, `presets`,
`runner`, `cli`).
"""

__version__ = "0.1.0"

from .closed import (
    ChargeProtocol,
    ErgotropyTrace,
    SweepResult,
    charging_unitary,
    charging_unitary_closed_form_two_site,
    detect_transitions,
    energy_difference,
    ergotropy_trace_mode,
    evolve_closed,
    max_ergotropy,
    sweep_1d,
)
from .errors import (
    ConfigError,
    ConfigSyntax,
    ConfigValidation,
    DimensionMismatch,
    NoConvergence,
    NonHermitianInput,
    NonPositivePeak,
    NonPositiveTemperature,
    NonUnitaryOperator,
    NumericalBlowup,
    QBatteryError,
    SingularJacobian,
    SiteOutOfRange,
    UnknownFigure,
    UnknownParameter,
)
from .linalg import (
    HermitianEig,
    expm_hermitian_scaled,
    frob_dist,
    hermitian_eig,
    kron,
    matrices_close,
)
from .model import (
    ChainSpec,
    ModeCoefficients,
    ModeSpec,
    build_h_charge,
    build_h_field,
    build_h_gamma,
    build_h_mode,
    build_h_qb,
    build_h_xy,
    mode_coefficients,
    site_operator,
    to_mode_basis,
)
from .open_system import (
    IntegratorConfig,
    LindbladSpec,
    Trajectory,
    integrate,
    lindblad_rhs,
    peak_ergotropy,
    site_dephasing_spec,
    steady_state_reached,
)
from .scaling import PeakSeries, PowerLawFit, classify_scaling, fit_power_law
from .thermal import DensityMatrix, Temperature, gibbs_mode_analytic, gibbs_state, mode_gibbs

__all__ = [name for name in dir() if not name.startswith("_")]
