"""Open-system dynamics: master-equation generator, integrator, diagnostics."""

import math

import numpy as np
import pytest
from conftest import random_density, random_hermitian

from qbattery.errors import DimensionMismatch, NumericalBlowup
from qbattery.linalg import frob_dist
from qbattery.model import ChainSpec, build_h_charge, build_h_qb, site_operator
from qbattery.open_system import (
    IntegratorConfig,
    LindbladSpec,
    Trajectory,
    _compile_rhs,
    integrate,
    lindblad_rhs,
    peak_ergotropy,
    site_dephasing_spec,
    steady_state_reached,
)
from qbattery.thermal import DensityMatrix, Temperature, gibbs_state


def weak_field_setup(n_sites=2, b_field=0.25, omega=0.25, g=0.2, temperature=0.1):
    chain = ChainSpec(n_sites=n_sites, b_field=b_field)
    h_qb = build_h_qb(chain)
    h_total = h_qb + build_h_charge(n_sites, omega)
    zeta = gibbs_state(h_qb, Temperature(temperature))
    spec = site_dephasing_spec(h_total, n_sites, g)
    return zeta, spec, h_qb


def test_spec_validation():
    with pytest.raises(DimensionMismatch):
        LindbladSpec(h_total=np.eye(4), jump_ops=(np.eye(2),), g=0.1)
    with pytest.raises(ValueError):
        LindbladSpec(h_total=np.eye(4), jump_ops=(), g=-0.1)


def test_site_dephasing_operators():
    spec = site_dephasing_spec(np.zeros((4, 4)), 2, 0.2)
    assert len(spec.jump_ops) == 2
    root = math.sqrt(0.2)
    assert frob_dist(spec.jump_ops[0], root * site_operator(2, 1, "x")) <= 1e-15
    assert frob_dist(spec.jump_ops[1], root * site_operator(2, 2, "x")) <= 1e-15


def test_generator_is_traceless():
    rng = np.random.default_rng(107)
    _, spec, _ = weak_field_setup(n_sites=3)
    for _ in range(20):
        rho = random_density(rng, 8)
        assert abs(lindblad_rhs(rho, spec).trace()) <= 1e-13


def test_generator_preserves_hermiticity():
    rng = np.random.default_rng(109)
    _, spec, _ = weak_field_setup(n_sites=2)
    for _ in range(20):
        rho = random_density(rng, 4)
        out = lindblad_rhs(rho, spec)
        assert frob_dist(out, out.conj().T) <= 1e-13


def test_gibbs_is_stationary_without_noise_or_drive():
    chain = ChainSpec(n_sites=2, j_coupling=0.5, b_field=0.25)
    h_qb = build_h_qb(chain)
    zeta = gibbs_state(h_qb, Temperature(0.1))
    spec = LindbladSpec(h_total=h_qb, jump_ops=(), g=0.0)
    assert np.max(np.abs(lindblad_rhs(zeta.mat, spec))) <= 1e-13


def test_permutation_fast_path_matches_generic_generator():
    rng = np.random.default_rng(113)
    _, spec, _ = weak_field_setup(n_sites=3, g=0.3)
    rhs, used_fast = _compile_rhs(spec)
    assert used_fast
    for _ in range(10):
        rho = random_density(rng, 8)
        assert frob_dist(rhs(rho), lindblad_rhs(rho, spec)) <= 1e-14


def test_nonpermutation_jump_ops_take_generic_path():
    rng = np.random.default_rng(127)
    op = random_hermitian(rng, 4, scale=0.5)
    spec = LindbladSpec(h_total=np.zeros((4, 4)), jump_ops=(op,), g=1.0)
    rhs, used_fast = _compile_rhs(spec)
    assert not used_fast
    rho = random_density(rng, 4)
    assert frob_dist(rhs(rho), lindblad_rhs(rho, spec)) <= 1e-14


def test_stationary_state_stays_flat():
    # no drive, no noise: xi stays at zero through the whole run
    chain = ChainSpec(n_sites=2, j_coupling=0.3, b_field=0.25)
    h_qb = build_h_qb(chain)
    zeta = gibbs_state(h_qb, Temperature(0.1))
    spec = LindbladSpec(h_total=h_qb, jump_ops=(), g=0.0)
    traj = integrate(zeta, spec, h_qb, IntegratorConfig(dt=0.005, t_max=2.0))
    assert np.max(np.abs(traj.xi)) <= 1e-8


def test_zero_noise_spectrum_is_conserved():
    zeta, _, h_qb = weak_field_setup(g=0.0)
    spec = site_dephasing_spec(h_qb + build_h_charge(2, 0.25), 2, 0.0)
    traj = integrate(zeta, spec, h_qb, IntegratorConfig(dt=0.005, t_max=10.0))
    floor = float(np.linalg.eigvalsh(zeta.mat)[0])
    assert np.max(np.abs(traj.min_eig - floor)) <= 1e-6


def test_weak_field_dimer_run():
    zeta, spec, h_qb = weak_field_setup()
    traj = integrate(zeta, spec, h_qb, IntegratorConfig(dt=0.005, t_max=60.0))
    xi_max, t_star = peak_ergotropy(traj)
    assert xi_max == pytest.approx(0.4933033157091259, rel=1e-6)
    assert t_star == pytest.approx(60.0, abs=0.5)  # saturating rise, peak at the end
    # the noise is unital, so the plateau is the fully mixed state's energy gain
    plateau = -np.vdot(h_qb, zeta.mat).real
    assert traj.xi[-1] == pytest.approx(plateau, abs=1e-4)
    assert xi_max <= plateau + 1e-3  # no overshoot on the way up
    assert np.max(traj.trace_err) <= 1e-7
    assert np.min(traj.min_eig) >= -1e-6
    assert np.max(traj.herm_err) <= 1e-10
    assert traj.xi[0] == 0.0


def test_halving_dt_barely_moves_the_answer():
    zeta, spec, h_qb = weak_field_setup()
    coarse = integrate(zeta, spec, h_qb, IntegratorConfig(dt=0.01, t_max=5.0))
    fine = integrate(zeta, spec, h_qb, IntegratorConfig(dt=0.005, t_max=5.0, record_stride=40))
    assert coarse.xi[-1] == pytest.approx(fine.xi[-1], rel=1e-6)


def test_steady_state_detection_on_generated_run():
    zeta, spec, h_qb = weak_field_setup()
    traj = integrate(zeta, spec, h_qb, IntegratorConfig(dt=0.005, t_max=60.0))
    assert steady_state_reached(traj, 100, 1e-4)
    assert not steady_state_reached(traj, 200, 1e-5)  # tail still creeping upward
    with pytest.raises(ValueError):
        steady_state_reached(traj, 1, 1e-4)


def test_steady_state_synthetic_tails():
    times = np.linspace(0, 10, 101)
    flat = Trajectory(
        times=times,
        xi=np.concatenate([np.linspace(0, 1, 51), np.full(50, 1.0)]),
        trace_err=np.zeros(101),
        min_eig=np.zeros(101),
        herm_err=np.zeros(101),
    )
    rising = Trajectory(
        times=times,
        xi=np.linspace(0, 1, 101),
        trace_err=np.zeros(101),
        min_eig=np.zeros(101),
        herm_err=np.zeros(101),
    )
    assert steady_state_reached(flat, 30, 1e-9)
    assert not steady_state_reached(rising, 30, 1e-9)
    assert not steady_state_reached(flat, 500, 1e-9)  # window longer than the record


def test_early_stop_halts_settled_run():
    # relaxation without a drive settles quickly; the stopper should fire
    chain = ChainSpec(n_sites=2, b_field=0.25)
    h_qb = build_h_qb(chain)
    zeta = gibbs_state(h_qb, Temperature(0.1))
    spec = site_dephasing_spec(h_qb, 2, 1.0)
    traj = integrate(
        zeta, spec, h_qb, IntegratorConfig(dt=0.005, t_max=60.0), early_stop=(20, 1e-6)
    )
    assert traj.times[-1] < 20.0
    assert steady_state_reached(traj, 20, 1e-6)
    assert traj.xi[-1] == pytest.approx(-np.vdot(h_qb, zeta.mat).real, abs=1e-6)


def test_blowup_is_reported():
    zeta, _, h_qb = weak_field_setup()
    wild = site_dephasing_spec(h_qb + build_h_charge(2, 0.25), 2, 1e4)
    with pytest.raises(NumericalBlowup):
        integrate(zeta, wild, h_qb, IntegratorConfig(dt=1.0, t_max=10.0))


def test_dimension_mismatch_rejected():
    zeta, spec, _ = weak_field_setup()
    with pytest.raises(DimensionMismatch):
        integrate(zeta, spec, np.eye(8), IntegratorConfig(dt=0.01, t_max=1.0))


def test_peak_tie_breaks_earliest():
    traj = Trajectory(
        times=np.array([0.0, 1.0, 2.0]),
        xi=np.array([0.0, 3.0, 3.0]),
        trace_err=np.zeros(3),
        min_eig=np.zeros(3),
        herm_err=np.zeros(3),
    )
    assert peak_ergotropy(traj) == (3.0, 1.0)


def test_integrator_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(dt=1.0, t_max=1.0)
    with pytest.raises(ValueError):
        IntegratorConfig(dt=-0.1, t_max=1.0)
    with pytest.raises(ValueError):
        IntegratorConfig(dt=0.1, t_max=1.0, record_stride=0)


def test_trajectory_validation():
    with pytest.raises(ValueError):
        Trajectory(
            times=np.zeros(3),
            xi=np.zeros(2),
            trace_err=np.zeros(3),
            min_eig=np.zeros(3),
            herm_err=np.zeros(3),
        )
    with pytest.raises(ValueError):
        Trajectory(
            times=np.zeros(2),
            xi=np.array([0.5, 1.0]),
            trace_err=np.zeros(2),
            min_eig=np.zeros(2),
            herm_err=np.zeros(2),
        )
