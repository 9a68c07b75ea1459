import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zakharov_lab.errors import BlowUpDetected, InconsistentState, InvalidArgument
from zakharov_lab.functionals import energy, mass
from zakharov_lab.spectral import Field, make_grid
from zakharov_lab.solver import (
    SolverConfig,
    linear_flow,
    nonlinear_flow,
    solve,
    solve_backward,
    strang_step,
)
from zakharov_lab.state import (
    FirstOrderState,
    ZakharovState,
    from_first_order,
    sample_rough_data,
    soliton_exact,
    soliton_state,
    to_first_order,
)


def gaussian_state(g, amp=1.5):
    x = g.xs - g.L / 2
    n = -np.exp(-(x**2) / 2)
    return ZakharovState(g, amp * np.exp(-(x**2) + 1j * x), n - n.mean(), np.zeros(g.M))


def test_config_validation():
    with pytest.raises(InvalidArgument):
        SolverConfig(0.0, 1.0)
    with pytest.raises(InvalidArgument):
        SolverConfig(0.1, 0.01)
    with pytest.raises(InvalidArgument):
        SolverConfig(0.1, 1.0, record_stride=0)
    assert SolverConfig(0.1, 1.0).n_steps == 10


def test_linear_flow_phases():
    g = make_grid(2 * np.pi, 16)
    f = FirstOrderState.from_plus(g, np.exp(2j * g.xs), np.exp(3j * g.xs))
    out = linear_flow(f, 0.3)
    np.testing.assert_allclose(out.u, np.exp(2j * g.xs - 4j * 0.3), atol=1e-14)
    np.testing.assert_allclose(out.n_plus, np.exp(3j * g.xs - 3j * 0.3), atol=1e-14)
    np.testing.assert_allclose(out.n_minus, np.conj(out.n_plus), atol=1e-14)


def test_nonlinear_flow_constant_density():
    # n = 1, |u| = 1: the phase turns at unit rate and n+ is untouched
    g = make_grid(2 * np.pi, 16)
    f = FirstOrderState(g, np.ones(16, complex), np.ones(16, complex), np.ones(16, complex))
    out = nonlinear_flow(f, 0.7)
    np.testing.assert_allclose(out.u, np.exp(-0.7j), atol=1e-14)
    np.testing.assert_allclose(out.n_plus, 1.0, atol=1e-14)


def test_nonlinear_flow_keeps_modulus():
    g = make_grid(8 * np.pi, 64)
    f = to_first_order(sample_rough_data(g, 0.8, seed=2))
    out = nonlinear_flow(f, 0.25)
    np.testing.assert_allclose(np.abs(out.u), np.abs(f.u), rtol=1e-13)


def test_zero_data_stays_zero():
    g = make_grid(2 * np.pi, 32)
    f = FirstOrderState.from_plus(g, np.zeros(32), np.zeros(32))
    traj = solve(f, SolverConfig(1e-2, 1.0, record_stride=10))
    for st_ in traj.states:
        assert not st_.u.any() and not st_.n_plus.any()


def test_free_wave_without_density():
    g = make_grid(2 * np.pi, 32)
    f = FirstOrderState.from_plus(g, np.exp(3j * g.xs), np.zeros(32))
    traj = solve(f, SolverConfig(1e-2, 1.0, record_stride=100))
    # |u|^2 is constant, so the forcing vanishes and u is a plane wave
    np.testing.assert_allclose(traj.states[-1].u, np.exp(3j * g.xs - 9j), atol=1e-12)
    np.testing.assert_allclose(traj.states[-1].n_plus, 0, atol=1e-12)


def test_record_stride_and_times():
    g = make_grid(2 * np.pi, 16)
    f = FirstOrderState.from_plus(g, np.exp(1j * g.xs), np.zeros(16))
    traj = solve(f, SolverConfig(0.01, 1.0, record_stride=25), t0=2.0)
    np.testing.assert_allclose(traj.times, [2.0, 2.25, 2.5, 2.75, 3.0])
    assert len(traj) == 5 and traj.dt == pytest.approx(0.25)
    assert traj.component("u").shape == (5, 16)


def test_mass_and_conjugacy_many_steps():
    g = make_grid(8 * np.pi, 256)
    f = to_first_order(sample_rough_data(g, 0.8, amp=0.3, seed=4))
    m0 = mass(Field(g, f.u))
    traj = solve(f, SolverConfig(1e-3, 2.0, record_stride=500))
    for st_ in traj.states:
        assert mass(Field(g, st_.u)) == pytest.approx(m0, rel=1e-12)
        assert st_.conjugacy_error() == 0.0


@settings(max_examples=10)
@given(seed=st.integers(0, 2**32 - 1))
def test_time_reversible(seed):
    g = make_grid(8 * np.pi, 64)
    f = to_first_order(sample_rough_data(g, 0.8, amp=0.2, seed=seed))
    fwd = solve(f, SolverConfig(1e-2, 0.5, record_stride=50))
    back = solve_backward(fwd.states[-1], SolverConfig(1e-2, 0.5, record_stride=50), t0=0.5)
    assert back.times[0] == pytest.approx(0.0, abs=1e-14)
    np.testing.assert_allclose(back.states[0].u, f.u, atol=1e-11)
    np.testing.assert_allclose(back.states[0].n_plus, f.n_plus, atol=1e-11)


def test_strang_step_matches_solver():
    g = make_grid(8 * np.pi, 64)
    f = to_first_order(gaussian_state(g))
    a = strang_step(strang_step(f, 0.01), 0.01)
    b = solve(f, SolverConfig(0.01, 0.02, record_stride=2)).states[-1]
    np.testing.assert_allclose(a.u, b.u, atol=1e-13)
    np.testing.assert_allclose(a.n_plus, b.n_plus, atol=1e-13)


def _final(f, dt, T=1.0):
    return solve(f, SolverConfig(dt, T, record_stride=int(round(T / dt)))).states[-1]


def test_energy_error_second_order():
    g = make_grid(8 * np.pi, 128)
    z = gaussian_state(g)
    e0 = energy(z).total
    f = to_first_order(z)
    errs = [abs(energy(from_first_order(_final(f, dt))).total - e0) for dt in (4e-3, 2e-3, 1e-3)]
    assert 3.5 < errs[0] / errs[1] < 4.5
    assert 3.5 < errs[1] / errs[2] < 4.5


def test_richardson_order():
    g = make_grid(8 * np.pi, 128)
    f = to_first_order(gaussian_state(g))
    u = [_final(f, dt).u for dt in (4e-3, 2e-3, 1e-3)]
    order = np.log2(np.linalg.norm(u[0] - u[1]) / np.linalg.norm(u[1] - u[2]))
    assert 1.8 <= order <= 2.2


def test_soliton_shape_short_run():
    g = make_grid(32 * np.pi, 512)
    z = soliton_state(g, 1.0, 0.5)
    x0 = g.L / 2
    traj = solve(to_first_order(z), SolverConfig(1e-3, 1.0, record_stride=1000))
    exact = soliton_exact(g, 1.0, 0.5, x0, 1.0)
    err = np.linalg.norm(traj.states[-1].u - exact) / np.linalg.norm(exact)
    assert err < 1e-4


def test_blowup_reports_partial():
    g = make_grid(2 * np.pi, 32)
    f = FirstOrderState.from_plus(g, 1e154 * np.exp(1j * g.xs) * (1 + 0.5 * np.cos(g.xs)), np.zeros(32))
    with np.errstate(all="ignore"), pytest.raises(BlowUpDetected) as info:
        solve(f, SolverConfig(0.1, 10.0))
    assert info.value.last_valid_time == 0.0
    assert len(info.value.partial) == 1
    assert np.isfinite(info.value.partial.states[0].u).all()


def test_rejects_broken_conjugacy():
    g = make_grid(2 * np.pi, 16)
    f = FirstOrderState(g, np.zeros(16, complex), np.ones(16, complex), np.zeros(16, complex))
    with pytest.raises(InconsistentState):
        solve(f, SolverConfig(0.1, 1.0))
