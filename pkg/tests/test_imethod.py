import numpy as np
import pytest
from hypothesis import given, strategies as st

from zakharov_lab.errors import InvalidArgument
from zakharov_lab.imethod import (
    apply_I,
    cutoff_profile,
    identity_multiplier,
    make_cutoff,
    make_multiplier,
    multiplier_symbol,
)
from zakharov_lab.spectral import Field, fractional_op, make_grid, sobolev_norm


def test_flat_below_N():
    assert multiplier_symbol(2.0, 4.0, 5 / 6) == 1.0


def test_tail_value():
    assert multiplier_symbol(16.0, 4.0, 5 / 6) == pytest.approx(0.25 ** (1 / 6), rel=1e-14)
    assert multiplier_symbol(16.0, 4.0, 5 / 6) == pytest.approx(0.79370, abs=1e-5)


def test_monotone_through_blend():
    m = multiplier_symbol(np.array([4.0, 6.0, 8.0]), 4.0, 0.9)
    assert m[2] <= m[1] <= m[0] == 1.0


def test_exact_outside_blend():
    xi = np.linspace(-100, 100, 2001)
    N, s = 5.0, 0.7
    m = multiplier_symbol(xi, N, s)
    a = np.abs(xi)
    np.testing.assert_array_equal(m[a <= N], 1.0)
    np.testing.assert_allclose(m[a >= 2 * N], (N / a[a >= 2 * N]) ** (1 - s), rtol=1e-14)


@pytest.mark.parametrize("edge", [1.0, 2.0])
def test_c1_at_blend_ends(edge):
    N, s, h = 3.0, 0.6, 1e-7
    x = edge * N
    f = lambda t: float(multiplier_symbol(t, N, s))  # noqa: E731
    left = (f(x) - f(x - h)) / h
    right = (f(x + h) - f(x)) / h
    assert abs(left - right) < 1e-6


@given(N=st.floats(0.5, 50), s=st.floats(0.51, 1.0))
def test_symbol_properties(N, s):
    xi = np.linspace(-300, 300, 1201)
    m = multiplier_symbol(xi, N, s)
    np.testing.assert_array_equal(m, m[::-1])
    assert np.all((m > 0) & (m <= 1))
    right = m[xi >= 0]
    assert np.all(np.diff(right) <= 1e-15)


@given(N1=st.floats(0.5, 20), dN=st.floats(0, 20), s=st.floats(0.51, 1.0))
def test_nondecreasing_in_N(N1, dN, s):
    xi = np.linspace(0, 200, 401)
    assert np.all(multiplier_symbol(xi, N1 + dN, s) >= multiplier_symbol(xi, N1, s) - 1e-15)


@pytest.mark.parametrize("N, s", [(0.0, 0.9), (-1.0, 0.9), (4.0, 0.5), (4.0, 1.1)])
def test_bad_parameters(N, s):
    with pytest.raises(InvalidArgument):
        make_multiplier(make_grid(2 * np.pi, 16), N, s)


def test_identity_when_N_exceeds_grid(rng):
    g = make_grid(2 * np.pi, 64)
    f = Field(g, rng.standard_normal(64) + 1j * rng.standard_normal(64))
    np.testing.assert_allclose(apply_I(f, identity_multiplier(g)).values, f.values, rtol=0, atol=1e-14)


def test_tail_mode_scaling():
    g = make_grid(2 * np.pi, 128)
    N, s = 8.0, 0.75
    m = make_multiplier(g, N, s)
    f = Field(g, np.cos(4 * N * g.xs))
    np.testing.assert_allclose(apply_I(f, m).values.real, 4 ** (-(1 - s)) * f.values.real, atol=1e-14)


def test_grid_mismatch():
    m = make_multiplier(make_grid(2 * np.pi, 16), 2.0, 0.9)
    with pytest.raises(InvalidArgument):
        apply_I(Field(make_grid(2 * np.pi, 32), np.zeros(32)), m)


def test_smoothing_bound_hundred_fields(rng):
    g = make_grid(2 * np.pi, 256)
    for _ in range(100):
        N = rng.uniform(2, 60)
        s = rng.uniform(0.55, 1.0)
        mo = rng.uniform(-1, 1)
        m = make_multiplier(g, N, s)
        f = Field(g, rng.standard_normal(256) + 1j * rng.standard_normal(256))
        lhs = sobolev_norm(apply_I(f, m), mo + 1 - s)
        assert lhs <= 2 * N ** (1 - s) * sobolev_norm(f, mo)


@given(seed=st.integers(0, 2**32 - 1), a=st.floats(-1.5, 1.5), mo=st.floats(-1, 2))
def test_commutes_and_contracts(seed, a, mo):
    rng = np.random.default_rng(seed)
    g = make_grid(2 * np.pi, 64)
    v = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    f = Field(g, v - v.mean())
    m = make_multiplier(g, rng.uniform(1, 20), rng.uniform(0.55, 1.0))
    lhs = apply_I(fractional_op(f, a), m).values
    rhs = fractional_op(apply_I(f, m), a).values
    np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-13 * max(1.0, np.abs(rhs).max()))
    assert sobolev_norm(apply_I(f, m), mo) <= sobolev_norm(f, mo) * (1 + 1e-14)


def test_real_fields_stay_real(rng):
    g = make_grid(2 * np.pi, 64)
    f = Field(g, rng.standard_normal(64))
    out = apply_I(f, make_multiplier(g, 5.0, 0.8)).values
    assert np.abs(out.imag).max() < 1e-15


def test_cutoff_examples():
    delta = 0.3
    t = np.linspace(-1.0, 1.0, 2001)
    w = make_cutoff(delta, t)
    assert cutoff_profile(0.0) == 1.0
    assert float(cutoff_profile(2.1)) == 0.0 and float(cutoff_profile(-2.1)) == 0.0
    np.testing.assert_allclose(w.samples, w.samples[::-1], atol=1e-14)
    area = np.trapezoid(w.samples, t)
    assert 2 * delta < area < 4 * delta


@given(delta=st.floats(0.01, 5))
def test_cutoff_invariants(delta):
    t = np.linspace(-3 * delta, 3 * delta, 601)
    w = make_cutoff(delta, t).samples
    assert np.all((w >= 0) & (w <= 1))
    np.testing.assert_array_equal(w[np.abs(t) <= delta], 1.0)
    assert np.all(w[np.abs(t) >= 2 * delta] == 0.0)
    np.testing.assert_allclose(w, w[::-1], atol=1e-15)


def test_cutoff_needs_resolution():
    with pytest.raises(InvalidArgument):
        make_cutoff(0.1, np.linspace(-1, 1, 21))
    with pytest.raises(InvalidArgument):
        make_cutoff(0.0, np.linspace(-1, 1, 201))


def test_cutoff_centre_shift():
    t = np.linspace(0, 4, 401)
    w = make_cutoff(0.5, t, center=2.0)
    assert w.samples[200] == 1.0 and w.samples[0] == 0.0
