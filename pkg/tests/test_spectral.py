import numpy as np
import pytest
from hypothesis import given, strategies as st

from zakharov_lab.errors import InvalidArgument, SingularZeroMode
from zakharov_lab.spectral import (
    Field,
    fractional_op,
    l2_quadrature,
    make_grid,
    sobolev_norm,
    transform,
)


def random_field(grid, rng, real=False, mean_zero=False):
    v = rng.standard_normal(grid.M) + (0 if real else 1j * rng.standard_normal(grid.M))
    if mean_zero:
        v = v - v.mean()
    return Field(grid, v)


def test_wavenumbers_unit_spacing():
    g = make_grid(2 * np.pi, 8)
    np.testing.assert_allclose(np.sort(g.ks), np.arange(-4, 4))


def test_wavenumber_spacing_half():
    g = make_grid(4 * np.pi, 8)
    assert g.dk == pytest.approx(0.5)


@pytest.mark.parametrize("L, M", [(2 * np.pi, 7), (0.0, 8), (-1.0, 8), (1.0, 2)])
def test_bad_grid(L, M):
    with pytest.raises(InvalidArgument):
        make_grid(L, M)


def test_collocation_spacing_exact():
    g = make_grid(3.0, 64)
    np.testing.assert_allclose(np.diff(g.xs), g.L / g.M, rtol=0, atol=1e-15)


def test_single_mode_transform():
    g = make_grid(2 * np.pi, 8)
    fhat = transform(Field(g, np.exp(1j * g.xs)), "forward").values
    expected = np.zeros(8)
    expected[g.k_index == 1] = 1.0
    np.testing.assert_allclose(fhat, expected, atol=1e-15)


def test_round_trip(rng):
    g = make_grid(10.0, 128)
    f = random_field(g, rng)
    back = transform(transform(f, "forward"), "inverse")
    np.testing.assert_allclose(back.values, f.values, rtol=0, atol=1e-13 * np.abs(f.values).max())


def test_real_field_is_hermitian(rng):
    g = make_grid(2 * np.pi, 32)
    c = g.to_spectral(rng.standard_normal(g.M))
    k = g.k_index
    inner = np.abs(k) < g.M // 2
    mirror = np.array([np.flatnonzero(k == -kk)[0] for kk in k[inner]])
    np.testing.assert_allclose(c[inner], np.conj(c[mirror]), atol=1e-15)


def test_transform_kind_mismatch():
    g = make_grid(1.0, 8)
    with pytest.raises(InvalidArgument):
        transform(Field(g, np.zeros(8), "spectral"), "forward")


def test_half_laplacian_on_sine():
    g = make_grid(2 * np.pi, 16)
    out = fractional_op(Field(g, np.sin(2 * g.xs)), 1.0).physical()
    np.testing.assert_allclose(out, 2 * np.sin(2 * g.xs), atol=1e-13)


def test_quarter_derivative_on_cosine():
    g = make_grid(2 * np.pi, 16)
    out = fractional_op(Field(g, np.cos(g.xs)), 0.5).physical()
    np.testing.assert_allclose(out, np.cos(g.xs), atol=1e-13)


def test_inverse_on_constant_zero_rule():
    g = make_grid(2 * np.pi, 16)
    out = fractional_op(Field(g, np.ones(16)), -1.0, "zero").physical()
    np.testing.assert_allclose(out, 0.0, atol=1e-15)


def test_inverse_on_constant_keep_rule_is_singular():
    g = make_grid(2 * np.pi, 16)
    with pytest.raises(SingularZeroMode):
        fractional_op(Field(g, np.ones(16)), -1.0, "keep")


def test_keep_rule_leaves_mean_for_positive_powers():
    g = make_grid(2 * np.pi, 16)
    out = fractional_op(Field(g, 3.0 + np.cos(g.xs)), 2.0, "keep").physical()
    np.testing.assert_allclose(out, 3.0 + np.cos(g.xs), atol=1e-13)


def test_sobolev_single_mode():
    g = make_grid(2 * np.pi, 16)
    c = np.zeros(16, complex)
    c[g.k_index == 3] = 1.0
    assert sobolev_norm(Field(g, c, "spectral"), 1) == pytest.approx(np.sqrt(2 * np.pi) * np.sqrt(10), rel=1e-14)
    assert sobolev_norm(Field(g, c, "spectral"), 1) == pytest.approx(7.9266, abs=1e-4)


def test_sobolev_zero_is_l2(rng):
    g = make_grid(5.0, 64)
    f = random_field(g, rng)
    l2 = np.sqrt(g.L * np.sum(np.abs(f.spectrum()) ** 2))
    assert sobolev_norm(f, 0) == pytest.approx(l2, rel=1e-14)
    assert sobolev_norm(f, 0) == pytest.approx(l2_quadrature(g, f.values), rel=1e-12)


@given(seed=st.integers(0, 2**32 - 1), M=st.sampled_from([8, 16, 64, 256]), L=st.floats(0.5, 200))
def test_parseval(seed, M, L):
    g = make_grid(L, M)
    f = random_field(g, np.random.default_rng(seed))
    assert sobolev_norm(f, 0) ** 2 == pytest.approx(g.dx * np.sum(np.abs(f.values) ** 2), rel=1e-12)


@given(
    seed=st.integers(0, 2**32 - 1),
    a=st.floats(-2, 2),
    b=st.floats(-2, 2),
)
def test_fractional_composition(seed, a, b):
    g = make_grid(2 * np.pi, 32)
    f = random_field(g, np.random.default_rng(seed), mean_zero=True)
    lhs = fractional_op(fractional_op(f, a), b).spectrum()
    rhs = fractional_op(f, a + b).spectrum()
    scale = np.abs(rhs).max()
    np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-12 * scale)


@given(seed=st.integers(0, 2**32 - 1), m1=st.floats(-2, 2), dm=st.floats(0, 2))
def test_sobolev_monotone_in_order(seed, m1, dm):
    g = make_grid(7.0, 32)
    f = random_field(g, np.random.default_rng(seed))
    assert sobolev_norm(f, m1) <= sobolev_norm(f, m1 + dm) * (1 + 1e-14)
