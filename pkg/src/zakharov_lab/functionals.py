"""Conserved quantities, the modified energy and its time derivative.

Products entering a coupling integral use the solver's dealiasing convention:
with ``dealias=True`` the density factor (n, or |u|^2 when it forces the wave
equation) is passed through the two-thirds filter P before multiplying.  The
energy coupling is therefore ``int (P n) |u|^2 dx``, which is what the
dealiased semi-discrete system conserves.  For band-limited data below M/3
this is the plain quadrature ``(L/M) sum n_j |u_j|^2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .imethod import Multiplier
from .spectral import Field, SpectralGrid
from .state import FirstOrderState, ZakharovState


@dataclass(frozen=True)
class EnergyReport:
    mass: float
    kinetic: float
    wave: float
    coupling: float
    total: float


@dataclass(frozen=True)
class FluxComponents:
    """Signed real contributions of the three commutator integrals.

    ``f18 + f19 + f20`` equals :func:`modified_energy_flux`.
    """

    f18: float
    f19: float
    f20: float

    @property
    def total(self) -> float:
        return self.f18 + self.f19 + self.f20


def _filter(grid: SpectralGrid, dealias: bool) -> np.ndarray:
    return grid.dealias_mask().astype(np.float64) if dealias else np.ones(grid.M)


def _sq_norm(grid: SpectralGrid, coeffs: np.ndarray, weight=None) -> float:
    a = np.abs(coeffs) ** 2
    if weight is not None:
        a = weight * a
    return float(grid.L * np.sum(a))


def _coupling(grid: SpectralGrid, density_hat: np.ndarray, u: np.ndarray, dealias: bool) -> float:
    """int (P density) |u|^2 dx for a real density given by its spectrum."""
    dens = grid.to_physical(_filter(grid, dealias) * density_hat).real
    return float(grid.dx * np.sum(dens * np.abs(u) ** 2))


def mass(u: Field) -> float:
    """L^2 norm ||u||, conserved by the flow."""
    return float(np.sqrt(_sq_norm(u.grid, u.spectrum())))


def energy(s: ZakharovState, dealias: bool = True) -> EnergyReport:
    g = s.grid
    u_hat = g.to_spectral(s.u)
    n_hat = g.to_spectral(s.n)
    kinetic = _sq_norm(g, u_hat, g.ks**2)
    wave = 0.5 * (_sq_norm(g, n_hat) + _sq_norm(g, g.to_spectral(s.v)))
    coupling = _coupling(g, n_hat, s.u, dealias)
    return EnergyReport(
        mass=float(np.sqrt(_sq_norm(g, u_hat))),
        kinetic=kinetic,
        wave=wave,
        coupling=coupling,
        total=kinetic + wave + coupling,
    )


def energy_plus(u: Field, n_plus: Field, dealias: bool = True) -> float:
    """E(u, n+) = ||A^(1/2) u||^2 + 1/2 ||n+||^2 + 1/2 int (n+ + conj n+) |u|^2."""
    g = u.grid
    u_hat = u.spectrum()
    np_hat = n_plus.spectrum()
    dens_hat = g.to_spectral(2.0 * n_plus.physical().real)
    return (
        _sq_norm(g, u_hat, g.ks**2)
        + 0.5 * _sq_norm(g, np_hat)
        + 0.5 * _coupling(g, dens_hat, u.physical(), dealias)
    )


def modified_energy(f: FirstOrderState, m: Multiplier, dealias: bool = True) -> float:
    """E(Iu, In+) = ||(Iu)_x||^2 + 1/2 ||In+||^2 + 1/2 int I(n+ + conj n+) |Iu|^2."""
    g = f.grid
    sym = m.symbol
    w_hat = sym * g.to_spectral(f.u)
    q_hat = sym * g.to_spectral(f.n_plus)
    rho_hat = sym * g.to_spectral(f.n_plus + f.n_minus)
    w = g.to_physical(w_hat)
    return (
        _sq_norm(g, w_hat, g.ks**2)
        + 0.5 * _sq_norm(g, q_hat)
        + 0.5 * _coupling(g, rho_hat, w, dealias)
    )


def _flux_integrals(f: FirstOrderState, m: Multiplier, dealias: bool):
    g = f.grid
    P = _filter(g, dealias)
    sym = m.symbol
    ks = g.ks
    u = f.u
    u_hat = g.to_spectral(u)
    two_n_hat = g.to_spectral(f.n_plus + f.n_minus)
    n_filt = 0.5 * g.to_physical(P * two_n_hat).real

    w_hat = sym * u_hat
    w = g.to_physical(w_hat)
    w_xx = g.to_physical(-(ks**2) * w_hat)
    I_nu = g.to_physical(sym * g.to_spectral(n_filt * u))
    rho_filt = g.to_physical(P * sym * two_n_hat).real
    commutator = 2.0 * I_nu - rho_filt * w

    q = g.to_physical(sym * g.to_spectral(f.n_plus))
    h_hat = P * (g.to_spectral(np.abs(w) ** 2) - sym * g.to_spectral(np.abs(u) ** 2))
    half_deriv_h = g.to_physical(np.abs(ks) * h_hat).real

    dx = g.dx
    f18 = dx * np.sum(q * half_deriv_h)
    f19 = dx * np.sum(commutator * np.conj(w_xx))
    f20 = dx * np.sum(commutator * np.conj(I_nu))
    return f18, f19, f20


def flux_components(f: FirstOrderState, m: Multiplier, dealias: bool = True) -> FluxComponents:
    """Instantaneous values of the three commutator integrals.

    f18 ~ int In+ A^(1/2)(|Iu|^2 - I|u|^2), f19 ~ int (Iu)_xx (I(n u) - In Iu),
    f20 ~ int I(n u) (I(n u) - In Iu), with the density n = (n+ + n-)/2, complex
    conjugates placed so that the imaginary parts recombine exactly:
    flux = Im f18 - Im f19 + Im f20.
    """
    f18, f19, f20 = _flux_integrals(f, m, dealias)
    return FluxComponents(float(f18.imag), float(-f19.imag), float(f20.imag))


def modified_energy_flux(f: FirstOrderState, m: Multiplier, dealias: bool = True) -> float:
    """d/dt E(Iu, In+) along the flow, with Iu_t eliminated through the equation."""
    return flux_components(f, m, dealias).total


def gn_ratio(u: Field) -> float:
    """||u||_4^4 / (||u_x|| ||u||^3 + ||u||^4 / L), bounded by 2 on the torus."""
    g = u.grid
    u_hat = u.spectrum()
    l2 = np.sqrt(_sq_norm(g, u_hat))
    if l2 == 0:
        raise InvalidArgument("Gagliardo-Nirenberg ratio undefined for the zero field")
    ux = np.sqrt(_sq_norm(g, u_hat, g.ks**2))
    l4 = g.dx * np.sum(np.abs(u.physical()) ** 4)
    return float(l4 / (ux * l2**3 + l2**4 / g.L))


def coercivity_ratio(f: FirstOrderState, m: Multiplier, dealias: bool = True) -> float:
    """(||Iu_x||^2 + ||In+||^2) / (E(Iu, In+) + ||Iu||^6)."""
    g = f.grid
    w_hat = m.symbol * g.to_spectral(f.u)
    q_hat = m.symbol * g.to_spectral(f.n_plus)
    lhs = _sq_norm(g, w_hat, g.ks**2) + _sq_norm(g, q_hat)
    rhs = modified_energy(f, m, dealias) + _sq_norm(g, w_hat) ** 3
    return float(lhs / rhs)


def fit_coercivity_constant(states, m: Multiplier, dealias: bool = True) -> float:
    """Smallest c0 with ||Iu_x||^2 + ||In+||^2 <= c0 (E_I + M_I^6) on ``states``."""
    return max(coercivity_ratio(f, m, dealias) for f in states)
