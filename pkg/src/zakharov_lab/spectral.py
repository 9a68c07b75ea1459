"""Periodic spectral grid, discrete Fourier transforms and Fourier multipliers.

Conventions (fixed for the whole package)::

    fhat_k = (1/M) sum_j f_j exp(-i xi_k x_j)       x_j = j L / M
    f_j    = sum_k fhat_k exp(i xi_k x_j)          xi_k = 2 pi k / L

so that ``int_0^L |f|^2 dx = L sum_k |fhat_k|^2``.  Spectral arrays are kept in
numpy FFT order (k = 0, 1, ..., M/2-1, -M/2, ..., -1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import InvalidArgument, SingularZeroMode

Kind = Literal["physical", "spectral"]


@dataclass(frozen=True, eq=False)
class SpectralGrid:
    L: float
    M: int
    xs: np.ndarray = field(repr=False)
    ks: np.ndarray = field(repr=False)

    @property
    def dx(self) -> float:
        return self.L / self.M

    @property
    def dk(self) -> float:
        return 2 * np.pi / self.L

    @property
    def k_index(self) -> np.ndarray:
        """Integer mode numbers in FFT order."""
        return np.fft.fftfreq(self.M, d=1.0 / self.M).astype(np.int64)

    @property
    def xi_max(self) -> float:
        """Largest resolved |xi| (the Nyquist frequency)."""
        return np.pi * self.M / self.L

    def same_as(self, other: "SpectralGrid") -> bool:
        return self is other or (self.L == other.L and self.M == other.M)

    def to_spectral(self, values: np.ndarray) -> np.ndarray:
        return np.fft.fft(values, axis=-1) / self.M

    def to_physical(self, coeffs: np.ndarray) -> np.ndarray:
        return np.fft.ifft(coeffs, axis=-1) * self.M

    def bracket(self, power: float = 1.0) -> np.ndarray:
        """Japanese bracket <xi>^power = (1 + xi^2)^(power/2)."""
        return (1.0 + self.ks**2) ** (0.5 * power)

    def dealias_mask(self) -> np.ndarray:
        """Two-thirds rule: keep modes with |k| <= M // 3."""
        return np.abs(self.k_index) <= self.M // 3

    def odd_mask(self) -> np.ndarray:
        """Zero at the Nyquist mode so that odd multipliers keep real fields real."""
        mask = np.ones(self.M)
        mask[self.M // 2] = 0.0
        return mask


def make_grid(L: float, M: int) -> SpectralGrid:
    if not (isinstance(M, (int, np.integer)) and M >= 4 and M % 2 == 0):
        raise InvalidArgument(f"M must be an even integer >= 4, got {M!r}")
    if not (np.isfinite(L) and L > 0):
        raise InvalidArgument(f"L must be positive, got {L!r}")
    M = int(M)
    L = float(L)
    xs = np.arange(M) * (L / M)
    ks = 2 * np.pi / L * np.fft.fftfreq(M, d=1.0 / M)
    return SpectralGrid(L=L, M=M, xs=xs, ks=ks)


@dataclass(frozen=True, eq=False)
class Field:
    grid: SpectralGrid
    values: np.ndarray
    kind: Kind = "physical"

    def __post_init__(self):
        if self.kind not in ("physical", "spectral"):
            raise InvalidArgument(f"unknown field kind {self.kind!r}")
        values = np.asarray(self.values, dtype=np.complex128)
        if values.shape != (self.grid.M,):
            raise InvalidArgument(
                f"field has shape {values.shape}, grid expects ({self.grid.M},)"
            )
        object.__setattr__(self, "values", values)

    def spectrum(self) -> np.ndarray:
        if self.kind == "spectral":
            return self.values
        return self.grid.to_spectral(self.values)

    def physical(self) -> np.ndarray:
        if self.kind == "physical":
            return self.values
        return self.grid.to_physical(self.values)

    def with_spectrum(self, coeffs: np.ndarray) -> "Field":
        """New field of the same kind built from spectral coefficients."""
        if self.kind == "spectral":
            return Field(self.grid, coeffs, "spectral")
        return Field(self.grid, self.grid.to_physical(coeffs), "physical")


def transform(f: Field, direction: Literal["forward", "inverse"]) -> Field:
    if direction == "forward":
        if f.kind != "physical":
            raise InvalidArgument("forward transform expects a physical field")
        return Field(f.grid, f.grid.to_spectral(f.values), "spectral")
    if direction == "inverse":
        if f.kind != "spectral":
            raise InvalidArgument("inverse transform expects a spectral field")
        return Field(f.grid, f.grid.to_physical(f.values), "physical")
    raise InvalidArgument(f"unknown direction {direction!r}")


def abs_symbol(grid: SpectralGrid, a: float) -> np.ndarray:
    """|xi|^a with the xi = 0 entry set to 0."""
    absk = np.abs(grid.ks)
    out = np.zeros(grid.M)
    nz = absk > 0
    out[nz] = absk[nz] ** a
    return out


def fractional_op(
    f: Field, a: float, zero_mode: Literal["zero", "keep"] = "zero"
) -> Field:
    """Apply the multiplier |xi|^a (A^(a/2) with A = -d^2/dx^2)."""
    coeffs = f.spectrum()
    if zero_mode not in ("zero", "keep"):
        raise InvalidArgument(f"unknown zero-mode rule {zero_mode!r}")
    if a < 0 and zero_mode == "keep":
        scale = max(1.0, float(np.max(np.abs(coeffs))))
        if abs(coeffs[0]) > 1e-12 * scale:
            raise SingularZeroMode(
                f"|xi|^{a} is singular at xi = 0 and the field has mean {coeffs[0]!r}"
            )
    out = abs_symbol(f.grid, a) * coeffs
    if zero_mode == "keep":
        out[0] = coeffs[0]
    return f.with_spectrum(out)


def derivative(f: Field, order: int = 1) -> Field:
    """d^order/dx^order; odd orders vanish on the Nyquist mode."""
    sym = (1j * f.grid.ks) ** order
    if order % 2:
        sym = sym * f.grid.odd_mask()
    return f.with_spectrum(sym * f.spectrum())


def sobolev_norm_coeffs(grid: SpectralGrid, coeffs: np.ndarray, m: float) -> float:
    w = grid.bracket(2 * m)
    return float(np.sqrt(grid.L * np.sum(w * np.abs(coeffs) ** 2)))


def sobolev_norm(f: Field, m: float) -> float:
    """H^m norm (L sum_k <xi_k>^(2m) |fhat_k|^2)^(1/2)."""
    return sobolev_norm_coeffs(f.grid, f.spectrum(), m)


def l2_quadrature(grid: SpectralGrid, values: np.ndarray) -> float:
    """Physical-space L^2 norm by the rectangle rule."""
    return float(np.sqrt(grid.dx * np.sum(np.abs(values) ** 2)))
