"""Smooth and localized single-particle states on the ring.

Packets are assembled in momentum space: the scalar envelope is laid down in
position space, transformed, and each DFT mode is dressed with the exact
branch eigenvector at that mode's momentum.  This makes the branch projection
exact per mode (the position-space picture with a single spinor for all sites
is the same state to leading order in the bandwidth).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .automaton import AutomatonParams, ModeSpectrum, SpinorField, inverse_transform
from .dispersion import branch_spinors

__all__ = [
    "WavepacketSpec",
    "BandwidthReport",
    "build",
    "localized",
    "bandwidth",
    "momentum_spread",
    "position_moments",
    "wrap_momentum",
]


def wrap_momentum(k):
    """Reduce momenta into the first zone [-pi, pi)."""
    return (np.asarray(k, dtype=float) + np.pi) % (2.0 * np.pi) - np.pi


@dataclass(frozen=True)
class WavepacketSpec:
    """Recipe for a smooth packet: peak momentum, width, center, branch, shape.

    ``sigma_hat`` is the position spread in lattice (Planck) units.  For the
    ``hermite`` shape the envelope is

        sum_j c_j * exp(-(x - x0)^2 / (4 sigma_hat^2)) * H_j((x - x0) / (2 sigma_hat))

    with physicists' Hermite polynomials H_j and sum_j |c_j|^2 = 1; the overall
    normalization of the state is numeric.
    """

    k0: float
    sigma_hat: float
    x0: float
    s: int = +1
    shape: str = "gaussian"
    hermite_coeffs: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.sigma_hat <= 0.0:
            raise ValueError("sigma_hat must be positive")
        if not abs(self.k0) < math.pi:
            raise ValueError("peak momentum must satisfy |k0| < pi")
        if self.s not in (+1, -1):
            raise ValueError("branch label must be +1 or -1")
        if self.shape not in ("gaussian", "hermite"):
            raise ValueError(f"unknown shape {self.shape!r}")
        if self.shape == "hermite":
            if not self.hermite_coeffs:
                raise ValueError("hermite shape needs a coefficient list")
            total = sum(abs(c) ** 2 for c in self.hermite_coeffs)
            if abs(total - 1.0) > 1e-12:
                raise ValueError(f"hermite coefficients must satisfy sum |c_j|^2 = 1, got {total}")
        elif self.hermite_coeffs is not None:
            raise ValueError("coefficients are only meaningful for the hermite shape")


@dataclass(frozen=True)
class BandwidthReport:
    """Out-of-window momentum mass: epsilon = 1 - (mass within |k - k0| <= sigma)."""

    sigma: float
    epsilon: float


def _hermite_values(order: int, y: np.ndarray) -> list:
    """Physicists' Hermite polynomials H_0..H_order by the three-term recurrence."""
    values = [np.ones_like(y)]
    if order >= 1:
        values.append(2.0 * y)
    for j in range(1, order):
        values.append(2.0 * y * values[j] - 2.0 * j * values[j - 1])
    return values


def _envelope(spec: WavepacketSpec, displacement: np.ndarray) -> np.ndarray:
    gauss = np.exp(-(displacement ** 2) / (4.0 * spec.sigma_hat ** 2))
    if spec.shape == "gaussian":
        return gauss
    y = displacement / (2.0 * spec.sigma_hat)
    hermites = _hermite_values(len(spec.hermite_coeffs) - 1, y)
    poly = sum(c * h for c, h in zip(spec.hermite_coeffs, hermites) if c != 0.0)
    return gauss * poly


def build(spec: WavepacketSpec, params: AutomatonParams, L: int) -> Tuple[SpinorField, ModeSpectrum]:
    """Construct the packet; returns the position and momentum pictures.

    The support precondition 6 * sigma_hat < L keeps the wrapped envelope
    tails negligible on the ring.
    """
    if 6.0 * spec.sigma_hat >= L:
        raise ValueError(
            f"packet does not fit the ring: need 6 * sigma_hat < L, got sigma_hat={spec.sigma_hat}, L={L}"
        )
    x = np.arange(L, dtype=float)
    displacement = (x - spec.x0 + L / 2.0) % L - L / 2.0
    scalar = np.exp(1j * spec.k0 * x) * _envelope(spec, displacement)
    g = np.fft.fft(scalar) / math.sqrt(L)
    ks = 2.0 * np.pi * np.fft.fftfreq(L)
    modes = g[:, None] * branch_spinors(ks, params.m, spec.s)
    modes /= np.linalg.norm(modes)
    spectrum = ModeSpectrum(modes)
    return inverse_transform(spectrum), spectrum


def localized(x0: int, spinor: Sequence[complex], L: int) -> SpinorField:
    """Single-site state |x0> with the given (already normalized) spinor."""
    if not (0 <= x0 < L):
        raise ValueError(f"site index must satisfy 0 <= x0 < L, got {x0}")
    spinor = np.asarray(spinor, dtype=complex)
    if spinor.shape != (2,):
        raise ValueError("spinor must have exactly two components")
    if abs(np.linalg.norm(spinor) - 1.0) > 1e-12:
        raise ValueError("spinor must be normalized to 1 within 1e-12")
    sites = np.zeros((L, 2), dtype=complex)
    sites[int(x0)] = spinor
    return SpinorField(sites)


def bandwidth(spectrum: ModeSpectrum, k0: float, sigma: float) -> BandwidthReport:
    """Momentum mass outside the window |k - k0| <= sigma (grid sum).

    On the uniform periodic DFT grid the trapezoid rule coincides with the
    plain sum of mode weights, which is what is used here.
    """
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    weights = spectrum.mode_weights()
    total = weights.sum()
    if total <= 0.0:
        raise ValueError("empty spectrum")
    offsets = wrap_momentum(spectrum.ks - k0)
    inside = weights[np.abs(offsets) <= sigma].sum()
    return BandwidthReport(sigma=float(sigma), epsilon=float(max(0.0, 1.0 - inside / total)))


def momentum_spread(spectrum: ModeSpectrum) -> Tuple[float, float]:
    """Circular mean and second-moment spread of the momentum distribution.

    The mean is taken on the circle to avoid wraparound bias; offsets are
    folded into [-pi, pi) before the second moment.
    """
    weights = spectrum.mode_weights()
    weights = weights / weights.sum()
    ks = spectrum.ks
    mean = math.atan2(float(np.sum(weights * np.sin(ks))), float(np.sum(weights * np.cos(ks))))
    offsets = wrap_momentum(ks - mean)
    return mean, float(np.sqrt(np.sum(weights * offsets ** 2)))


def position_moments(field: SpinorField) -> Tuple[float, float]:
    """Circular mean position (in site units) and wrapped variance."""
    weights = field.density()
    weights = weights / weights.sum()
    L = field.L
    angles = 2.0 * np.pi * np.arange(L) / L
    mean_angle = math.atan2(float(np.sum(weights * np.sin(angles))), float(np.sum(weights * np.cos(angles))))
    mean_site = (mean_angle / (2.0 * np.pi) * L) % L
    offsets = (np.arange(L) - mean_site + L / 2.0) % L - L / 2.0
    return float(mean_site), float(np.sum(weights * offsets ** 2))
