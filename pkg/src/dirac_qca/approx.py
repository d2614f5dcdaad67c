"""Drift-diffusion phase evolution and its accuracy bound.

The second-order Taylor expansion of the dispersion around the packet's peak
momentum turns the per-mode evolution into the pure phase

    exp(-i s (omega0 + v K + D K^2 / 2) t),     K = k - k0 folded into [-pi, pi),

which solves a momentum-dependent drift-diffusion (Schrodinger-type) equation
exactly, mode by mode.  The quadratic sign follows the Taylor expansion; the
variant with the opposite sign on the K^2 term is kept behind a test switch
(``printed_quadratic_sign``) because it fails the reference reproduction.

The fidelity floor is 1 - epsilon - gamma sigma^3 t with epsilon the
out-of-window momentum mass and gamma = |omega'''(k0)| times the in-window
mass; it is deliberately conservative (the true cubic remainder carries an
extra 1/6).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .automaton import AutomatonParams, ModeSpectrum
from .dispersion import derivatives, omega
from .wavepacket import bandwidth, wrap_momentum

__all__ = [
    "ApproxEvolutionParams",
    "AccuracyBound",
    "schrodinger_evolve",
    "evolve_with_phase",
    "fidelity",
    "accuracy_bound",
]


@dataclass(frozen=True)
class ApproxEvolutionParams:
    """Frozen Taylor data at the expansion point: omega0, v, D and the branch."""

    k0: float
    omega0: float
    v: float
    D: float
    s: int

    @classmethod
    def from_automaton(cls, params: AutomatonParams, k0: float, s: int) -> "ApproxEvolutionParams":
        v, d, _ = derivatives(k0, params.m)
        return cls(k0=float(k0), omega0=omega(k0, params.m), v=v, D=d, s=int(s))


def evolve_with_phase(spec: ModeSpectrum, phase: np.ndarray, s: int, t: float) -> ModeSpectrum:
    """Multiply mode j by exp(-i s phase[j] t), leaving spinor parts untouched.

    This is the generic hook behind :func:`schrodinger_evolve`; passing the
    exact dispersion values reproduces the on-branch exact evolution.
    """
    if t < 0:
        raise ValueError(f"need t >= 0, got {t}")
    phase = np.asarray(phase, dtype=float)
    if phase.shape != (spec.L,):
        raise ValueError("need one phase value per mode")
    factor = np.exp(-1j * s * phase * t)
    return ModeSpectrum(spec.modes * factor[:, None], spec.origin_offset)


def schrodinger_evolve(
    spec: ModeSpectrum,
    params: AutomatonParams,
    k0: float,
    s: int,
    t: float,
    *,
    printed_quadratic_sign: bool = False,
) -> ModeSpectrum:
    """Evolve every mode by the quadratic-dispersion phase around k0."""
    ap = ApproxEvolutionParams.from_automaton(params, k0, s)
    K = wrap_momentum(spec.ks - ap.k0)
    quad = -0.5 * ap.D if printed_quadratic_sign else 0.5 * ap.D
    phase = ap.omega0 + ap.v * K + quad * K * K
    return evolve_with_phase(spec, phase, ap.s, t)


def fidelity(a: ModeSpectrum, b: ModeSpectrum) -> float:
    """|<a|b>| with the two-component inner product summed over modes."""
    if a.L != b.L:
        raise ValueError(f"mode counts differ: {a.L} vs {b.L}")
    return float(abs(np.sum(np.conj(a.modes) * b.modes)))


@dataclass(frozen=True)
class AccuracyBound:
    """Fidelity floor 1 - epsilon - gamma sigma^3 t, clamped below at zero."""

    epsilon: float
    gamma: float
    sigma: float
    t: float

    @property
    def bound(self) -> float:
        return max(0.0, 1.0 - self.epsilon - self.gamma * self.sigma ** 3 * self.t)


def accuracy_bound(
    spec: ModeSpectrum, params: AutomatonParams, k0: float, sigma: float, t: float
) -> AccuracyBound:
    """Assemble the fidelity floor for the given packet, window and time.

    gamma uses |omega'''(k0)| (the bound controls a modulus) scaled by the
    in-window momentum mass, matching the normalization in which the total
    mass is 1.
    """
    if t < 0:
        raise ValueError(f"need t >= 0, got {t}")
    report = bandwidth(spec, k0, sigma)
    _, _, w3 = derivatives(k0, params.m)
    gamma = abs(w3) * (1.0 - report.epsilon)
    return AccuracyBound(epsilon=report.epsilon, gamma=gamma, sigma=float(sigma), t=float(t))
