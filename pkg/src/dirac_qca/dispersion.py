"""Closed-form dispersion analytics of the lattice step.

Everything here derives from the eigenphase of the single-mode step matrix,

    omega(k, m) = arccos(sqrt(1 - m^2) * cos k),   principal branch in [0, pi],

and its continuum reference sqrt(k^2 + m^2).  The k-derivatives are coded in
closed form (cross-checked against finite differences in the test suite):

    v  = n sin k / sin(omega)
    D  = n m^2 cos k / sin(omega)^3
    w3 = -n m^2 sin k (1 + 2 n^2 cos^2 k) / sin(omega)^5

using the exact identity sin(omega)^2 = sin^2 k + m^2 cos^2 k, which avoids
the catastrophic cancellation of 1 - n^2 cos^2 k at small k.  omega itself is
evaluated through a half-angle form so it keeps full relative precision down
to k, m ~ 1e-19 where a direct arccos would return 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NumericalInvariantError

__all__ = [
    "omega",
    "sin_omega",
    "dirac_omega",
    "Derivatives",
    "derivatives",
    "DispersionPoint",
    "dispersion_point",
    "eigenpair",
    "branch_spinors",
    "hamiltonian_k",
    "dirac_hamiltonian_k",
    "dispersion_correction",
    "RegimeCoefficients",
    "regime_coefficients",
]

ARCCOS_CLAMP_TOL = 1e-12


def _check_mass(m: float) -> float:
    m = float(m)
    if not (0.0 <= m <= 1.0) or not math.isfinite(m):
        raise ValueError(f"mass must lie in [0, 1], got {m}")
    return m


def omega(k, m):
    """Automaton dispersion arccos(n cos k), branch in [0, pi].

    Computed as 2*arcsin(sqrt(delta/2)) with delta = 1 - n cos k assembled
    from the cancellation-free pieces 2 sin^2(k/2) and m^2 cos k / (1 + n).
    Arguments drifting past the domain edge by more than 1e-12 raise.
    """
    m = _check_mass(m)
    k = np.asarray(k, dtype=float)
    n = math.sqrt(1.0 - m * m)
    delta = 2.0 * np.sin(k / 2.0) ** 2 + (m * m / (1.0 + n)) * np.cos(k)
    arg = delta / 2.0
    if np.any(arg < -ARCCOS_CLAMP_TOL) or np.any(arg > 1.0 + ARCCOS_CLAMP_TOL):
        raise NumericalInvariantError("omega: arccos argument left [-1, 1] beyond tolerance")
    result = 2.0 * np.arcsin(np.sqrt(np.clip(arg, 0.0, 1.0)))
    return result if result.ndim else float(result)


def sin_omega(k, m):
    """sin(omega(k, m)) via the exact identity sin^2 w = sin^2 k + m^2 cos^2 k."""
    m = _check_mass(m)
    k = np.asarray(k, dtype=float)
    result = np.sqrt(np.sin(k) ** 2 + m * m * np.cos(k) ** 2)
    return result if result.ndim else float(result)


def dirac_omega(k, m):
    """Continuum reference dispersion sqrt(k^2 + m^2)."""
    result = np.hypot(np.asarray(k, dtype=float), m)
    return result if result.ndim else float(result)


class Derivatives(NamedTuple):
    v: float
    D: float
    omega3: float


def derivatives(k, m) -> Derivatives:
    """Group velocity, diffusion coefficient and third k-derivative of omega.

    v is signed (odd in k); at k = 0 with m > 0 it is exactly 0 and
    D = sqrt(1 - m^2)/m.  The point (k, m) = (0, 0) is rejected: omega has a
    cone there and no derivative exists.
    """
    m = _check_mass(m)
    k_arr = np.asarray(k, dtype=float)
    n = math.sqrt(1.0 - m * m)
    s2 = np.sin(k_arr) ** 2 + m * m * np.cos(k_arr) ** 2
    if np.any(s2 == 0.0):
        if m == 0.0:
            raise ValueError("derivatives undefined at k = 0 for the massless automaton")
        raise ValueError("degenerate mode encountered")  # unreachable for m > 0
    sw = np.sqrt(s2)
    v = n * np.sin(k_arr) / sw
    d = n * m * m * np.cos(k_arr) / (s2 * sw)
    w3 = -n * m * m * np.sin(k_arr) * (1.0 + 2.0 * n * n * np.cos(k_arr) ** 2) / (s2 * s2 * sw)
    if k_arr.ndim:
        return Derivatives(v, d, w3)
    return Derivatives(float(v), float(d), float(w3))


@dataclass(frozen=True)
class DispersionPoint:
    """One row of a dispersion table: omega, its reference, and derivatives."""

    k: float
    m: float
    omega: float
    omega_dirac: float
    v: float
    D: float
    omega3: float


def dispersion_point(k: float, m: float) -> DispersionPoint:
    v, d, w3 = derivatives(k, m)
    return DispersionPoint(
        k=float(k), m=float(m), omega=omega(k, m), omega_dirac=dirac_omega(k, m), v=v, D=d, omega3=w3
    )


def branch_spinors(k, m, s: int) -> np.ndarray:
    """Unit eigenvectors of U(k) for branch ``s``, one per momentum sample.

    For m > 0 the closed form ((sqrt(1 - s v), s sqrt(1 + s v)) / sqrt(2)) is
    used; its first component is strictly positive, which fixes the global
    phase.  Degenerate modes (m = 0 with sin k = 0) fall back to the
    canonical basis, + branch first.
    """
    if s not in (+1, -1):
        raise ValueError(f"branch label must be +1 or -1, got {s}")
    m = _check_mass(m)
    k = np.atleast_1d(np.asarray(k, dtype=float))
    n = math.sqrt(1.0 - m * m)
    s2 = np.sin(k) ** 2 + m * m * np.cos(k) ** 2
    degenerate = s2 == 0.0
    v = np.where(degenerate, 0.0, n * np.sin(k) / np.sqrt(np.where(degenerate, 1.0, s2)))
    sv = np.clip(s * v, -1.0, 1.0)
    out = np.empty((k.size, 2), dtype=complex)
    out[:, 0] = np.sqrt((1.0 - sv) / 2.0)
    out[:, 1] = s * np.sqrt((1.0 + sv) / 2.0)
    if np.any(degenerate):
        out[degenerate, 0] = 1.0 if s == +1 else 0.0
        out[degenerate, 1] = 0.0 if s == +1 else 1.0
    return out


def eigenpair(s: int, k: float, m: float):
    """Eigenphase s*omega and unit eigenvector of U(k) for branch s.

    Satisfies U(k) @ spinor = exp(-i s omega) * spinor; the deterministic
    global phase makes the first nonzero component real and positive.
    """
    phase = s * omega(k, m)
    spinor = branch_spinors(np.asarray([k]), m, s)[0]
    return float(phase), spinor


def hamiltonian_k(k: float, m: float) -> np.ndarray:
    """Generator of the interpolated step: (w/sin w) [[-n sin k, m], [m, n sin k]].

    exp(-i H) reproduces U(k).  The massless case is the limit
    H = diag(-k, k), which also covers sin(omega) -> 0.
    """
    m = _check_mass(m)
    k = float(k)
    if m == 0.0:
        return np.array([[-k, 0.0], [0.0, k]], dtype=complex)
    n = math.sqrt(1.0 - m * m)
    w = omega(k, m)
    ratio = w / sin_omega(k, m)  # sin w > 0 strictly for m > 0
    return ratio * np.array([[-n * math.sin(k), m], [m, n * math.sin(k)]], dtype=complex)


def dirac_hamiltonian_k(k: float, m: float) -> np.ndarray:
    """Continuum generator [[-k, m], [m, k]]."""
    return np.array([[-float(k), float(m)], [float(m), float(k)]], dtype=complex)


def dispersion_correction(k, m):
    """Cubic-order improvement of the continuum dispersion.

    Returns (omega_approx, residual) with
    omega_approx = omega_D * (1 - (m^2/6) (k^2 - m^2)/(k^2 + m^2)) and
    residual = omega - omega_approx (a fifth-order quantity near the origin).
    """
    m = _check_mass(m)
    k_arr = np.asarray(k, dtype=float)
    if np.any((k_arr == 0.0) & (m == 0.0)):
        raise ValueError("correction undefined at (k, m) = (0, 0)")
    wd = dirac_omega(k_arr, m)
    factor = 1.0 - (m * m / 6.0) * (k_arr * k_arr - m * m) / (k_arr * k_arr + m * m)
    approx = wd * factor
    residual = omega(k_arr, m) - approx
    if k_arr.ndim:
        return approx, residual
    return float(approx), float(residual)


@dataclass(frozen=True)
class RegimeCoefficients:
    """Series values for v and D in one asymptotic regime, with deviations.

    ``*_leading`` is the lowest-order term, ``*_series`` includes the first
    printed correction; the deviations are relative to the exact closed-form
    derivatives at the same point.
    """

    regime: str
    v_leading: float
    v_series: float
    D_leading: float
    D_series: float
    v_deviation: float
    D_deviation: float


def regime_coefficients(k: float, m: float, regime: str) -> RegimeCoefficients:
    """Leading term and first correction for v and D in a named regime.

    ``relativistic`` expects k, m << 1 with k/m > 1; ``nonrelativistic``
    expects k/m < 1.  The thresholds are reporting guidance only -- any
    (k, m) is accepted and the deviation fields expose the series quality.
    """
    m = _check_mass(m)
    k = float(k)
    lam2 = k * k + m * m
    if regime == "relativistic":
        lam = math.sqrt(lam2)
        v_lead = k / lam
        v_ser = v_lead * (1.0 - m * m / 3.0 + (m * m * k * k) / (6.0 * lam2))
        d_lead = m * m / lam2 ** 1.5
        d_ser = d_lead * (1.0 + m * m * k * k / 3.0 - 0.5 * m * m * k ** 4 / lam2)
    elif regime == "nonrelativistic":
        if m == 0.0:
            raise ValueError("nonrelativistic series needs m > 0")
        v_lead = k / m
        v_ser = v_lead * (1.0 + m * m / 3.0)
        d_lead = 1.0 / m
        d_ser = d_lead * (1.0 + 5.0 * k * k / 6.0)
    else:
        raise ValueError(f"unknown regime {regime!r}")
    v_exact, d_exact, _ = derivatives(k, m)
    v_dev = abs(v_ser - v_exact) / abs(v_exact) if v_exact != 0.0 else abs(v_ser)
    d_dev = abs(d_ser - d_exact) / abs(d_exact) if d_exact != 0.0 else abs(d_ser)
    return RegimeCoefficients(
        regime=regime,
        v_leading=v_lead,
        v_series=v_ser,
        D_leading=d_lead,
        D_series=d_ser,
        v_deviation=v_dev,
        D_deviation=d_dev,
    )
