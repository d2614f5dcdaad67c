"""Flying-time separation estimates for a single wavepacket.

How long must a packet fly before the lattice and continuum trajectories
separate by more than its own width, and is the separation still visible
once both packets have spread?  All quantities are in Planck units with SI
conversions from :mod:`.constants`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .constants import planck_times_to_seconds
from .dispersion import derivatives

__all__ = [
    "FlytimeInput",
    "FlytimeReport",
    "SeparationTimes",
    "separation_time",
    "broadening",
    "broadening_collapsed",
    "visibility_report",
]

VISIBILITY_FLAG_RATIO = 10.0


@dataclass(frozen=True)
class FlytimeInput:
    """Packet parameters: mass, peak momentum, position spread (Planck units)."""

    m: float
    k: float
    sigma_hat: float

    def __post_init__(self):
        if self.m <= 0.0 or self.m > 1.0:
            raise ValueError("need 0 < m <= 1")
        if self.k == 0.0:
            raise ValueError("need k != 0")
        if self.sigma_hat <= 0.0:
            raise ValueError("need sigma_hat > 0")


class SeparationTimes(NamedTuple):
    t_general: float
    t_relativistic: float


def separation_time(inp: FlytimeInput) -> SeparationTimes:
    """Time for the two drift velocities to open a gap of one packet width.

    t_general = sigma_hat |6 (k^2+m^2)^{3/2} / (m^2 k^2 (2 m^2 + k))|; for
    m << k this collapses to 6 sigma_hat / m^2.
    """
    m, k, sh = inp.m, inp.k, inp.sigma_hat
    lam2 = k * k + m * m
    general = sh * abs(6.0 * lam2 * math.sqrt(lam2) / (m * m * k * k * (2.0 * m * m + k)))
    relativistic = 6.0 * sh / (m * m)
    return SeparationTimes(general, relativistic)


def _spread_term(rate: float, t: float, sigma_hat: float) -> float:
    # sqrt(1 + x^2) - 1 evaluated as x^2/(1 + sqrt(1 + x^2)): no cancellation
    x = rate * t / (2.0 * sigma_hat * sigma_hat)
    return x * x / (1.0 + math.sqrt(1.0 + x * x))


def broadening(inp: FlytimeInput, t: float) -> float:
    """Combined spreading of the two packets after time t (Planck lengths).

    sigma_br = sigma_hat (sqrt(1 + (D t / 2 sh^2)^2) + sqrt(1 + (D_c t / 2 sh^2)^2) - 2)
    with D the lattice diffusion coefficient and D_c = m^2 (k^2 + m^2)^{-3/2}.
    """
    if t < 0:
        raise ValueError("need t >= 0")
    _, d_lattice, _ = derivatives(inp.k, inp.m)
    lam2 = inp.k * inp.k + inp.m * inp.m
    d_cont = inp.m * inp.m / lam2 ** 1.5
    return inp.sigma_hat * (
        _spread_term(abs(d_lattice), t, inp.sigma_hat) + _spread_term(d_cont, t, inp.sigma_hat)
    )


def broadening_collapsed(inp: FlytimeInput, t: float) -> float:
    """m << k approximation: 2 sigma_hat (sqrt(1 + m^4 t^2 / (4 sh^4 k^6)) - 1)."""
    if t < 0:
        raise ValueError("need t >= 0")
    rate = inp.m * inp.m / abs(inp.k) ** 3
    return 2.0 * inp.sigma_hat * _spread_term(rate, t, inp.sigma_hat)


@dataclass(frozen=True)
class FlytimeReport:
    t_general: float
    t_relativistic: float
    broadening_at_t: float
    visibility_ratio: float
    t_seconds: float

    @property
    def low_visibility(self) -> bool:
        """Flag raised when the separation is not comfortably visible."""
        return self.visibility_ratio < VISIBILITY_FLAG_RATIO


def visibility_report(inp: FlytimeInput) -> FlytimeReport:
    """Assemble separation times, spreading at t_general, and SI conversions."""
    times = separation_time(inp)
    spread = broadening(inp, times.t_general)
    ratio = inp.sigma_hat / spread if spread > 0.0 else math.inf
    return FlytimeReport(
        t_general=times.t_general,
        t_relativistic=times.t_relativistic,
        broadening_at_t=spread,
        visibility_ratio=ratio,
        t_seconds=planck_times_to_seconds(times.t_general),
    )
