"""Distinguishability bounds between the lattice step and continuum evolution.

For one momentum mode the two finite-time unitaries are SU(2) matrices, so
their relative rotation V(k, t) = U_cont^t U_latt^{t,dagger} has eigenphases
exp(+-i mu) with cos(mu) = Re Tr V / 2.  The per-mode angle obeys

    cos(mu(k, m, t)) >= cos(alpha t) - beta
    alpha = omega_cont - omega_latt
    beta  = 1 - v v_c - sqrt((1 - v^2)(1 - v_c^2))

(the trace identity is cos mu = (1 - beta/2) cos(alpha t) + (beta/2)
cos((omega_latt + omega_cont) t), which makes the inequality immediate).
With momentum capped at k_bar and particle number at N_bar, the extremal
values alpha_bar, beta_bar over {0, k_bar} give

    g = N_bar * arccos(cos(alpha_bar t) - beta_bar)

and, while beta_bar <= 1 - cos(pi / 2 N_bar) and t <= f (the time cap that
keeps g <= pi/2), every admissible state has trace distance at most
sqrt(1 - cos^2 g), hence error probability at least (1 - sin g)/2 for the
equal-prior guess between the two dynamics.

alpha and beta collapse under cancellation in the deep sub-Planckian regime
(alpha ~ 1e-47 for proton-scale parameters), so both switch to series forms
there; see ``_alpha`` and ``_beta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .dispersion import dirac_omega, omega, sin_omega
from .errors import BoundViolationError, MonotonicityError, UnitarityLossError

__all__ = [
    "DiscriminationInput",
    "DiscriminationReport",
    "MultiParticleSpec",
    "MonteCarloReport",
    "unitary_pair_t",
    "mu",
    "alpha_beta",
    "extremal_alpha_beta",
    "pe_lower_bound",
    "t_min_approx",
    "t_min_exact",
    "multiparticle_phase",
    "state_overlap_distance",
    "validate_bound_montecarlo",
]

MU_CLAMP_TOL = 1e-9


@dataclass(frozen=True)
class DiscriminationInput:
    """Physical caps and duration: mass, momentum cap, particle cap, time."""

    m: float
    k_bar: float
    N_bar: int
    t: float

    def __post_init__(self):
        if not (0.0 <= self.k_bar < math.pi):
            raise ValueError("momentum cap must lie in [0, pi)")
        if self.N_bar < 1:
            raise ValueError("particle cap must be a positive integer")
        if self.t < 0:
            raise ValueError("duration must be nonnegative")


@dataclass(frozen=True)
class DiscriminationReport:
    alpha_bar: float
    beta_bar: float
    f_limit: float
    hypotheses_ok: bool
    g: Optional[float] = None
    pe_lower: Optional[float] = None
    t_min: Optional[float] = None


@dataclass(frozen=True)
class MultiParticleSpec:
    """A joint eigenmode: per-particle momenta and branch signs."""

    momenta: Tuple[float, ...]
    branches: Tuple[int, ...]

    def __post_init__(self):
        if len(self.momenta) != len(self.branches):
            raise ValueError("momenta and branches must have equal length")
        if len(self.momenta) == 0:
            raise ValueError("need at least one particle")
        if any(s not in (+1, -1) for s in self.branches):
            raise ValueError("branch labels must be +1 or -1")

    @property
    def N(self) -> int:
        return len(self.momenta)


def unitary_pair_t(k: float, m: float, t: float) -> Tuple[np.ndarray, np.ndarray]:
    """Finite-time unitaries (lattice, continuum) for one mode, closed form.

    U_latt^t = cos(wt) I - i sin(wt) (u . sigma),  u = (m, 0, -n sin k)/sin w
    U_cont^t = cos(lt) I - i sin(lt) (m sx - k sz)/l,  l = sqrt(k^2 + m^2)

    Degenerate directions (sin w = 0, l = 0) reduce to identity blocks.
    """
    if t < 0:
        raise ValueError(f"need t >= 0, got {t}")
    k, m, t = float(k), float(m), float(t)
    n = math.sqrt(1.0 - m * m)
    w = omega(k, m)
    sw = sin_omega(k, m)
    if sw > 0.0:
        v = n * math.sin(k) / sw
        ux = m / sw
        c, s = math.cos(w * t), math.sin(w * t)
        u_aut = np.array([[c + 1j * v * s, -1j * ux * s], [-1j * ux * s, c - 1j * v * s]])
    else:
        u_aut = np.diag([np.exp(-1j * w * t), np.exp(1j * w * t)])
    lam = math.hypot(k, m)
    if lam > 0.0:
        c, s = math.cos(lam * t), math.sin(lam * t)
        vd = k / lam
        dx = m / lam
        u_dir = np.array([[c + 1j * vd * s, -1j * dx * s], [-1j * dx * s, c - 1j * vd * s]])
    else:
        u_dir = np.eye(2, dtype=complex)
    return u_aut, u_dir


def _mu_components(k, m, t):
    """(cos mu, sin mu) of V = U_cont^t U_latt^{t,dagger}, vectorized over k.

    With both step matrices of the form [[a, b], [b, conj(a)]] (b pure
    imaginary), V has the SU(2) shape [[V00, V01], [-conj(V01), conj(V00)]]
    and cos mu = Re V00 = Re Tr V / 2, sin mu = sqrt(Im(V00)^2 + |V01|^2).
    """
    k = np.asarray(k, dtype=float)
    n = math.sqrt(1.0 - m * m)
    sw = np.sqrt(np.sin(k) ** 2 + m * m * np.cos(k) ** 2)
    w = omega(k, m)
    ok = sw > 0.0
    safe = np.where(ok, sw, 1.0)
    v = np.where(ok, n * np.sin(k) / safe, 0.0)
    ux = np.where(ok, m / safe, 0.0)
    lam = np.hypot(k, m)
    lsafe = np.where(lam > 0.0, lam, 1.0)
    vd = np.where(lam > 0.0, k / lsafe, 0.0)
    dx = np.where(lam > 0.0, m / lsafe, 0.0)
    ca, sa = np.cos(w * t), np.sin(w * t)
    cd, sd = np.cos(lam * t), np.sin(lam * t)
    a_latt = ca + 1j * v * sa
    b_latt = -1j * ux * sa
    a_cont = cd + 1j * vd * sd
    b_cont = -1j * dx * sd
    v00 = a_cont * np.conj(a_latt) + b_cont * np.conj(b_latt)
    v01 = a_cont * np.conj(b_latt) + b_cont * a_latt
    return np.real(v00), np.sqrt(np.imag(v00) ** 2 + np.abs(v01) ** 2)


def mu(k, m, t):
    """Relative rotation angle arccos(Re Tr V / 2) in [0, pi], vectorized in k.

    Evaluated as atan2(sin mu, cos mu): identical to the arccos of the
    half-trace but without the square-root noise floor of arccos near
    mu = 0, which matters when comparing against a vanishing bound.
    """
    if np.any(np.asarray(t) < 0):
        raise ValueError("need t >= 0")
    cos_mu, sin_mu = _mu_components(k, m, t)
    c_arr = np.asarray(cos_mu)
    if np.any(np.abs(c_arr) > 1.0 + MU_CLAMP_TOL):
        raise UnitarityLossError(
            f"|Re Tr V / 2| = {float(np.max(np.abs(c_arr)))} exceeds 1 beyond tolerance"
        )
    result = np.arctan2(sin_mu, cos_mu)
    return result if result.ndim else float(result)


# -- stable alpha and beta ------------------------------------------------

def _alpha_small_m(k: float, m: float) -> float:
    # valid for m << k: alpha = (m^2/2)(1/k - cot k) - (m^4/8)(1/k^3 + cos k (sin^2 - cos^2)/sin^3)
    k = abs(k)
    c, s = math.cos(k), math.sin(k)
    second = (m * m / 2.0) * (1.0 / k - c / s)
    fourth = -(m ** 4 / 8.0) * (1.0 / k ** 3 + c * (s * s - c * c) / s ** 3)
    return second + fourth


def _alpha(k: float, m: float) -> float:
    """omega_cont - omega_latt, series-stabilized where subtraction cancels."""
    k = abs(float(k))
    if k == 0.0:
        if m < 1e-5:
            return -(m ** 3 / 6.0) * (1.0 + 9.0 * m * m / 20.0)  # m - arcsin m
        return m - math.asin(m)
    lam = math.hypot(k, m)
    if lam < 1e-3:
        # jointly small: leading correction of the dispersion mismatch
        return lam * (m * m / 6.0) * (k * k - m * m) / (k * k + m * m)
    if m < 1e-3 and k >= 100.0 * m:
        return _alpha_small_m(k, m)
    return dirac_omega(k, m) - omega(k, m)


def _k_minus_sin(k: float) -> float:
    if abs(k) < 1e-3:
        k2 = k * k
        return k * k2 / 6.0 * (1.0 - k2 / 20.0 * (1.0 - k2 / 42.0))
    return k - math.sin(k)


def _beta(k: float, m: float) -> float:
    """1 - v v_c - sqrt((1 - v^2)(1 - v_c^2)), stabilized for small 1 - v^2."""
    k = abs(float(k))
    if m == 0.0 or k == 0.0:
        return 0.0
    s2 = math.sin(k) ** 2 + m * m * math.cos(k) ** 2
    sw = math.sqrt(s2)
    lam = math.hypot(k, m)
    x = m * m / s2          # 1 - v^2
    y = m * m / (lam * lam)  # 1 - v_c^2
    if max(x, y) < 1e-4:
        # beta = (sqrt(x) - sqrt(y))^2/2 * (1 + (sqrt(x)+sqrt(y))^2/4) + O(x^3)
        num = _k_minus_sin(k) * (k + math.sin(k)) + m * m * math.sin(k) ** 2
        diff = num / (lam + sw)  # lam - sw without cancellation
        root_diff = m * diff / (lam * sw)
        sx, sy = m / sw, m / lam
        return 0.5 * root_diff * root_diff * (1.0 + 0.25 * (sx + sy) ** 2)
    n = math.sqrt(1.0 - m * m)
    v = n * math.sin(k) / sw
    vd = k / lam
    return max(0.0, 1.0 - v * vd - math.sqrt(x * y))


def alpha_beta(k: float, m: float) -> Tuple[float, float]:
    """Phase mismatch rate alpha and velocity mismatch beta for one momentum.

    alpha is signed (the lattice eigenphase can overtake the continuum one);
    beta >= 0 always, and beta = 0 exactly at k = 0 or m = 0.  Note: the
    inequality cos(mu) >= cos(alpha t) - beta holds with this beta; a halved
    variant breaks the trace identity and the inequality with it.
    """
    if k == 0.0 and m == 0.0:
        raise ValueError("alpha/beta undefined at (k, m) = (0, 0)")
    return _alpha(k, m), _beta(k, m)


def extremal_alpha_beta(k_bar: float, m: float, grid_points: int = 256) -> Tuple[float, float]:
    """max |alpha| and max |beta| over [0, k_bar], realized on {0, k_bar}.

    The endpoint property follows from alpha and beta being nondecreasing in
    k on [0, pi); both facts are re-verified here on a grid and a violation
    beyond 1e-10 raises :class:`MonotonicityError`.  (|alpha| itself is not
    monotone: alpha starts negative at k = 0 and crosses zero, but a
    monotone function still attains its extreme modulus at an endpoint.)
    """
    if not (0.0 <= k_bar < math.pi):
        raise ValueError("momentum cap must lie in [0, pi)")
    alpha_0, beta_0 = _alpha(0.0, m), 0.0
    alpha_end, beta_end = _alpha(k_bar, m), _beta(k_bar, m)
    if k_bar > 0.0 and m > 0.0:
        ks = np.linspace(0.0, k_bar, grid_points)
        alphas = np.array([_alpha(k, m) for k in ks])
        betas = np.array([_beta(k, m) for k in ks])
        if np.any(np.diff(alphas) < -1e-10) or np.any(np.diff(betas) < -1e-10):
            raise MonotonicityError(
                f"alpha/beta monotonicity violated on [0, {k_bar}] at m = {m}"
            )
        grid_alpha = float(np.max(np.abs(alphas)))
        grid_beta = float(np.max(np.abs(betas)))
        if grid_alpha > max(abs(alpha_0), abs(alpha_end)) + 1e-10 or grid_beta > max(
            beta_0, beta_end
        ) + 1e-10:
            raise MonotonicityError("interior grid maximum exceeded the endpoint values")
    return max(abs(alpha_0), abs(alpha_end)), max(beta_0, beta_end)


def _time_cap(alpha_bar: float, beta_bar: float, n_bar: int) -> float:
    edge = math.cos(math.pi / (2.0 * n_bar)) + beta_bar
    if edge > 1.0:
        return 0.0  # hypotheses already broken
    if alpha_bar == 0.0:
        return math.inf
    return math.acos(edge) / alpha_bar


def pe_lower_bound(inp: DiscriminationInput) -> DiscriminationReport:
    """Error-probability floor for guessing lattice vs continuum dynamics.

    Outside the hypotheses (beta_bar too large, or t beyond the cap f) no
    bound is produced and ``hypotheses_ok`` is False.
    """
    alpha_bar, beta_bar = extremal_alpha_beta(inp.k_bar, inp.m)
    f = _time_cap(alpha_bar, beta_bar, inp.N_bar)
    hyp = beta_bar <= 1.0 - math.cos(math.pi / (2.0 * inp.N_bar)) and inp.t <= f
    if not hyp:
        return DiscriminationReport(alpha_bar=alpha_bar, beta_bar=beta_bar, f_limit=f, hypotheses_ok=False)
    g = inp.N_bar * math.acos(min(1.0, math.cos(alpha_bar * inp.t) - beta_bar))
    pe = 0.5 * (1.0 - math.sin(g))
    return DiscriminationReport(
        alpha_bar=alpha_bar, beta_bar=beta_bar, f_limit=f, hypotheses_ok=True, g=g, pe_lower=pe
    )


def t_min_approx(m: float, k_bar: float, n_bar: int) -> float:
    """Leading-order perfect-discrimination time 3 pi / (m^2 k_bar N_bar)."""
    if m <= 0.0 or k_bar <= 0.0:
        raise ValueError("need m > 0 and k_bar > 0")
    return 3.0 * math.pi / (m * m * k_bar * n_bar)


def t_min_exact(m: float, k_bar: float, n_bar: int, rel_tol: float = 1e-9) -> Optional[float]:
    """Root of g(t) = pi/2 inside the validity window, by bisection.

    Returns None when pi/2 is unreachable: either the beta_bar hypothesis
    fails outright or alpha_bar = 0 (identical dispersions up to roundoff).
    """
    if m <= 0.0 or k_bar <= 0.0:
        raise ValueError("need m > 0 and k_bar > 0")
    alpha_bar, beta_bar = extremal_alpha_beta(k_bar, m)
    if beta_bar > 1.0 - math.cos(math.pi / (2.0 * n_bar)) or alpha_bar == 0.0:
        return None

    def g_of(t: float) -> float:
        return n_bar * math.acos(max(-1.0, math.cos(alpha_bar * t) - beta_bar))

    # bracket: g is increasing up to t_dom, where its argument reaches -1
    t_dom = math.acos(max(-1.0, beta_bar - 1.0)) / alpha_bar
    lo, hi = 0.0, t_dom
    if g_of(hi) < math.pi / 2.0:
        return None
    while (hi - lo) > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if g_of(mid) < math.pi / 2.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def multiparticle_phase(spec: MultiParticleSpec, m: float) -> float:
    """Joint eigenphase: signed sum of single-particle dispersion values."""
    return float(sum(s * omega(k, m) for k, s in zip(spec.momenta, spec.branches)))


def _pairwise_trace_distance(phases: np.ndarray, probs: np.ndarray) -> np.ndarray:
    """sqrt(1 - |sum_c p_c e^{i phi_c}|^2) along the last axis.

    Uses the identity 1 - |sum p e^{i phi}|^2 = sum_{c,c'} 2 p_c p_c'
    sin^2((phi_c - phi_c')/2): a sum of nonnegative terms, so a state whose
    phases all coincide yields exactly zero instead of sqrt-of-roundoff.
    """
    delta = phases[..., :, None] - phases[..., None, :]
    weights = probs[..., :, None] * probs[..., None, :]
    squared = np.sum(2.0 * weights * np.sin(delta / 2.0) ** 2, axis=(-2, -1))
    return np.sqrt(squared)


def state_overlap_distance(phases: Sequence[float], probabilities: Sequence[float]) -> float:
    """sqrt(1 - |sum_c p_c e^{i phi_c}|^2) for a pure superposition of V-eigenmodes."""
    phases = np.asarray(phases, dtype=float)
    p = np.asarray(probabilities, dtype=float)
    if phases.shape != p.shape:
        raise ValueError("phases and probabilities must align")
    if abs(p.sum() - 1.0) > 1e-9 or np.any(p < 0):
        raise ValueError("probabilities must be nonnegative and sum to 1")
    return float(_pairwise_trace_distance(phases, p))


@dataclass(frozen=True)
class MonteCarloReport:
    samples: int
    seed: int
    workers: int
    bound: float
    max_observed: float
    margin: float


def validate_bound_montecarlo(
    inp: DiscriminationInput,
    samples: int,
    seed: int,
    *,
    configs_per_state: int = 8,
    workers: int = 1,
) -> MonteCarloReport:
    """Sample admissible pure states and check none beats the trace-distance cap.

    Each sample state is a superposition of ``configs_per_state`` joint
    eigenmodes with particle number uniform on {1..N_bar}, momenta uniform on
    [-k_bar, k_bar], branch signs uniform, and spherically drawn amplitudes.
    Worker substreams derive from numpy's SeedSequence(seed).spawn(workers)
    and are consumed in worker order, so results depend only on
    (seed, workers, samples).  A sample exceeding the bound by more than 1e-9
    raises :class:`BoundViolationError` -- that would falsify the analytic cap.
    """
    report = pe_lower_bound(inp)
    if not report.hypotheses_ok:
        raise ValueError("the analytic bound requires the time-cap hypotheses to hold")
    bound = math.sqrt(max(0.0, 1.0 - math.cos(report.g) ** 2))

    children = np.random.SeedSequence(seed).spawn(max(1, workers))
    share = [samples // len(children)] * len(children)
    for i in range(samples % len(children)):
        share[i] += 1

    max_observed = 0.0
    for child, count in zip(children, share):
        if count == 0:
            continue
        rng = np.random.default_rng(child)
        c = configs_per_state
        counts = rng.integers(1, inp.N_bar + 1, size=(count, c))
        momenta = rng.uniform(-inp.k_bar, inp.k_bar, size=(count, c, inp.N_bar))
        signs = rng.choice(np.array([-1.0, 1.0]), size=(count, c, inp.N_bar))
        amplitudes = rng.standard_normal((count, c)) + 1j * rng.standard_normal((count, c))
        mask = np.arange(inp.N_bar)[None, None, :] < counts[..., None]
        angles = mu(momenta, inp.m, inp.t)
        phases = np.sum(np.where(mask, signs * angles, 0.0), axis=2)
        probs = np.abs(amplitudes) ** 2
        probs /= probs.sum(axis=1, keepdims=True)
        values = _pairwise_trace_distance(phases, probs)
        worst = float(values.max())
        if worst > bound + 1e-9:
            raise BoundViolationError(
                f"sampled trace distance {worst} exceeds the analytic cap {bound}"
            )
        max_observed = max(max_observed, worst)

    return MonteCarloReport(
        samples=samples,
        seed=seed,
        workers=max(1, workers),
        bound=bound,
        max_observed=max_observed,
        margin=bound - max_observed,
    )
