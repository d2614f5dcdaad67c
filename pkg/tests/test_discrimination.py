import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dirac_qca import (
    AutomatonParams,
    DiscriminationInput,
    MultiParticleSpec,
    alpha_beta,
    extremal_alpha_beta,
    mu,
    multiparticle_phase,
    omega,
    pe_lower_bound,
    t_min_approx,
    t_min_exact,
    unitary_k,
    unitary_pair_t,
    validate_bound_montecarlo,
)
from dirac_qca.discrimination import state_overlap_distance

# frozen mpmath references (60-digit arithmetic, evaluated at the exact
# float64 representations of the inputs)
ALPHA_05_06 = -0.011476696887052928
BETA_05_06 = 0.007923564932435428
ALPHA_08_03 = 0.010583607770434625
BETA_08_03 = 0.0014788196457598798
ALPHA_PROTON = 1.6666661368997259e-47  # k = 1e-8, m = 1e-19


class TestUnitaryPair:
    def test_t0_both_identity(self):
        u, ud = unitary_pair_t(0.7, 0.4, 0.0)
        assert np.array_equal(u, np.eye(2))
        assert np.array_equal(ud, np.eye(2))

    def test_massless_evolutions_coincide(self):
        for k in (0.3, 1.5, -2.0):
            for t in (0.5, 3.0, 10.0):
                u, ud = unitary_pair_t(k, 0.0, t)
                assert np.max(np.abs(u - ud)) <= 1e-12

    def test_matches_repeated_multiplication(self):
        u, _ = unitary_pair_t(0.3, 0.6, 5.0)
        u5 = np.linalg.matrix_power(unitary_k(AutomatonParams(0.6), 0.3), 5)
        assert np.max(np.abs(u - u5)) <= 1e-12

    def test_both_unitary(self):
        for k in np.linspace(-3.0, 3.0, 13):
            for m in (0.0, 0.3, 0.9):
                for t in (0.7, 4.0):
                    for matrix in unitary_pair_t(k, m, t):
                        assert np.max(np.abs(matrix.conj().T @ matrix - np.eye(2))) <= 1e-12

    def test_origin_is_identity_blocks(self):
        u, ud = unitary_pair_t(0.0, 0.0, 3.0)
        assert np.array_equal(ud, np.eye(2))
        assert np.max(np.abs(u - np.eye(2))) <= 1e-15

    def test_agrees_with_spectral_power_at_fractional_time(self):
        # same matrix as the momentum-space evolver's per-mode power
        from dirac_qca.automaton import AutomatonParams as AP, ModeSpectrum as MS
        from dirac_qca import evolve_momentum

        L, t = 4, 2.7  # the L = 4 ring carries k = pi/2 exactly
        p = AP(0.6)
        basis_r = np.zeros((L, 2), dtype=complex)
        basis_r[:, 0] = 1.0
        basis_l = np.zeros((L, 2), dtype=complex)
        basis_l[:, 1] = 1.0
        j = int(np.argmin(np.abs(MS(basis_r).ks - np.pi / 2)))
        spectral_power = np.stack(
            [evolve_momentum(MS(basis_r), p, t).modes[j], evolve_momentum(MS(basis_l), p, t).modes[j]],
            axis=1,
        )
        u, _ = unitary_pair_t(np.pi / 2, 0.6, t)
        assert np.max(np.abs(u - spectral_power)) <= 1e-12


class TestMu:
    def test_zero_time(self):
        assert mu(0.8, 0.5, 0.0) == 0.0

    def test_massless_is_zero(self):
        for k in np.linspace(-3.0, 3.0, 11):
            assert mu(k, 0.0, 7.3) <= 1e-12  # angles of identical rotations

    @given(k=st.floats(-3.0, 3.0), t=st.floats(0.0, 10.0))
    @settings(max_examples=100, deadline=None)
    def test_even_in_k(self, k, t):
        assert mu(k, 0.6, t) == mu(-k, 0.6, t)

    def test_angle_inequality_at_reference_point(self):
        k, m, t = 0.5, 0.6, 3.0
        a, b = alpha_beta(k, m)
        assert math.cos(mu(k, m, t)) >= math.cos(a * t) - b - 1e-12

    def test_trace_identity(self):
        # cos(mu) = (1 - b/2) cos(alpha t) + (b/2) cos((w + w_D) t)
        k, m, t = 0.7, 0.45, 3.3
        a, b = alpha_beta(k, m)
        gamma = omega(k, m) + math.hypot(k, m)
        lhs = math.cos(mu(k, m, t))
        rhs = (1 - b / 2) * math.cos(a * t) + (b / 2) * math.cos(gamma * t)
        assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_clamp_guard(self):
        with pytest.raises(ValueError):
            mu(0.5, 0.5, -1.0)


class TestAlphaBeta:
    def test_massless_line(self):
        for k in (0.2, 1.0, 2.5):
            assert alpha_beta(k, 0.0) == (0.0, 0.0)

    def test_rest_point(self):
        for m in (0.2, 0.6, 0.9):
            a, b = alpha_beta(0.0, m)
            assert a == pytest.approx(m - math.asin(m), rel=1e-12)
            assert b == 0.0

    def test_frozen_reference_values(self):
        a, b = alpha_beta(0.5, 0.6)
        assert a == pytest.approx(ALPHA_05_06, rel=1e-12)
        assert b == pytest.approx(BETA_05_06, rel=1e-12)
        a, b = alpha_beta(0.8, 0.3)
        assert a == pytest.approx(ALPHA_08_03, rel=1e-12)
        assert b == pytest.approx(BETA_08_03, rel=1e-12)

    def test_alpha_is_negative_at_reference_point(self):
        # the lattice eigenphase exceeds the continuum one here: alpha < 0
        # (|alpha| is therefore NOT monotone from k = 0; only signed alpha is)
        a, _ = alpha_beta(0.5, 0.6)
        assert a < 0.0

    def test_series_regime_against_mpmath(self):
        a, b = alpha_beta(1e-8, 1e-19)
        assert a == pytest.approx(ALPHA_PROTON, rel=1e-5)
        assert b == pytest.approx(1.3888898e-56, rel=1e-4)

    def test_series_and_direct_branches_agree_at_crossover(self):
        # the direct subtraction is still accurate where the series takes over
        for k, m in ((0.5, 1.1e-3), (0.5, 0.9e-3), (2.9e-3, 1e-5), (1.2e-3, 1e-6)):
            a_direct = math.hypot(k, m) - omega(k, m)
            a_impl, _ = alpha_beta(k, m)
            assert a_impl == pytest.approx(a_direct, rel=2e-7)

    def test_beta_nonnegative(self):
        for k in np.linspace(0.0, 3.0, 31):
            for m in np.linspace(0.0, 1.0, 11):
                if k == 0.0 and m == 0.0:
                    continue
                _, b = alpha_beta(k, m)
                assert b >= 0.0

    def test_origin_rejected(self):
        with pytest.raises(ValueError):
            alpha_beta(0.0, 0.0)


class TestAngleInequalities:
    def test_angle_inequality_grid(self):
        # 32 x 8 x 16 (k, m, t) grid: cos(mu) >= cos(alpha t) - beta
        ks = np.linspace(-3.0, 3.0, 32)
        ms = np.linspace(0.1, 0.9, 8)
        ts = np.linspace(0.0, 10.0, 16)
        worst = 0.0
        for m in ms:
            for k in ks:
                a, b = alpha_beta(k, m)
                angles = mu(k, m, ts)
                slack = np.cos(angles) - (np.cos(a * ts) - b)
                worst = min(worst, float(slack.min()))
        assert worst >= -1e-10

    def test_mismatch_monotonicity_and_endpoint_maxima(self):
        # alpha (signed) and beta are nondecreasing on [0, pi); the extreme
        # moduli over any [0, k_bar] therefore sit on {0, k_bar}
        ks = np.linspace(0.0, np.pi - 1e-3, 256)
        for m in np.linspace(0.1, 0.9, 9):
            alphas = np.array([alpha_beta(k, m)[0] for k in ks])
            betas = np.array([alpha_beta(k, m)[1] for k in ks])
            assert np.min(np.diff(alphas)) >= -1e-10
            assert np.min(np.diff(betas)) >= -1e-10
            assert np.max(np.abs(alphas)) <= max(abs(alphas[0]), abs(alphas[-1])) + 1e-10
            assert np.max(np.abs(betas)) <= max(abs(betas[0]), abs(betas[-1])) + 1e-10

    def test_abs_alpha_dips_before_rising(self):
        # pins the sign subtlety: |alpha| decreases near k = 0 because
        # alpha(0) = m - arcsin(m) < 0 and alpha is increasing through zero
        m = 0.5
        a0 = abs(alpha_beta(1e-6, m)[0])
        a_mid = abs(alpha_beta(0.3, m)[0])
        assert a_mid < a0

    @pytest.mark.parametrize("m,k_bar,n_bar", [(0.3, 0.8, 2), (0.6, 0.5, 1), (0.2, 1.2, 3)])
    def test_angle_cap_sandwich(self, m, k_bar, n_bar):
        alpha_bar, beta_bar = extremal_alpha_beta(k_bar, m)
        assert beta_bar <= 1.0 - math.cos(math.pi / (2 * n_bar))
        f = math.acos(math.cos(math.pi / (2 * n_bar)) + beta_bar) / alpha_bar
        t = 0.9 * f
        g = n_bar * math.acos(math.cos(alpha_bar * t) - beta_bar)
        assert g <= math.pi / 2 + 1e-12
        for k in np.linspace(0.0, k_bar, 64):
            assert n_bar * mu(k, m, t) <= g + 1e-10


class TestExtremal:
    def test_massless(self):
        assert extremal_alpha_beta(1.0, 0.0) == (0.0, 0.0)

    def test_zero_cap_reduces_to_rest_point(self):
        for m in (0.3, 0.7):
            alpha_bar, beta_bar = extremal_alpha_beta(0.0, m)
            assert alpha_bar == pytest.approx(math.asin(m) - m, rel=1e-12)
            assert beta_bar == 0.0

    def test_grid_maximum_sits_on_endpoints(self):
        alpha_bar, beta_bar = extremal_alpha_beta(1.0, 0.6, grid_points=1024)
        grid = np.linspace(0.0, 1.0, 2048)
        grid_alpha = max(abs(alpha_beta(k, 0.6)[0]) for k in grid)
        grid_beta = max(alpha_beta(k, 0.6)[1] for k in grid)
        assert alpha_bar == pytest.approx(grid_alpha, abs=1e-10)
        assert beta_bar == pytest.approx(grid_beta, abs=1e-10)

    def test_rejects_bad_cap(self):
        with pytest.raises(ValueError):
            extremal_alpha_beta(np.pi, 0.5)


class TestPeLowerBound:
    def test_identical_theories_are_indistinguishable(self):
        report = pe_lower_bound(DiscriminationInput(m=0.0, k_bar=0.5, N_bar=1, t=100.0))
        assert report.hypotheses_ok
        assert report.g == 0.0
        assert report.pe_lower == 0.5
        assert report.f_limit == math.inf

    def test_zero_time_zero_beta(self):
        report = pe_lower_bound(DiscriminationInput(m=0.6, k_bar=0.0, N_bar=1, t=0.0))
        assert report.hypotheses_ok
        assert report.g == 0.0
        assert report.pe_lower == 0.5

    def test_bound_decreases_with_time(self):
        alpha_bar, beta_bar = extremal_alpha_beta(0.8, 0.3)
        f = math.acos(math.cos(math.pi / 2) + beta_bar) / alpha_bar
        previous = 0.5 + 1e-12
        for t in np.linspace(0.0, 0.999 * f, 12):
            report = pe_lower_bound(DiscriminationInput(m=0.3, k_bar=0.8, N_bar=1, t=float(t)))
            assert report.hypotheses_ok
            assert 0.0 <= report.pe_lower <= 0.5
            assert report.pe_lower <= previous + 1e-12
            # pe = 1/2 - 1/2 sqrt(1 - cos^2 g), written as (1 - sin g)/2
            assert report.pe_lower == pytest.approx(
                0.5 - 0.5 * math.sqrt(1.0 - math.cos(report.g) ** 2), abs=1e-15
            )
            previous = report.pe_lower

    def test_out_of_window_time_reports_no_bound(self):
        report = pe_lower_bound(DiscriminationInput(m=0.3, k_bar=0.8, N_bar=1, t=1e9))
        assert not report.hypotheses_ok
        assert report.g is None and report.pe_lower is None

    def test_proton_scale_perfect_discrimination_time(self):
        t = t_min_exact(1e-19, 1e-8, 1)
        assert t == pytest.approx(3 * math.pi * 1e46, rel=1e-6)
        report = pe_lower_bound(DiscriminationInput(m=1e-19, k_bar=1e-8, N_bar=1, t=t))
        assert report.hypotheses_ok
        assert report.g == pytest.approx(math.pi / 2, rel=1e-6)
        assert report.pe_lower <= 1e-9


class TestTmin:
    def test_approximate_scaling_in_particle_number(self):
        assert t_min_approx(0.1, 0.5, 2) == t_min_approx(0.1, 0.5, 1) / 2.0

    def test_proton_scale_headline(self):
        t = t_min_approx(1e-19, 1e-8, 1)
        assert t == 3.0 * math.pi / (1e-19 * 1e-19 * 1e-8 * 1)
        assert t == pytest.approx(3 * math.pi * 1e46, rel=1e-12)

    def test_exact_and_approximate_agree_to_20_percent(self):
        exact = t_min_exact(0.1, 0.5, 1)
        approx = t_min_approx(0.1, 0.5, 1)
        assert exact is not None
        assert abs(exact - approx) / approx <= 0.20

    def test_unreachable_when_beta_hypothesis_fails(self):
        assert t_min_exact(0.9, 3.0, 50) is None

    def test_rejects_degenerate_inputs(self):
        with pytest.raises(ValueError):
            t_min_approx(0.0, 0.5, 1)
        with pytest.raises(ValueError):
            t_min_exact(0.5, 0.0, 1)


class TestMultiparticle:
    def test_single_particle(self):
        spec = MultiParticleSpec(momenta=(0.7,), branches=(+1,))
        assert multiparticle_phase(spec, 0.6) == omega(0.7, 0.6)

    def test_opposite_branches_cancel(self):
        spec = MultiParticleSpec(momenta=(0.7, 0.7), branches=(+1, -1))
        assert multiparticle_phase(spec, 0.6) == 0.0

    def test_three_particles_brute_force(self):
        rng = np.random.default_rng(7)
        momenta = tuple(rng.uniform(-2.0, 2.0, 3))
        branches = tuple(int(s) for s in rng.choice([-1, 1], 3))
        spec = MultiParticleSpec(momenta=momenta, branches=branches)
        brute = sum(s * omega(k, 0.4) for k, s in zip(momenta, branches))
        assert multiparticle_phase(spec, 0.4) == pytest.approx(brute, abs=1e-14)

    def test_validation(self):
        with pytest.raises(ValueError):
            MultiParticleSpec(momenta=(0.1, 0.2), branches=(+1,))
        with pytest.raises(ValueError):
            MultiParticleSpec(momenta=(0.1,), branches=(2,))


class TestMonteCarlo:
    def _input(self, t_fraction=0.8, m=0.3, k_bar=0.8, n_bar=2):
        alpha_bar, beta_bar = extremal_alpha_beta(k_bar, m)
        f = math.acos(math.cos(math.pi / (2 * n_bar)) + beta_bar) / alpha_bar
        return DiscriminationInput(m=m, k_bar=k_bar, N_bar=n_bar, t=t_fraction * f)

    def test_massless_samples_saturate_zero(self):
        inp = DiscriminationInput(m=0.0, k_bar=0.5, N_bar=2, t=10.0)
        report = validate_bound_montecarlo(inp, samples=200, seed=1)
        assert report.bound == 0.0
        assert report.max_observed <= 1e-9

    def test_single_momentum_pure_eigenphase_pair(self):
        # equal superposition of the two branches at one momentum: the trace
        # distance is exactly sqrt(1 - cos^2 mu)
        k, m, t = 0.6, 0.3, 4.0
        angle = mu(k, m, t)
        value = state_overlap_distance([angle, -angle], [0.5, 0.5])
        assert value == pytest.approx(math.sqrt(1.0 - math.cos(angle) ** 2), rel=1e-12)

    def test_reference_run_stays_below_bound(self):
        report = validate_bound_montecarlo(self._input(), samples=10_000, seed=42)
        assert report.max_observed <= report.bound + 1e-9
        assert report.margin >= 0.0

    def test_reproducible_given_seed_and_workers(self):
        inp = self._input()
        a = validate_bound_montecarlo(inp, samples=500, seed=9, workers=3)
        b = validate_bound_montecarlo(inp, samples=500, seed=9, workers=3)
        assert a.max_observed == b.max_observed

    def test_requires_hypotheses(self):
        with pytest.raises(ValueError):
            validate_bound_montecarlo(self._input(t_fraction=1.5), samples=10, seed=0)

    def test_overlap_distance_validation(self):
        with pytest.raises(ValueError):
            state_overlap_distance([0.1], [0.5, 0.5])
        with pytest.raises(ValueError):
            state_overlap_distance([0.1, 0.2], [0.9, 0.3])
