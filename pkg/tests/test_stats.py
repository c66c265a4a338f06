import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import special
from scipy import stats as sps

from uniformdm.samplers import (
    RngStream,
    sample_density_fixed_basis,
    sample_density_hs,
)
from uniformdm.stats import (
    DEFAULT_SEED,
    HADAMARD,
    entangled_fraction,
    kolmogorov_sf,
    ks_one_sample,
    ks_two_sample,
    make_mc_report,
    mc_covariance_check,
    mc_mean_matrix,
    mc_mean_reports,
    mc_purity_report,
    partial_transpose_right,
    ppt_is_entangled,
    run_verification_suite,
    unitary_invariance_test,
)

BELL = np.zeros((4, 4), dtype=complex)
_phi = np.zeros(4)
_phi[0] = _phi[3] = 1 / math.sqrt(2)
BELL[:] = np.outer(_phi, _phi)


def werner(p):
    return p * BELL + (1 - p) * np.eye(4) / 4


class TestMonteCarloReport:
    def test_z_score_consistency(self):
        rho = sample_density_hs(2, RngStream(1), size=5000)
        for rep in mc_covariance_check(rho) + [mc_purity_report(rho)]:
            assert rep.z_score == pytest.approx(
                (rep.estimate - rep.target) / rep.standard_error)
            assert rep.passed == (abs(rep.z_score) <= rep.threshold)

    def test_zero_standard_error(self):
        exact = make_mc_report("x", 10, 1.0, 0.0, 1.0)
        assert exact.z_score == 0.0 and exact.passed
        off = make_mc_report("x", 10, 2.0, 0.0, 1.0)
        assert math.isinf(off.z_score) and not off.passed

    def test_one_sided_mode(self):
        rep = make_mc_report("x", 100, 0.9, 0.05, 0.5, threshold=5.0, one_sided=True)
        assert rep.passed and rep.z_score == pytest.approx(8.0)
        assert not make_mc_report("x", 100, 0.6, 0.05, 0.5, one_sided=True).passed


class TestKolmogorovSf:
    def test_matches_scipy(self):
        for t in (0.3, 0.5, 0.8, 1.0, 1.5, 2.0, 3.0):
            assert kolmogorov_sf(t) == pytest.approx(float(special.kolmogorov(t)), rel=1e-9)

    def test_monotone_nonincreasing(self):
        grid = np.linspace(0.01, 4.0, 400)
        values = [kolmogorov_sf(t) for t in grid]
        assert all(a >= b for a, b in zip(values, values[1:]))


class TestKsOneSample:
    def test_self_consistency_100_reps(self):
        # Draws from the target law should pass at alpha=0.001 in >=99/100 reps.
        rng = np.random.default_rng(2)
        hits = sum(
            ks_one_sample(rng.random(10_000), lambda t: np.clip(t, 0, 1)).p_value > 1e-3
            for _ in range(100))
        assert hits >= 99

    def test_gross_mismatch(self):
        rng = np.random.default_rng(3)
        report = ks_one_sample(rng.random(10_000), lambda t: np.clip(t, 0, 1) ** 2)
        assert report.p_value < 1e-6

    def test_d_in_unit_interval(self):
        rng = np.random.default_rng(4)
        for n in (8, 50, 1000):
            report = ks_one_sample(rng.random(n), lambda t: np.clip(t, 0, 1))
            assert 0.0 <= report.d_stat <= 1.0

    def test_matches_scipy_asymptotic(self):
        rng = np.random.default_rng(5)
        x = rng.standard_normal(5000)
        mine = ks_one_sample(x, sps.norm.cdf)
        ref = sps.kstest(x, sps.norm.cdf, method="asymp")
        assert mine.d_stat == pytest.approx(ref.statistic, abs=1e-12)
        assert mine.p_value == pytest.approx(ref.pvalue, rel=1e-6)

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            ks_one_sample([0.1] * 7, lambda t: t)

    def test_non_monotone_cdf_rejected(self):
        rng = np.random.default_rng(6)
        with pytest.raises(ValueError, match="monotone"):
            ks_one_sample(rng.random(100), lambda t: np.sin(6 * t))


class TestKsTwoSample:
    def test_identical_samples(self):
        x = np.linspace(0, 1, 100)
        report = ks_two_sample(x, x.copy())
        assert report.d_stat == 0.0 and report.p_value == 1.0

    def test_self_consistency_100_reps(self):
        rng = np.random.default_rng(7)
        hits = 0
        for _ in range(100):
            a = rng.standard_normal(100_000)
            b = rng.standard_normal(100_000)
            hits += ks_two_sample(a, b).p_value > 1e-3
        assert hits >= 99

    def test_shifted_lambda_max_detected(self):
        n = 50_000
        lam = np.linalg.eigvalsh(sample_density_hs(2, RngStream(8), size=n))[:, -1]
        report = ks_two_sample(lam, lam + 0.05)
        assert report.p_value < 1e-6

    def test_p_monotone_in_shift(self):
        rng = np.random.default_rng(9)
        a = rng.random(20_000)
        previous = 1.1
        for shift in (0.0, 0.005, 0.01, 0.02, 0.05):
            p = ks_two_sample(a, a + shift).p_value
            assert p <= previous + 1e-12
            previous = p

    def test_matches_scipy_statistic(self):
        rng = np.random.default_rng(10)
        a, b = rng.standard_normal(4000), rng.standard_normal(6000) * 1.05
        mine = ks_two_sample(a, b)
        ref = sps.ks_2samp(a, b, method="asymp")
        assert mine.d_stat == pytest.approx(ref.statistic, abs=1e-12)
        # scipy applies a small-sample correction to the asymptotic p-value
        assert mine.p_value == pytest.approx(ref.pvalue, rel=0.15)

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            ks_two_sample([1.0] * 7, [1.0] * 100)


class TestMeanEstimators:
    def test_constant_stack(self):
        samples = np.repeat(np.eye(2)[None] / 2, 50, axis=0).astype(complex)
        mean, se = mc_mean_matrix(samples)
        assert_allclose(mean, np.eye(2) / 2)
        assert np.all(se.real == 0) and np.all(se.imag == 0)
        assert all(r.passed for r in mc_mean_reports(samples))

    def test_hs_mean_within_5_se(self):
        samples = sample_density_hs(3, RngStream(11), size=200_000)
        assert all(r.passed for r in mc_mean_reports(samples))

    def test_needs_two_samples(self):
        with pytest.raises(ValueError):
            mc_mean_matrix(np.eye(2)[None].astype(complex))


class TestCovarianceCheck:
    def test_d2_closed_forms(self):
        samples = sample_density_hs(2, RngStream(12), size=200_000)
        var_r, off_r, overlap_r = mc_covariance_check(samples)
        assert var_r.target == pytest.approx(0.05)
        assert off_r.target == pytest.approx(0.1)
        assert overlap_r.target == pytest.approx(0.3)
        assert var_r.passed and off_r.passed and overlap_r.passed

    def test_needs_100_samples(self):
        with pytest.raises(ValueError):
            mc_covariance_check(sample_density_hs(2, RngStream(13), size=50))


class TestUnitaryInvariance:
    def test_identity_conjugation(self):
        sampler = lambda size, g: sample_density_hs(2, g, size)
        report = unitary_invariance_test(sampler, np.eye(2), 20_000, RngStream(14))
        assert report.p_value > 1e-3

    def test_hadamard_conjugation(self):
        sampler = lambda size, g: sample_density_hs(2, g, size)
        report = unitary_invariance_test(sampler, HADAMARD, 100_000, RngStream(15))
        assert report.p_value > 1e-3

    def test_fixed_basis_negative_control(self):
        sampler = lambda size, g: sample_density_fixed_basis(2, g, size)
        report = unitary_invariance_test(sampler, HADAMARD, 100_000, RngStream(16))
        assert report.p_value < 1e-6

    def test_rejects_non_unitary(self):
        sampler = lambda size, g: sample_density_hs(2, g, size)
        with pytest.raises(ValueError):
            unitary_invariance_test(sampler, np.ones((2, 2)), 2000, RngStream(17))


class TestPpt:
    def test_bell_state_entangled(self):
        assert ppt_is_entangled(BELL, 2, 2)

    def test_maximally_mixed_separable(self):
        assert not ppt_is_entangled(np.eye(4) / 4, 2, 2)

    def test_werner_threshold(self):
        # partial transpose eigenvalues cross zero at p = 1/3
        assert not ppt_is_entangled(werner(0.2), 2, 2)
        assert ppt_is_entangled(werner(0.5), 2, 2)

    def test_partial_transpose_is_involution(self):
        rho = sample_density_hs(4, RngStream(18))
        twice = partial_transpose_right(partial_transpose_right(rho, 2, 2), 2, 2)
        assert_allclose(twice, rho)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            ppt_is_entangled(np.eye(4) / 4, 2, 3)

    def test_local_unitary_invariance(self):
        # PPT verdicts are stable under U_A (x) U_B away from the boundary.
        from uniformdm.samplers import sample_haar_unitary

        rng = RngStream(19)
        checked = 0
        while checked < 50:
            rho = sample_density_hs(4, rng)
            smallest = np.linalg.eigvalsh(partial_transpose_right(rho, 2, 2))[0]
            if abs(smallest) <= 1e-8:
                continue
            local = np.kron(sample_haar_unitary(2, rng), sample_haar_unitary(2, rng))
            rotated = local @ rho @ local.conj().T
            assert ppt_is_entangled(rotated, 2, 2) == ppt_is_entangled(rho, 2, 2)
            checked += 1


class TestEntangledFraction:
    def test_majority_claim(self):
        report = entangled_fraction(2, 2, 10_000, RngStream(20))
        assert 0.0 <= report.estimate <= 1.0
        assert report.one_sided and report.passed
        # informative point estimate, not a contract: print for the record
        print(f"entangled fraction estimate: {report.estimate:.4f}")

    def test_unsupported_dimensions(self):
        with pytest.raises(ValueError):
            entangled_fraction(2, 3, 2000, RngStream(21))

    def test_needs_enough_samples(self):
        with pytest.raises(ValueError):
            entangled_fraction(2, 2, 100, RngStream(22))


class TestVerificationSuite:
    def test_suite_passes_for_d_2_3_4_with_pinned_seed(self):
        results = run_verification_suite(dims=(2, 3, 4), n=20_000, seed=DEFAULT_SEED)
        failed = [r for r in results if not r.passed]
        assert not failed, [f"{r.block}/{r.label}" for r in failed]

    def test_only_filter(self):
        results = run_verification_suite(dims=(2,), n=3000, only=("eigdist",))
        assert {r.block for r in results} == {"eigdist"}

    def test_unknown_block_rejected(self):
        with pytest.raises(ValueError, match="unknown"):
            run_verification_suite(dims=(2,), n=1000, only=("nope",))

    def test_corrupted_sampler_fails(self):
        results = run_verification_suite(
            dims=(2,), n=5000, only=("invariance",),
            density_samplers={"hs": lambda d, rng, size: sample_density_fixed_basis(d, rng, size)})
        assert any(not r.passed for r in results)

    def test_dimension_validation(self):
        with pytest.raises(ValueError):
            run_verification_suite(dims=(1,), n=1000)
