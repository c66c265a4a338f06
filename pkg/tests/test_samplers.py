import numpy as np
import pytest
from numpy.testing import assert_allclose

from uniformdm.linalg import check_density_matrix, partial_trace_right
from uniformdm.measure import lambda_max_cdf_d2
from uniformdm.samplers import (
    RngStream,
    as_generator,
    rejection_acceptance_probe,
    sample_density_bloch,
    sample_density_fixed_basis,
    sample_density_hs,
    sample_density_purified,
    sample_density_spectral,
    sample_ginibre,
    sample_gue,
    sample_haar_unitary,
    sample_pure_uniform,
    sample_spectrum_rejection,
)
from uniformdm.stats import ks_one_sample, ks_two_sample


def mean_z(values, target):
    values = np.asarray(values, dtype=float)
    se = values.std(ddof=1) / np.sqrt(len(values))
    return (values.mean() - target) / se


def var_z(values, target):
    values = np.asarray(values, dtype=float)
    n = len(values)
    v = values.var(ddof=1)
    c = values - values.mean()
    se = np.sqrt(max(np.mean(c**4) - v * v, 0.0) / n)
    return (v - target) / se


class TestRngStream:
    def test_bit_identical_replay(self):
        a = sample_ginibre(3, RngStream(42, 5), size=10)
        b = sample_ginibre(3, RngStream(42, 5), size=10)
        assert np.array_equal(a, b)

    def test_substreams_differ(self):
        base = RngStream(42)
        a = sample_ginibre(2, base.substream(0), size=4)
        b = sample_ginibre(2, base.substream(1), size=4)
        assert not np.array_equal(a, b)

    def test_negative_stream_index_rejected(self):
        with pytest.raises(ValueError):
            RngStream(1, -1)

    def test_as_generator_coercions(self):
        assert isinstance(as_generator(None), np.random.Generator)
        assert isinstance(as_generator(7), np.random.Generator)
        gen = np.random.default_rng(0)
        assert as_generator(gen) is gen
        assert isinstance(as_generator(RngStream(1)), np.random.Generator)
        with pytest.raises(TypeError):
            as_generator("seed")


class TestGinibre:
    def test_moments(self):
        n = 100_000
        z = sample_ginibre(2, RngStream(1), size=n)
        for i in range(2):
            for j in range(2):
                assert abs(mean_z(z[:, i, j].real, 0.0)) <= 5.0
                assert abs(mean_z(z[:, i, j].imag, 0.0)) <= 5.0
        assert abs(mean_z((np.abs(z) ** 2).reshape(-1), 1.0)) <= 5.0

    def test_rejects_zero_dim(self):
        with pytest.raises(ValueError):
            sample_ginibre(0, RngStream(1))


class TestGue:
    def test_exactly_hermitian(self):
        x = sample_gue(5, RngStream(2), size=50)
        assert np.all(x == np.conj(np.swapaxes(x, -1, -2)))

    def test_trace_square_mean(self):
        n = 100_000
        x = sample_gue(4, RngStream(3), size=n)
        tr_sq = np.einsum("nij,nji->n", x, x).real
        assert abs(mean_z(tr_sq, 4.0)) <= 5.0

    def test_diagonal_variance(self):
        n = 100_000
        x = sample_gue(2, RngStream(4), size=n)
        assert abs(var_z(x[:, 0, 0].real, 0.5)) <= 5.0

    def test_offdiagonal_variance(self):
        n = 100_000
        x = sample_gue(2, RngStream(5), size=n)
        assert abs(var_z(x[:, 0, 1].real, 0.25)) <= 5.0
        assert abs(var_z(x[:, 0, 1].imag, 0.25)) <= 5.0


class TestHaarUnitary:
    def test_unitarity(self):
        for d in (2, 3, 5, 8):
            u = sample_haar_unitary(d, RngStream(6), size=25)
            gram = np.swapaxes(u, -1, -2).conj() @ u
            assert np.max(np.abs(gram - np.eye(d))) < 1e-10

    def test_entry_second_moment(self):
        n = 100_000
        u = sample_haar_unitary(2, RngStream(7), size=n)
        assert abs(mean_z(np.abs(u[:, 0, 0]) ** 2, 0.5)) <= 5.0

    def test_first_column_matches_pure_state(self):
        n = 50_000
        u = sample_haar_unitary(2, RngStream(8), size=n)
        psi = sample_pure_uniform(2, RngStream(9), size=n)
        report = ks_two_sample(np.abs(u[:, 0, 0]) ** 2, np.abs(psi[:, 0]) ** 2)
        assert report.p_value > 1e-3


class TestPureUniform:
    def test_unit_norm(self):
        psi = sample_pure_uniform(5, RngStream(10), size=1000)
        assert np.max(np.abs(np.linalg.norm(psi, axis=-1) - 1.0)) < 1e-12

    def test_first_component_uniform_d2(self):
        # |psi_1|^2 of a 2-dim uniform state is uniform on [0, 1].
        psi = sample_pure_uniform(2, RngStream(11), size=100_000)
        report = ks_one_sample(np.abs(psi[:, 0]) ** 2, lambda t: np.clip(t, 0, 1))
        assert report.p_value > 1e-3

    def test_component_mean(self):
        for d in (2, 4):
            psi = sample_pure_uniform(d, RngStream(12 + d), size=50_000)
            assert abs(mean_z(np.abs(psi[:, 0]) ** 2, 1.0 / d)) <= 5.0


class TestDensityHs:
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_invariants(self, d):
        rho = sample_density_hs(d, RngStream(20 + d), size=10_000)
        check_density_matrix(rho)

    def test_mean_is_maximally_mixed(self):
        n = 200_000
        rho = sample_density_hs(2, RngStream(21), size=n)
        for i in range(2):
            for j in range(2):
                target = 0.5 if i == j else 0.0
                assert abs(mean_z(rho[:, i, j].real, target)) <= 5.0
                if i != j:
                    assert abs(mean_z(rho[:, i, j].imag, 0.0)) <= 5.0

    def test_mean_purity(self):
        n = 200_000
        rho = sample_density_hs(2, RngStream(22), size=n)
        pur = np.einsum("nij,nji->n", rho, rho).real
        assert abs(mean_z(pur, 0.8)) <= 5.0

    def test_d1_trivial(self):
        assert_allclose(sample_density_hs(1, RngStream(1)), np.ones((1, 1)))


class TestDensityPurified:
    def test_invariants(self):
        rho = sample_density_purified(3, RngStream(30), size=10_000)
        check_density_matrix(rho)

    def test_matches_literal_partial_trace(self):
        # Oracle: reshape + right partial trace of the full projector.
        for seed in range(5):
            psi = sample_pure_uniform(9, RngStream(31, seed))
            projector = np.outer(psi, psi.conj())
            oracle = partial_trace_right(projector, 3, 3)
            rho = sample_density_purified(3, RngStream(31, seed))
            assert_allclose(rho, oracle, atol=1e-13)

    def test_ks_against_hs_lambda_max_d2(self):
        n = 100_000
        a = np.linalg.eigvalsh(sample_density_purified(2, RngStream(32), size=n))[:, -1]
        b = np.linalg.eigvalsh(sample_density_hs(2, RngStream(33), size=n))[:, -1]
        assert ks_two_sample(a, b).p_value > 1e-3

    def test_ks_against_hs_purity_d3(self):
        n = 100_000
        a = sample_density_purified(3, RngStream(34), size=n)
        b = sample_density_hs(3, RngStream(35), size=n)
        pa = np.einsum("nij,nji->n", a, a).real
        pb = np.einsum("nij,nji->n", b, b).real
        assert ks_two_sample(pa, pb).p_value > 1e-3


class TestSpectrumRejection:
    @pytest.mark.parametrize("d", [2, 3])
    def test_descending_simplex_points(self, d):
        lam = sample_spectrum_rejection(d, RngStream(40 + d), size=5000)
        assert np.all(lam >= 0.0)
        assert np.max(np.abs(lam.sum(axis=-1) - 1.0)) < 1e-12
        assert np.all(np.diff(lam, axis=-1) <= 0.0)

    def test_lambda_max_distribution_d2(self):
        lam = sample_spectrum_rejection(2, RngStream(41), size=10_000)
        assert ks_one_sample(lam[:, 0], lambda_max_cdf_d2).p_value > 1e-3

    def test_acceptance_rate_d2(self):
        accepted, proposed = rejection_acceptance_probe(2, 100_000, RngStream(42))
        rate = accepted / proposed
        se = np.sqrt(rate * (1 - rate) / proposed)
        assert abs(rate - 1.0 / 3.0) <= 5.0 * se

    @pytest.mark.parametrize("d", [1, 7])
    def test_unsupported_dimension(self, d):
        with pytest.raises(ValueError):
            sample_spectrum_rejection(d, RngStream(1))

    def test_attempt_cap_reports_attempts(self):
        # mean acceptance at d = 6 is ~1e-26, so the cap always binds there
        with pytest.raises(RuntimeError, match="10000000 attempts"):
            sample_spectrum_rejection(6, RngStream(43))


class TestDensitySpectral:
    def test_invariants(self):
        rho = sample_density_spectral(3, RngStream(50), size=10_000)
        check_density_matrix(rho)

    def test_ks_against_hs_lambda_max_d2(self):
        n = 100_000
        a = np.linalg.eigvalsh(sample_density_spectral(2, RngStream(51), size=n))[:, -1]
        b = np.linalg.eigvalsh(sample_density_hs(2, RngStream(52), size=n))[:, -1]
        assert ks_two_sample(a, b).p_value > 1e-3


class TestDensityBloch:
    def test_psd_and_eigenvalue_range(self):
        rho = sample_density_bloch(RngStream(60), size=10_000)
        check_density_matrix(rho)
        eig = np.linalg.eigvalsh(rho)
        assert np.all(eig[:, 0] >= -1e-12)
        assert np.all(eig[:, 1] >= 0.5 - 1e-12)
        # eigenvalue pair is 1/2 +- |a|
        assert np.max(np.abs(eig.sum(axis=-1) - 1.0)) < 1e-12

    def test_lambda_max_analytic_law(self):
        rho = sample_density_bloch(RngStream(61), size=10_000)
        lam_max = np.linalg.eigvalsh(rho)[:, -1]
        assert ks_one_sample(lam_max, lambda_max_cdf_d2).p_value > 1e-3

    def test_ks_against_hs(self):
        n = 100_000
        a = np.linalg.eigvalsh(sample_density_bloch(RngStream(62), size=n))[:, -1]
        b = np.linalg.eigvalsh(sample_density_hs(2, RngStream(63), size=n))[:, -1]
        assert ks_two_sample(a, b).p_value > 1e-3


class TestFixedBasisControl:
    def test_valid_but_diagonal(self):
        rho = sample_density_fixed_basis(3, RngStream(70), size=1000)
        check_density_matrix(rho)
        off = rho[:, ~np.eye(3, dtype=bool)]
        assert np.all(off == 0)
