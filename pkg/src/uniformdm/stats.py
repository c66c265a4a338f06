"""Monte Carlo estimators and hypothesis tests for the uniform ensemble.

Confronts the samplers with their closed-form targets: entrywise means,
covariance and overlap moments, purity, eigenvalue laws (one- and
two-sample Kolmogorov-Smirnov), unitary invariance, and the positive-
partial-transpose entanglement check.  ``run_verification_suite`` bundles
everything into one pass/fail table.

Moment checks pass when |z| <= 5 by default; KS checks pass when the
asymptotic p-value exceeds alpha = 0.001.  Both are exact-null tests here,
so with a fresh seed the whole suite still fails by chance at roughly the
summed alpha level (about 2 percent); the default seed is pinned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import measure
from .linalg import check_unitary
from .samplers import (
    RngStream,
    as_generator,
    rejection_acceptance_probe,
    sample_density_bloch,
    sample_density_hs,
    sample_density_purified,
    sample_density_spectral,
    sample_gue,
)

Z_THRESHOLD_DEFAULT = 5.0
KS_ALPHA_DEFAULT = 1e-3
PPT_EIGENVALUE_TOL = 1e-8

# Documented default seed for the verification suite and CLI.
DEFAULT_SEED = 271828

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


@dataclass(frozen=True)
class MonteCarloReport:
    """One moment estimate confronted with its closed-form target.

    ``z_score = (estimate - target) / standard_error``; two-sided reports
    pass when |z| <= threshold, one-sided ones (used for exceedance claims
    such as the entangled fraction) when z >= threshold.
    """

    statistic: str
    n: int
    estimate: float
    standard_error: float
    target: float
    z_score: float
    threshold: float
    passed: bool
    one_sided: bool = False


@dataclass(frozen=True)
class KsReport:
    """Kolmogorov-Smirnov statistic with its asymptotic p-value."""

    n: int
    m: int | None
    d_stat: float
    p_value: float
    alpha: float
    passed: bool


def make_mc_report(statistic: str, n: int, estimate: float, standard_error: float,
                   target: float, threshold: float = Z_THRESHOLD_DEFAULT,
                   one_sided: bool = False) -> MonteCarloReport:
    """Assemble a report, handling the degenerate zero-standard-error case."""
    if standard_error > 0:
        z = (estimate - target) / standard_error
    else:
        z = 0.0 if estimate == target else math.inf * math.copysign(1.0, estimate - target)
    passed = (z >= threshold) if one_sided else (abs(z) <= threshold)
    return MonteCarloReport(statistic, int(n), float(estimate), float(standard_error),
                            float(target), float(z), float(threshold), bool(passed),
                            one_sided)


def kolmogorov_sf(t: float) -> float:
    """Survival function of the asymptotic Kolmogorov distribution.

    ``2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 t^2)``; below t = 0.2 the value is
    1 to within 1e-12, so we short-circuit.
    """
    if t <= 0.2:
        return 1.0
    total = 0.0
    for k in range(1, 200):
        term = math.exp(-2.0 * (k * t) ** 2)
        total += term if k % 2 else -term
        if term < 1e-18:
            break
    return min(1.0, max(0.0, 2.0 * total))


def ks_one_sample(values, cdf: Callable, alpha: float = KS_ALPHA_DEFAULT) -> KsReport:
    """One-sample KS test of `values` against a target CDF.

    The p-value is asymptotic, ``kolmogorov_sf(sqrt(n) * D)``.  The callable
    should accept an ndarray; scalar-only callables are mapped.  Raises for
    fewer than 8 points or a CDF that is non-monotone on the sample.
    """
    x = np.sort(np.asarray(values, dtype=float))
    n = len(x)
    if n < 8:
        raise ValueError("one-sample KS needs at least 8 points")
    f = np.asarray(cdf(x), dtype=float)
    if f.shape != x.shape:
        f = np.fromiter((float(cdf(v)) for v in x), dtype=float, count=n)
    if np.any(np.diff(f) < -1e-12):
        raise ValueError("target CDF is not monotone on the sample points")
    if np.any(f < -1e-9) or np.any(f > 1.0 + 1e-9):
        raise ValueError("target CDF must map into [0, 1]")
    i = np.arange(1, n + 1)
    d_stat = max(float(np.max(i / n - f)), float(np.max(f - (i - 1) / n)), 0.0)
    p = kolmogorov_sf(math.sqrt(n) * d_stat)
    return KsReport(n=n, m=None, d_stat=d_stat, p_value=p, alpha=alpha, passed=p > alpha)


def ks_two_sample(a, b, alpha: float = KS_ALPHA_DEFAULT) -> KsReport:
    """Two-sample KS test with the asymptotic p-value.

    Uses the effective size n m / (n + m) in ``kolmogorov_sf``.
    """
    xa = np.sort(np.asarray(a, dtype=float))
    xb = np.sort(np.asarray(b, dtype=float))
    n, m = len(xa), len(xb)
    if min(n, m) < 8:
        raise ValueError("two-sample KS needs at least 8 points per sample")
    both = np.concatenate([xa, xb])
    fa = np.searchsorted(xa, both, side="right") / n
    fb = np.searchsorted(xb, both, side="right") / m
    d_stat = float(np.max(np.abs(fa - fb)))
    effective = n * m / (n + m)
    p = kolmogorov_sf(math.sqrt(effective) * d_stat)
    return KsReport(n=n, m=m, d_stat=d_stat, p_value=p, alpha=alpha, passed=p > alpha)


def mc_mean_matrix(samples) -> tuple[np.ndarray, np.ndarray]:
    """Entrywise sample mean and standard error of a stack of matrices.

    Returns ``(mean, se)`` where the real and imaginary parts of ``se``
    are the standard errors of the corresponding parts of the entries.
    """
    samples = np.asarray(samples)
    if samples.ndim != 3 or len(samples) < 2:
        raise ValueError("need a stack of at least 2 matrices")
    n = len(samples)
    mean = samples.mean(axis=0)
    se_re = samples.real.std(axis=0, ddof=1) / math.sqrt(n)
    se_im = samples.imag.std(axis=0, ddof=1) / math.sqrt(n)
    return mean, se_re + 1j * se_im


def mc_mean_reports(samples, threshold: float = Z_THRESHOLD_DEFAULT) -> list[MonteCarloReport]:
    """Per-entry reports of the sample mean against the I/d target."""
    samples = np.asarray(samples)
    n, d = len(samples), samples.shape[-1]
    mean, se = mc_mean_matrix(samples)
    target = measure.mean_density(d)
    reports = []
    for i in range(d):
        for j in range(d):
            reports.append(make_mc_report(f"mean[{i},{j}].re", n, mean[i, j].real,
                                          se[i, j].real, target[i, j].real, threshold))
            reports.append(make_mc_report(f"mean[{i},{j}].im", n, mean[i, j].imag,
                                          se[i, j].imag, target[i, j].imag, threshold))
    return reports


def _variance_report(statistic: str, x: np.ndarray, target: float,
                     threshold: float) -> MonteCarloReport:
    # Asymptotic standard error of the sample variance: sqrt((m4 - v^2)/n).
    n = len(x)
    v = float(x.var(ddof=1))
    c = x - x.mean()
    m4 = float(np.mean(c**4))
    se = math.sqrt(max(m4 - v * v, 0.0) / n)
    return make_mc_report(statistic, n, v, se, target, threshold)


def _mean_report(statistic: str, x: np.ndarray, target: float,
                 threshold: float) -> MonteCarloReport:
    n = len(x)
    se = float(x.std(ddof=1)) / math.sqrt(n)
    return make_mc_report(statistic, n, float(x.mean()), se, target, threshold)


def mc_covariance_check(samples, threshold: float = Z_THRESHOLD_DEFAULT) -> list[MonteCarloReport]:
    """Second-moment checks of a density-matrix sample against closed forms.

    Reports Var(rho_11) against c(d)(1 - 1/d), E|rho_12|^2 against c(d),
    and E rho_11^2 against the overlap moment (d+1)/(d(d^2+1)).
    """
    samples = np.asarray(samples)
    if samples.ndim != 3 or len(samples) < 100:
        raise ValueError("covariance check needs at least 100 samples")
    d = samples.shape[-1]
    c = float(measure.covariance_constant(d))
    r11 = samples[:, 0, 0].real
    off_sq = np.abs(samples[:, 0, 1]) ** 2
    return [
        _variance_report("var_rho11", r11, c * (1.0 - 1.0 / d), threshold),
        _mean_report("mean_abs_rho12_sq", off_sq, c, threshold),
        _mean_report("overlap_sq_e1", r11**2, float(measure.overlap_sq_moment(d)), threshold),
    ]


def mc_purity_report(samples, threshold: float = Z_THRESHOLD_DEFAULT) -> MonteCarloReport:
    """Mean purity of a density-matrix sample against 2d/(d^2+1)."""
    samples = np.asarray(samples)
    d = samples.shape[-1]
    pur = np.einsum("nij,nji->n", samples, samples).real
    return _mean_report("mean_purity", pur, float(measure.expected_purity(d)), threshold)


def unitary_invariance_test(sampler: Callable[[int, np.random.Generator], np.ndarray],
                            u0, n: int, rng=None,
                            alpha: float = KS_ALPHA_DEFAULT) -> KsReport:
    """Two-sample KS test of <e1|rho|e1> against <e1|U0 rho U0^dag|e1>.

    `sampler(size, generator)` must return a stack of density matrices.
    Both sides use independent draws, so the null is exact for an
    invariant ensemble.
    """
    u0 = check_unitary(u0)
    if n < 1000:
        raise ValueError("invariance test needs n >= 1000")
    g = as_generator(rng)
    plain = sampler(n, g)[:, 0, 0].real
    row = u0[0]
    rotated = np.einsum("a,nab,b->n", row, sampler(n, g), row.conj()).real
    return ks_two_sample(plain, rotated, alpha=alpha)


def partial_transpose_right(rho, d_left: int, d_right: int) -> np.ndarray:
    """Transpose the right tensor factor of a bipartite operator."""
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[-1]
    if d_left * d_right != d:
        raise ValueError(f"dimension {d} does not factor as {d_left} x {d_right}")
    blocks = rho.reshape(rho.shape[:-2] + (d_left, d_right, d_left, d_right))
    return np.einsum("...iljk->...ikjl", blocks).reshape(rho.shape)


def ppt_is_entangled(rho, d_left: int, d_right: int,
                     tol: float = PPT_EIGENVALUE_TOL):
    """Entanglement verdict by the positive-partial-transpose criterion.

    True when the partial transpose has an eigenvalue below ``-tol``
    (eigenvalues in [-tol, 0) are treated as numerical zeros so solver
    noise cannot flip a verdict).  Decisive for 2x2 and 2x3 systems;
    for larger systems True is still conclusive but False is not.
    """
    pt = partial_transpose_right(rho, d_left, d_right)
    smallest = np.linalg.eigvalsh(pt)[..., 0]
    verdict = smallest < -tol
    return bool(verdict) if np.ndim(verdict) == 0 else verdict


def entangled_fraction(d_left: int, d_right: int, n: int, rng=None,
                       threshold: float = Z_THRESHOLD_DEFAULT) -> MonteCarloReport:
    """Fraction of uniform two-qubit states that are entangled.

    One-sided report against the majority boundary 0.5 with a binomial
    standard error; passes when the fraction exceeds 0.5 by at least
    `threshold` standard errors.
    """
    if (d_left, d_right) != (2, 2):
        raise ValueError("entangled fraction is implemented for 2 x 2 systems")
    if n < 1000:
        raise ValueError("need n >= 1000 for a meaningful fraction")
    samples = sample_density_hs(d_left * d_right, rng, size=n)
    flags = ppt_is_entangled(samples, d_left, d_right)
    p_hat = float(np.mean(flags))
    se = math.sqrt(max(p_hat * (1.0 - p_hat), 1e-12) / n)
    return make_mc_report("entangled_fraction_2x2", n, p_hat, se, 0.5,
                          threshold, one_sided=True)


# --------------------------------------------------------------------------
# Full verification suite
# --------------------------------------------------------------------------

VERIFY_BLOCKS = ("mean", "covariance", "overlap", "purity", "eigdist",
                 "equivalence", "invariance", "gue", "rejection", "entanglement")


def default_density_samplers() -> dict[str, Callable]:
    """Name -> ``sampler(d, rng, size)`` map for the ensemble constructions."""
    return {
        "hs": sample_density_hs,
        "purified": sample_density_purified,
        "spectral": sample_density_spectral,
        "bloch": lambda d, rng, size: sample_density_bloch(rng, size),
    }


@dataclass(frozen=True)
class SuiteResult:
    """One row of the verification table."""

    block: str
    dim: int
    label: str
    report: MonteCarloReport | KsReport

    @property
    def passed(self) -> bool:
        return self.report.passed


def _lambda_max_and_purity(samples) -> tuple[np.ndarray, np.ndarray]:
    lam = np.linalg.eigvalsh(samples)
    pur = np.einsum("nij,nji->n", samples, samples).real
    return lam[:, -1], pur


def _worst(reports: Sequence[MonteCarloReport]) -> MonteCarloReport:
    return max(reports, key=lambda r: abs(r.z_score))


def run_verification_suite(dims: Iterable[int] = (2, 3), n: int = 100_000,
                           seed: int = DEFAULT_SEED,
                           alpha: float = KS_ALPHA_DEFAULT,
                           z_threshold: float = Z_THRESHOLD_DEFAULT,
                           only: Iterable[str] | None = None,
                           density_samplers: Mapping[str, Callable] | None = None,
                           ) -> list[SuiteResult]:
    """Run every statistical check of the ensemble and collect the results.

    Blocks ``mean``/``covariance``/``overlap``/``purity`` run at each
    requested dimension; ``eigdist``/``invariance``/``rejection`` are
    d = 2 checks, ``equivalence`` runs at d in {2, 3}, and ``gue`` (d in
    {2, 4, 8}) and ``entanglement`` (2 x 2) have fixed dimensions.  Each
    block owns a deterministic substream of `seed`, so filtering with
    `only` does not change the numbers of the blocks that do run.

    `density_samplers` replaces the construction map (test hook for
    negative controls).
    """
    dims = sorted(set(int(d) for d in dims))
    if any(d < 2 for d in dims):
        raise ValueError("verification dimensions must be >= 2")
    wanted = set(VERIFY_BLOCKS) if only is None else {str(b) for b in only}
    unknown = wanted - set(VERIFY_BLOCKS)
    if unknown:
        raise ValueError(f"unknown verification blocks: {sorted(unknown)}")
    samplers = dict(default_density_samplers())
    if density_samplers:
        samplers.update(density_samplers)

    def stream(block: str, d: int) -> RngStream:
        return RngStream(seed, VERIFY_BLOCKS.index(block) * 64 + d)

    results: list[SuiteResult] = []

    if "mean" in wanted:
        for d in dims:
            samples = samplers["hs"](d, stream("mean", d), n)
            worst = _worst(mc_mean_reports(samples, z_threshold))
            results.append(SuiteResult("mean", d, f"mean vs I/{d}, worst entry ({worst.statistic})", worst))

    if "covariance" in wanted:
        for d in dims:
            samples = samplers["hs"](d, stream("covariance", d), n)
            var_r, off_r, _ = mc_covariance_check(samples, z_threshold)
            results.append(SuiteResult("covariance", d, "Var(rho_11) vs c(d)(1-1/d)", var_r))
            results.append(SuiteResult("covariance", d, "E|rho_12|^2 vs c(d)", off_r))

    if "overlap" in wanted:
        for d in dims:
            samples = samplers["hs"](d, stream("overlap", d), n)
            overlap = mc_covariance_check(samples, z_threshold)[2]
            results.append(SuiteResult("overlap", d, "E<e1|rho|e1>^2 vs (d+1)/(d(d^2+1))", overlap))

    if "purity" in wanted:
        for d in dims:
            samples = samplers["hs"](d, stream("purity", d), n)
            results.append(SuiteResult("purity", d, "E tr(rho^2) vs 2d/(d^2+1)",
                                       mc_purity_report(samples, z_threshold)))

    if "eigdist" in wanted and 2 in dims:
        n_eig = min(n, 10_000)
        samples = samplers["hs"](2, stream("eigdist", 2), n_eig)
        lam_max, _ = _lambda_max_and_purity(samples)
        ks = ks_one_sample(lam_max, measure.lambda_max_cdf_d2, alpha=alpha)
        results.append(SuiteResult("eigdist", 2, "lambda_max KS vs 8(x-1/2)^3 CDF", ks))

    if "equivalence" in wanted:
        for d in (d for d in dims if d in (2, 3)):
            names = ["hs", "purified", "spectral"] + (["bloch"] if d == 2 else [])
            rng = stream("equivalence", d)
            stats_by_name = {}
            for name in names:
                stats_by_name[name] = _lambda_max_and_purity(samplers[name](d, rng, n))
            for i, a in enumerate(names):
                for b in names[i + 1:]:
                    ks_lam = ks_two_sample(stats_by_name[a][0], stats_by_name[b][0], alpha=alpha)
                    ks_pur = ks_two_sample(stats_by_name[a][1], stats_by_name[b][1], alpha=alpha)
                    results.append(SuiteResult("equivalence", d, f"{a} vs {b}: lambda_max KS", ks_lam))
                    results.append(SuiteResult("equivalence", d, f"{a} vs {b}: purity KS", ks_pur))

    if "invariance" in wanted and 2 in dims:
        rng = stream("invariance", 2)
        ks = unitary_invariance_test(lambda size, g: samplers["hs"](2, g, size),
                                     HADAMARD, n, rng, alpha=alpha)
        results.append(SuiteResult("invariance", 2, "Hadamard conjugation KS on <e1|rho|e1>", ks))

    if "gue" in wanted:
        for d in (2, 4, 8):
            n_gue = max(1000, min(n, 50_000))
            x = sample_gue(d, stream("gue", d), size=n_gue)
            tr_sq = np.einsum("nij,nji->n", x, x).real
            results.append(SuiteResult("gue", d, "E tr(X^2) vs d",
                                       _mean_report("gue_trace_square", tr_sq, float(d), z_threshold)))

    if "rejection" in wanted:
        proposals = max(10_000, min(n, 200_000))
        accepted, proposed = rejection_acceptance_probe(2, proposals, stream("rejection", 2))
        rate = accepted / proposed
        se = math.sqrt(max(rate * (1.0 - rate), 1e-12) / proposed)
        results.append(SuiteResult("rejection", 2, "acceptance rate vs 1/3",
                                   make_mc_report("rejection_acceptance_d2", proposed, rate,
                                                  se, 1.0 / 3.0, z_threshold)))

    if "entanglement" in wanted:
        n_ent = max(1000, min(n, 10_000))
        results.append(SuiteResult("entanglement", 4, "entangled fraction > 1/2 (PPT, 2x2)",
                                   entangled_fraction(2, 2, n_ent, stream("entanglement", 4),
                                                      z_threshold)))

    return results
