"""Closed-form properties of the Hilbert-Schmidt uniform density-matrix
ensemble: eigenvalue densities, normalization constants, and moments.

Exact rational values are returned as ``fractions.Fraction`` (or ``int``)
so that algebraic identities between them hold exactly; call ``float()``
where a numeric target is needed.

Convention: ``eig_density`` is the density of the *unordered* eigenvalue
vector with respect to Lebesgue measure d(lam_1)...d(lam_{d-1}) on the unit
simplex.  Under this convention the closed-form normalization constant
integrates the Vandermonde factor to exactly 1 (the ordered/induced-
Euclidean alternative would rescale it by d! * sqrt(d)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

SIMPLEX_ATOL = 1e-9


def vandermonde_sq(lam):
    """Squared Vandermonde factor prod_{i<j} (lam_i - lam_j)^2.

    Permutation-symmetric, and zero exactly when two entries coincide.
    Accepts shape ``(..., d)`` with d >= 2 and broadcasts over batch axes.
    """
    lam = np.asarray(lam, dtype=float)
    d = lam.shape[-1]
    if d < 2:
        raise ValueError("need at least two eigenvalues")
    out = np.ones(lam.shape[:-1])
    for i in range(d):
        for j in range(i + 1, d):
            out = out * (lam[..., i] - lam[..., j]) ** 2
    return float(out) if out.ndim == 0 else out


def eig_density_normalization(d: int) -> int:
    """Normalization constant (d^2-1)! / prod_{k=1..d} k!(k-1)!, exactly.

    Evaluated in exact integer arithmetic; the factorials overflow 64-bit
    integers already at d = 5.  Supported for 2 <= d <= 8.
    """
    if not 2 <= d <= 8:
        raise ValueError("exact normalization constant supported for 2 <= d <= 8")
    n = Fraction(math.factorial(d * d - 1))
    for k in range(1, d + 1):
        n /= math.factorial(k) * math.factorial(k - 1)
    assert n.denominator == 1
    return int(n)


def eig_density(lam, atol: float = SIMPLEX_ATOL):
    """Joint density of the unordered eigenvalue vector of a uniform state.

    Equals ``normalization * vandermonde_sq(lam)`` and integrates to 1 over
    the probability simplex (with respect to the Lebesgue measure on the
    first d-1 coordinates).  Entries may lie anywhere on the closed simplex;
    points outside it raise ValueError.
    """
    lam = np.asarray(lam, dtype=float)
    d = lam.shape[-1]
    if np.any(lam < -atol) or np.max(np.abs(lam.sum(axis=-1) - 1.0)) > atol:
        raise ValueError("eigenvalue vector lies outside the probability simplex")
    return float(eig_density_normalization(d)) * vandermonde_sq(lam)


def mean_density(d: int) -> np.ndarray:
    """Expected density matrix of the uniform ensemble: I/d."""
    if d < 1:
        raise ValueError("dimension must be positive")
    return np.eye(d, dtype=complex) / d


def covariance_constant(d: int) -> Fraction:
    """Scalar c(d) = 1 / (d (d^2 + 1)) multiplying the traceless projector.

    The ensemble covariance operator is c(d) times the HS-orthogonal
    projection onto traceless Hermitian matrices.
    """
    if d < 2:
        raise ValueError("covariance constant defined for d >= 2")
    return Fraction(1, d * (d * d + 1))


def overlap_sq_moment(d: int) -> Fraction:
    """Second moment E<psi|rho|psi>^2 = (d+1) / (d (d^2+1)) for any unit psi."""
    if d < 2:
        raise ValueError("overlap moment defined for d >= 2")
    return Fraction(d + 1, d * (d * d + 1))


def covariance_from_overlap(d: int, m):
    """Map the overlap second moment m to the covariance constant.

    Returns ``(d/(d-1)) * m - 1/(d(d-1))``; exact when m is a Fraction.
    """
    if d < 2:
        raise ValueError("defined for d >= 2")
    return Fraction(d, d - 1) * m - Fraction(1, d * (d - 1))


def expected_purity(d: int) -> Fraction:
    """Mean purity E tr(rho^2) = 2d / (d^2 + 1) of the uniform ensemble.

    Decomposes as 1/d (purity of the mean) plus (d^2-1) c(d) (total
    variance); approaches 2/d from below as d grows.
    """
    if d < 2:
        raise ValueError("expected purity defined for d >= 2")
    return Fraction(2 * d, d * d + 1)


@dataclass(frozen=True)
class EnsembleMoments:
    """Closed-form first and second moments of the uniform ensemble at one d."""

    d: int
    mean_operator: np.ndarray
    c: Fraction
    overlap_sq: Fraction
    expected_purity: Fraction

    def __post_init__(self):
        if not (self.c > 0):
            raise ValueError("covariance constant must be positive")
        if not Fraction(1, self.d**2) < self.overlap_sq < 1:
            raise ValueError("overlap moment out of range")
        if not Fraction(1, self.d) < self.expected_purity <= 1:
            raise ValueError("expected purity out of range")
        if covariance_from_overlap(self.d, self.overlap_sq) != self.c:
            raise ValueError("covariance constant inconsistent with overlap moment")


def ensemble_moments(d: int) -> EnsembleMoments:
    """Bundle of all closed-form moment targets for dimension d."""
    return EnsembleMoments(
        d=d,
        mean_operator=mean_density(d),
        c=covariance_constant(d),
        overlap_sq=overlap_sq_moment(d),
        expected_purity=expected_purity(d),
    )


def gue_joint_density_unnormalized(mu, d: int | None = None):
    """Unnormalized joint eigenvalue density of the scaled-GUE convention.

    ``prod_k exp(-(d/2) mu_k^2) * prod_{i<j} (mu_i - mu_j)^2``; diagnostic
    use only (likelihood checks of the GUE sampler).
    """
    mu = np.asarray(mu, dtype=float)
    if d is None:
        d = mu.shape[-1]
    gauss = np.exp(-0.5 * d * np.sum(mu * mu, axis=-1))
    out = gauss * vandermonde_sq(mu)
    return float(out) if np.ndim(out) == 0 else out


def lambda_max_pdf_d2(x):
    """Density 24 (x - 1/2)^2 of the top eigenvalue for d = 2, on [1/2, 1]."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.5) or np.any(x > 1.0):
        raise ValueError("top eigenvalue of a qubit state lies in [1/2, 1]")
    out = 24.0 * (x - 0.5) ** 2
    return float(out) if out.ndim == 0 else out


def lambda_max_cdf_d2(x):
    """CDF 8 (x - 1/2)^3 of the d = 2 top eigenvalue, clamped outside [1/2, 1].

    Monotone onto [0, 1]; suitable as a Kolmogorov-Smirnov target.
    """
    x = np.clip(np.asarray(x, dtype=float), 0.5, 1.0)
    out = 8.0 * (x - 0.5) ** 3
    return float(out) if out.ndim == 0 else out


def eig_density_simplex_integral(d: int, step: float = 1.0 / 400.0) -> float:
    """Numerically integrate ``eig_density`` over the probability simplex.

    Midpoint rule for d = 2; centroid rule on a uniform triangular grid for
    d = 3.  The integrand is a smooth polynomial, so the error is O(step^2);
    the result should equal 1.
    """
    n = round(1.0 / step)
    h = 1.0 / n
    if d == 2:
        x = (np.arange(n) + 0.5) * h
        lam = np.stack([x, 1.0 - x], axis=-1)
        return float(np.sum(eig_density(lam)) * h)
    if d == 3:
        i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        # Each grid cell splits into a lower and an upper triangle of area
        # h^2/2; evaluate at the centroids.
        lower = i + j <= n - 1
        upper = i + j <= n - 2
        x = np.concatenate([(i[lower] + 1.0 / 3.0) * h, (i[upper] + 2.0 / 3.0) * h])
        y = np.concatenate([(j[lower] + 1.0 / 3.0) * h, (j[upper] + 2.0 / 3.0) * h])
        lam = np.stack([x, y, 1.0 - x - y], axis=-1)
        return float(np.sum(eig_density(lam)) * (h * h / 2.0))
    raise ValueError("simplex quadrature implemented for d in {2, 3}")
