"""Seedable ensemble samplers.

Three independent constructions of the uniform (Hilbert-Schmidt) density
matrix ensemble — Ginibre normalization, purification of a random pure
state, and spectrum-rejection combined with a Haar eigenbasis — plus the
supporting Ginibre / GUE / Haar-unitary / pure-state samplers and an exact
d = 2 Bloch-ball oracle.

Every sampler takes ``rng`` (an :class:`RngStream`, an integer seed, a
``numpy.random.Generator``, or None for a fresh OS-seeded stream) and an
optional ``size``: None returns a single draw, an integer returns a stacked
array with the draw index first.  For a fixed ``(seed, stream_index)`` the
output is bit-reproducible.
"""

from __future__ import annotations

import math

import numpy as np

from .linalg import SIGMA_X, SIGMA_Y, SIGMA_Z, compose_from_spectrum
from .measure import vandermonde_sq

_MASK64 = (1 << 64) - 1

# Rejection sampling of the joint eigenvalue law: the Vandermonde factor is
# bounded by 1 on the simplex, so plain rejection from the flat Dirichlet
# proposal is correct.  The acceptance rate is (d-1)!/normalization, which
# collapses rapidly with d; the cap keeps pathological requests finite.
REJECTION_MAX_DIM = 6
REJECTION_ATTEMPT_CAP_PER_SAMPLE = 10**7

_PAULI_STACK = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])


class RngStream:
    """Deterministic, splittable random stream keyed by (seed, stream_index).

    Thin wrapper over numpy's counter-based Philox generator with the
    128-bit key ``stream_index * 2**64 + (seed mod 2**64)``.  Distinct
    stream indices give statistically independent substreams, so parallel
    workers can each own an index and the merged output is independent of
    how work was scheduled.
    """

    def __init__(self, seed: int, stream_index: int = 0):
        if stream_index < 0:
            raise ValueError("stream_index must be nonnegative")
        self.seed = int(seed)
        self.stream_index = int(stream_index)
        key = (self.stream_index << 64) | (self.seed & _MASK64)
        self._generator = np.random.Generator(np.random.Philox(key=key))

    @property
    def generator(self) -> np.random.Generator:
        return self._generator

    def substream(self, stream_index: int) -> "RngStream":
        """Independent stream with the same seed and a new index."""
        return RngStream(self.seed, stream_index)

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_index={self.stream_index})"


def as_generator(rng) -> np.random.Generator:
    """Coerce an RngStream / seed / Generator / None to a numpy Generator."""
    if rng is None:
        return RngStream(np.random.SeedSequence().entropy & _MASK64).generator
    if isinstance(rng, RngStream):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RngStream(int(rng)).generator
    raise TypeError(f"cannot interpret {type(rng).__name__} as a random stream")


def _batch(size) -> tuple:
    """Leading batch shape for a ``size`` argument (None means scalar draw)."""
    return () if size is None else (int(size),)


def sample_ginibre(d: int, rng=None, size=None) -> np.ndarray:
    """Matrix of i.i.d. standard complex Gaussian entries (E|entry|^2 = 1).

    Real and imaginary parts are independent N(0, 1/2).
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    g = as_generator(rng)
    prefix = _batch(size)
    re = g.standard_normal(prefix + (d, d))
    im = g.standard_normal(prefix + (d, d))
    return (re + 1j * im) * math.sqrt(0.5)


def sample_gue(d: int, rng=None, size=None) -> np.ndarray:
    """Hermitian GUE matrix with off-diagonal part variances 1/(2d).

    Off-diagonal real and imaginary parts are independent N(0, 1/(2d)),
    diagonal entries N(0, 1/d); the joint density is proportional to
    exp(-d tr(X^2) / 2) and E tr(X^2) = d.  Hermitian exactly, by
    construction.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    g = as_generator(rng)
    prefix = _batch(size)
    re = g.standard_normal(prefix + (d, d))
    im = g.standard_normal(prefix + (d, d))
    m = (re + 1j * im) / math.sqrt(d)
    return 0.5 * (m + np.conj(np.swapaxes(m, -1, -2)))


def sample_haar_unitary(d: int, rng=None, size=None) -> np.ndarray:
    """Haar-distributed unitary via phase-corrected QR of a Ginibre matrix.

    Each column of Q is rescaled by the phase of the matching diagonal entry
    of R, which makes the factorization unique (R diagonal real positive)
    and the resulting Q exactly Haar.
    """
    z = sample_ginibre(d, rng, size=1 if size is None else size)
    q, r = np.linalg.qr(z)
    diag = np.einsum("...ii->...i", r)
    bad = np.abs(diag) < 1e-150
    if np.any(bad):  # pragma: no cover - probability zero
        rows = np.unique(np.nonzero(bad)[0])
        z[rows] = sample_ginibre(d, rng, size=len(rows))
        q, r = np.linalg.qr(z)
        diag = np.einsum("...ii->...i", r)
        if np.any(np.abs(diag) < 1e-150):
            raise np.linalg.LinAlgError("singular Ginibre draw after resampling")
    q = q * (diag / np.abs(diag))[..., None, :]
    return q[0] if size is None else q


def sample_pure_uniform(d: int, rng=None, size=None) -> np.ndarray:
    """Uniformly random unit vector: normalized i.i.d. complex Gaussians."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    g = as_generator(rng)
    prefix = _batch(size)
    z = g.standard_normal(prefix + (d,)) + 1j * g.standard_normal(prefix + (d,))
    norms = np.linalg.norm(z, axis=-1)
    while np.any(norms < 1e-150):  # pragma: no cover - probability zero
        z = g.standard_normal(prefix + (d,)) + 1j * g.standard_normal(prefix + (d,))
        norms = np.linalg.norm(z, axis=-1)
    return z / norms[..., None]


def _trivial_density(size):
    return np.ones(_batch(size) + (1, 1), dtype=complex)


def _hermitianize(m: np.ndarray) -> np.ndarray:
    # (M + M^dag)/2 is Hermitian to the last bit; BLAS fused multiply-adds
    # otherwise leave ~1e-17 residue on the diagonal imaginary parts, which
    # is systematic noise, not a sample fluctuation.
    return 0.5 * (m + np.conj(np.swapaxes(m, -1, -2)))


def sample_density_hs(d: int, rng=None, size=None) -> np.ndarray:
    """Uniform (Hilbert-Schmidt) density matrix via Ginibre normalization.

    Draws a Ginibre matrix A and returns A A^dag / tr(A A^dag); the primary
    construction of the ensemble.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    if d == 1:
        return _trivial_density(size)
    a = sample_ginibre(d, rng, size=size)
    m = _hermitianize(a @ np.conj(np.swapaxes(a, -1, -2)))
    tr = np.einsum("...ii->...", m).real
    return m / tr[..., None, None]


def sample_density_purified(d: int, rng=None, size=None) -> np.ndarray:
    """Uniform density matrix as the reduced state of a random pure state.

    Draws a uniform unit vector on a d^2-dimensional doubled system,
    reshapes it to d x d with the row-major composite index (left factor
    slow), and traces out the right factor.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    if d == 1:
        return _trivial_density(size)
    psi = sample_pure_uniform(d * d, rng, size=size)
    v = psi.reshape(psi.shape[:-1] + (d, d))
    # V V^dag == partial_trace_right(|psi><psi|, d, d) under the index
    # convention above.
    return _hermitianize(v @ np.conj(np.swapaxes(v, -1, -2)))


def _propose_spectra(d: int, count: int, g: np.random.Generator):
    """Flat-Dirichlet proposals with their Vandermonde acceptance weights."""
    e = g.standard_exponential((count, d))
    lam = e / e.sum(axis=-1, keepdims=True)
    return lam, vandermonde_sq(lam)


def sample_spectrum_rejection(d: int, rng=None, size=None) -> np.ndarray:
    """Eigenvalue vector of a uniform state, by rejection sampling.

    Proposes flat-Dirichlet points of the simplex and accepts with
    probability prod_{i<j} (lam_i - lam_j)^2 (at most 1, since every gap is
    at most 1); the result is sorted nonincreasing.  Supported for
    2 <= d <= 6, with a cap of 10^7 attempts per requested sample; the
    acceptance rate falls off so fast with d that the cap binds in practice
    from d = 4 on.
    """
    if not 2 <= d <= REJECTION_MAX_DIM:
        raise ValueError(f"rejection sampler supports 2 <= d <= {REJECTION_MAX_DIM}")
    n = 1 if size is None else int(size)
    g = as_generator(rng)
    cap = REJECTION_ATTEMPT_CAP_PER_SAMPLE * n
    out = np.empty((n, d))
    got = 0
    attempts = 0
    batch = 1 << 14
    while got < n:
        if attempts >= cap:
            raise RuntimeError(
                f"rejection sampler exceeded {attempts} attempts for {n} samples at d={d}"
            )
        batch = min(batch, cap - attempts)
        lam, weight = _propose_spectra(d, batch, g)
        keep = g.random(batch) < weight
        accepted = lam[keep]
        take = min(len(accepted), n - got)
        out[got : got + take] = accepted[:take]
        got += take
        attempts += batch
        # Aim the next proposal batch at the remaining deficit.
        rate = max(got, 1) / attempts
        batch = int(np.clip(1.1 * (n - got) / rate, 1 << 14, 1 << 21))
    out = np.sort(out, axis=-1)[:, ::-1]
    return out[0] if size is None else out


def rejection_acceptance_probe(d: int, n_proposals: int, rng=None) -> tuple[int, int]:
    """Count acceptances among a fixed number of rejection proposals.

    Returns ``(accepted, proposed)``; used to calibrate the sampler against
    the known mean acceptance probability (1/3 at d = 2).
    """
    if not 2 <= d <= REJECTION_MAX_DIM:
        raise ValueError(f"rejection sampler supports 2 <= d <= {REJECTION_MAX_DIM}")
    g = as_generator(rng)
    accepted = 0
    done = 0
    while done < n_proposals:
        batch = min(1 << 20, n_proposals - done)
        _, weight = _propose_spectra(d, batch, g)
        accepted += int(np.count_nonzero(g.random(batch) < weight))
        done += batch
    return accepted, n_proposals


def sample_density_spectral(d: int, rng=None, size=None) -> np.ndarray:
    """Uniform density matrix from its eigenvalue law plus a Haar eigenbasis.

    Combines :func:`sample_spectrum_rejection` with
    :func:`sample_haar_unitary`; same practical dimension cap as the
    rejection sampler.
    """
    if d == 1:
        return _trivial_density(size)
    g = as_generator(rng)
    lam = sample_spectrum_rejection(d, g, size=size)
    u = sample_haar_unitary(d, g, size=size)
    return _hermitianize(compose_from_spectrum(lam, u))


def sample_density_bloch(rng=None, size=None) -> np.ndarray:
    """Exact d = 2 oracle: uniform point of the Bloch ball of radius 1/2.

    Draws a uniform point a of the closed ball (rejection from the bounding
    cube) and returns I/2 + a . (sigma_x, sigma_y, sigma_z).  The qubit
    state space is this ball under an invertible affine map of the unit-
    trace hyperplane, so the output realizes the uniform ensemble exactly;
    the eigenvalues are 1/2 +- |a|.
    """
    g = as_generator(rng)
    n = 1 if size is None else int(size)
    points = np.empty((n, 3))
    got = 0
    while got < n:
        cand = g.uniform(-0.5, 0.5, size=(max(2 * (n - got), 64), 3))
        cand = cand[np.einsum("ij,ij->i", cand, cand) <= 0.25]
        take = min(len(cand), n - got)
        points[got : got + take] = cand[:take]
        got += take
    rho = 0.5 * np.eye(2, dtype=complex) + np.einsum("nk,kij->nij", points, _PAULI_STACK)
    return rho[0] if size is None else rho


def sample_density_fixed_basis(d: int, rng=None, size=None) -> np.ndarray:
    """Deliberately non-invariant sampler: flat spectra in a fixed basis.

    Returns diagonal density matrices whose sorted spectra are flat-
    Dirichlet distributed.  Valid density matrices, but the eigenbasis
    never rotates, so unitary-invariance tests must reject it; negative
    control only.
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    g = as_generator(rng)
    prefix = _batch(size)
    e = g.standard_exponential(prefix + (d,))
    lam = e / e.sum(axis=-1, keepdims=True)
    lam = np.sort(lam, axis=-1)[..., ::-1]
    rho = np.zeros(prefix + (d, d), dtype=complex)
    idx = np.arange(d)
    rho[..., idx, idx] = lam
    return rho
