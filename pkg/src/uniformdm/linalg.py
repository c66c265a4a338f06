"""Dense complex linear algebra for small Hermitian matrices.

All matrices are numpy arrays of shape ``(..., d, d)``; leading axes are
batch axes and every function broadcasts over them.  Bipartite systems use
row-major composite indices, ``(i, k) -> i * dB + k``, i.e. the left factor
is the slow index.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

# Tolerances for double-precision arithmetic at d <= 64.
HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-12
PSD_ATOL = 1e-10
UNITARY_ATOL = 1e-10
SPECTRUM_ATOL = 1e-12

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


class EigenDecomposition(NamedTuple):
    """Eigenvalues in nonincreasing order plus the matching eigenbasis.

    ``vectors[..., :, k]`` is the unit eigenvector belonging to
    ``values[..., k]``; the columns form an orthonormal basis.
    """

    values: np.ndarray
    vectors: np.ndarray


def _as_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def check_hermitian(a, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Validate entrywise Hermitian symmetry and return the input as an array.

    Raises ValueError if any entry differs from the conjugate of its mirror
    by more than `atol`, or if the matrix is not square/finite.
    """
    a = _as_square(a)
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise ValueError("matrix has non-finite entries")
    dev = np.max(np.abs(a - np.conj(np.swapaxes(a, -1, -2))))
    if dev > atol:
        raise ValueError(f"matrix is not Hermitian: max |A - A^dag| = {dev:.3e} > {atol:.0e}")
    return a


def check_unitary(u, atol: float = UNITARY_ATOL) -> np.ndarray:
    """Validate U^dag U = I within `atol` and return the input as an array."""
    u = _as_square(u)
    d = u.shape[-1]
    gram = np.swapaxes(u, -1, -2).conj() @ u
    dev = np.max(np.abs(gram - np.eye(d)))
    if dev > atol:
        raise ValueError(f"matrix is not unitary: max |U^dag U - I| = {dev:.3e} > {atol:.0e}")
    return u


def check_density_matrix(rho, trace_atol: float = TRACE_ATOL,
                         psd_atol: float = PSD_ATOL) -> np.ndarray:
    """Validate the density-matrix invariants: Hermitian, unit trace, PSD.

    The positivity check allows eigenvalues down to ``-psd_atol`` to absorb
    eigensolver noise.
    """
    rho = check_hermitian(rho)
    traces = np.einsum("...ii->...", rho)
    dev = np.max(np.abs(traces - 1.0))
    if dev > trace_atol:
        raise ValueError(f"trace deviates from 1 by {dev:.3e} > {trace_atol:.0e}")
    lo = float(np.min(np.linalg.eigvalsh(rho)))
    if lo < -psd_atol:
        raise ValueError(f"matrix is not positive semidefinite: min eigenvalue {lo:.3e}")
    return rho


def check_spectrum(lam, atol: float = SPECTRUM_ATOL) -> np.ndarray:
    """Validate a spectrum vector: entries in [0, 1], unit sum, nonincreasing."""
    lam = np.asarray(lam, dtype=float)
    if lam.ndim == 0:
        raise ValueError("spectrum must be a vector")
    if np.any(lam < -atol) or np.any(lam > 1.0 + atol):
        raise ValueError("spectrum entries must lie in [0, 1]")
    dev = np.max(np.abs(lam.sum(axis=-1) - 1.0))
    if dev > atol:
        raise ValueError(f"spectrum sum deviates from 1 by {dev:.3e}")
    if np.any(np.diff(lam, axis=-1) > atol):
        raise ValueError("spectrum must be sorted in nonincreasing order")
    return lam


def hs_inner(a, b):
    """Hilbert-Schmidt inner product tr(AB) of two Hermitian matrices.

    Real-valued and symmetric for Hermitian inputs.  Broadcasts over batch
    axes; returns a float for single matrices.
    """
    a = _as_square(a)
    b = _as_square(b)
    if a.shape[-1] != b.shape[-1]:
        raise ValueError(f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}")
    out = np.einsum("...ij,...ji->...", a, b).real
    return float(out) if out.ndim == 0 else out


def hermitian_eigen(h, atol: float = HERMITIAN_ATOL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues nonincreasing.

    Satisfies ``compose_from_spectrum(values, vectors) == h`` to within
    1e-10 relative Frobenius error.  Raises ValueError for inputs that are
    not Hermitian within `atol` and LinAlgError if the underlying solver
    fails to converge.
    """
    h = check_hermitian(h, atol=atol)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - pathological input
        raise np.linalg.LinAlgError(f"Hermitian eigensolver did not converge: {exc}") from exc
    # eigh returns ascending order; the contract wants nonincreasing.
    return EigenDecomposition(w[..., ::-1].copy(), v[..., :, ::-1].copy())


def compose_from_spectrum(values, vectors) -> np.ndarray:
    """Assemble sum_k values[k] |v_k><v_k| from a spectrum and a unitary.

    `vectors` holds the (orthonormal) basis in its columns; the trace of the
    result equals ``sum(values)``.
    """
    if np.iscomplexobj(values):
        raise TypeError("spectrum must be real-valued")
    values = np.asarray(values, dtype=float)
    vectors = check_unitary(vectors)
    if values.shape[-1] != vectors.shape[-1]:
        raise ValueError("spectrum length does not match basis dimension")
    return np.einsum("...k,...ik,...jk->...ij", values, vectors, vectors.conj())


def partial_trace_right(rho, d_left: int, d_right: int) -> np.ndarray:
    """Trace out the right tensor factor of a (d_left*d_right)-dim operator.

    ``out[i, j] = sum_k rho[(i, k), (j, k)]`` with the composite row-major
    index convention.  Preserves trace and positivity.
    """
    rho = _as_square(rho)
    d = rho.shape[-1]
    if d_left < 1 or d_right < 1 or d_left * d_right != d:
        raise ValueError(f"dimension {d} does not factor as {d_left} x {d_right}")
    blocks = rho.reshape(rho.shape[:-2] + (d_left, d_right, d_left, d_right))
    return np.einsum("...ikjk->...ij", blocks)


def project_traceless(a) -> np.ndarray:
    """Orthogonal projection onto traceless matrices: A - (tr A / d) I.

    Idempotent, and the result is HS-orthogonal to the identity.
    """
    a = _as_square(a)
    d = a.shape[-1]
    tr = np.einsum("...ii->...", a) / d
    return a - tr[..., None, None] * np.eye(d)


def purity(rho):
    """tr(rho^2) of a density matrix; lies in [1/d, 1].

    Equals the sum of squared eigenvalues.  Broadcasts over batch axes.
    """
    rho = _as_square(rho)
    out = np.einsum("...ij,...ji->...", rho, rho).real
    return float(out) if out.ndim == 0 else out
