"""Exact finite-M computations: dense L-ensemble engine, circulant fast path,
correlations, and brute-force enumeration oracles.

The dense routes (LAPACK LU determinants, Hermitian eigensolver) and the
subset-enumeration sums exist to cross-check the circulant spectral formulas;
none of them share a code path with the spectral product.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .models import CirculantEnsemble, momentum_indices

#: eigenvalues of an admissible L-matrix may not drop below this
PSD_TOLERANCE = -1e-10
HERMITICITY_TOLERANCE = 1e-12
#: subset enumeration cap: 2^M principal minors
BRUTE_FORCE_MAX_SITES = 14
#: direct O(M^2) DFT below this size, FFT above
DFT_CROSSOVER = 256


class NotPositiveSemidefiniteError(ValueError):
    """An L-matrix eigenvalue fell below the PSD tolerance."""


@dataclass(frozen=True)
class LMatrix:
    """Hermitian positive semidefinite matrix defining an L-ensemble."""

    entries: np.ndarray
    circulant: bool = False


def validate_lmatrix(entries: np.ndarray, *, circulant: bool = False) -> LMatrix:
    """Check Hermiticity (1e-12), PSD (eigenvalues >= -1e-10), circulant shifts."""
    A = np.asarray(entries)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("L-matrix must be square")
    scale = max(float(np.max(np.abs(A))), 1.0)
    if np.max(np.abs(A - A.conj().T)) > HERMITICITY_TOLERANCE * scale:
        raise ValueError("L-matrix is not Hermitian to 1e-12")
    if circulant:
        row0 = A[0]
        for r in range(1, A.shape[0]):
            if np.max(np.abs(A[r] - np.roll(row0, r))) > HERMITICITY_TOLERANCE * scale:
                raise ValueError("circulant flag set but rows are not cyclic shifts")
    eigs = np.linalg.eigvalsh(A)
    if eigs.min() < PSD_TOLERANCE * scale:
        raise NotPositiveSemidefiniteError(
            f"L-matrix eigenvalue {eigs.min():g} below tolerance {PSD_TOLERANCE:g}")
    return LMatrix(entries=A, circulant=circulant)


def build_circulant(ens: CirculantEnsemble) -> LMatrix:
    """Assemble the chord-distance circulant L-matrix of a finite ensemble.

    Entry (j, l) is g((L/pi) sin(pi (j - l)/M)); g even makes the matrix real
    symmetric and every row a cyclic shift of row 0.
    """
    M = ens.M
    k = np.arange(M)
    row0 = np.asarray(ens.family.g((ens.L / np.pi) * np.sin(np.pi * k / M)), dtype=float)
    idx = (k[:, None] - k[None, :]) % M
    return validate_lmatrix(row0[idx], circulant=True)


@functools.lru_cache(maxsize=64)
def _cached_eigenvalues(ens: CirculantEnsemble) -> np.ndarray:
    M = ens.M
    k = np.arange(M)
    row0 = np.asarray(ens.family.g((ens.L / np.pi) * np.sin(np.pi * k / M)), dtype=float)
    if M < DFT_CROSSOVER:
        p = momentum_indices(M)
        lam = np.cos(2.0 * np.pi * np.outer(p, k) / M) @ row0
    else:
        # row0 is symmetric, so the DFT is real; order by momentum label
        lam_fft = np.fft.fft(row0)
        if np.max(np.abs(lam_fft.imag)) > 1e-10 * max(1.0, np.max(np.abs(lam_fft.real))):
            raise ValueError("circulant eigenvalues have a non-real component")
        lam = lam_fft.real[momentum_indices(M) % M]
    if lam.min() < PSD_TOLERANCE * max(1.0, float(np.max(np.abs(lam)))):
        raise NotPositiveSemidefiniteError(
            f"circulant eigenvalue {lam.min():g} below tolerance {PSD_TOLERANCE:g}")
    lam.flags.writeable = False
    return lam


def circulant_eigenvalues(ens: CirculantEnsemble) -> np.ndarray:
    """Eigenvalues lambda_p ordered by momentum label floor(-M/2)+1 .. floor(M/2).

    Computed as the discrete Fourier transform of row 0 (direct O(M^2) sum
    below M=256, FFT above). Real, and symmetric under p -> -p.
    """
    return _cached_eigenvalues(ens).copy()


def partition_function(ens: CirculantEnsemble) -> float:
    """Grand canonical normalizer as the spectral product of (1 + z lambda_p)."""
    lam = _cached_eigenvalues(ens)
    return float(np.prod(1.0 + ens.z * lam))


def log_partition_function(ens: CirculantEnsemble) -> float:
    """log of the spectral product, summed as log1p for large M stability."""
    lam = _cached_eigenvalues(ens)
    return float(np.sum(np.log1p(ens.z * lam)))


def _gray_code_subsets(M: int):
    for i in range(1 << M):
        mask = i ^ (i >> 1)
        yield [b for b in range(M) if (mask >> b) & 1]


def brute_force_partition(ens: CirculantEnsemble) -> float:
    """Subset-enumeration normalizer: sum over all 2^M principal minors.

    Oracle for the spectral product; subsets walk in Gray-code order and every
    minor is recomputed from scratch. Requires M <= 14.
    """
    if ens.M > BRUTE_FORCE_MAX_SITES:
        raise ValueError(f"brute force enumeration capped at M <= {BRUTE_FORCE_MAX_SITES}")
    L = build_circulant(ens).entries
    total = 0.0
    for idx in _gray_code_subsets(ens.M):
        if not idx:
            total += 1.0
            continue
        sub = L[np.ix_(idx, idx)]
        total += ens.z ** len(idx) * float(np.linalg.det(sub))
    return total


def macchi_kernel(L, z: float) -> np.ndarray:
    """Correlation kernel K = z L (I + z L)^{-1} of a Hermitian PSD L-matrix.

    Solved densely (LU); the result is Hermitian with eigenvalues in [0, 1),
    asserted on every call.
    """
    if z < 0:
        raise ValueError("z must be nonnegative")
    A = L.entries if isinstance(L, LMatrix) else validate_lmatrix(L).entries
    M = A.shape[0]
    # right division: K = (z L)(I + z L)^{-1} via the Hermitian transpose trick
    B = np.eye(M) + z * A
    K = np.linalg.solve(B.conj().T, (z * A).conj().T).conj().T
    eigs = np.linalg.eigvalsh(0.5 * (K + K.conj().T))
    if eigs.min() < -1e-10 or eigs.max() >= 1.0:
        raise ValueError(f"Macchi kernel eigenvalues outside [0, 1): "
                         f"[{eigs.min():g}, {eigs.max():g}]")
    return K


def kernel_finite(ens: CirculantEnsemble, x: int, y: int) -> complex:
    """Spectral-sum kernel entry K(x, y) for 1-indexed sites x, y.

    (z/M) sum_p e^{2 pi i (y-x) p/M} lambda_p / (1 + z lambda_p); depends only
    on (y - x) mod M, hence translation invariant by construction.
    """
    M = ens.M
    if not (1 <= x <= M and 1 <= y <= M):
        raise ValueError("sites must lie in 1..M")
    lam = _cached_eigenvalues(ens)
    p = momentum_indices(M)
    d = (y - x) % M
    phases = np.exp(2j * np.pi * d * p / M)
    return complex(ens.z / M * np.sum(phases * lam / (1.0 + ens.z * lam)))


def _kernel_submatrix(ens: CirculantEnsemble, sites) -> np.ndarray:
    lam = _cached_eigenvalues(ens)
    p = momentum_indices(ens.M)
    weights = ens.z / ens.M * lam / (1.0 + ens.z * lam)
    s = np.asarray(sites)
    d = (s[None, :] - s[:, None]) % ens.M
    return np.exp(2j * np.pi * d[..., None] * p / ens.M) @ weights


def correlation(ens: CirculantEnsemble, sites) -> float:
    """k-point correlation: determinant of the K-submatrix on distinct sites."""
    sites = tuple(int(s) for s in sites)
    if len(set(sites)) != len(sites):
        raise ValueError("sites must be distinct")
    if not sites:
        return 1.0
    if not all(1 <= s <= ens.M for s in sites):
        raise ValueError("sites must lie in 1..M")
    det = np.linalg.det(_kernel_submatrix(ens, sites))
    if abs(det.imag) > 1e-10 * max(1.0, abs(det.real)):
        raise ValueError("correlation determinant has a non-real component")
    return float(det.real)


def brute_force_correlation(ens: CirculantEnsemble, sites) -> float:
    """Correlation by summing configuration probabilities over all supersets.

    rho_k(X) = sum over Y containing X of z^{|Y|} det(L_Y) / Xi, with Xi from
    the subset enumeration. Requires M <= 14. This is the oracle against which
    the determinantal formula is checked.
    """
    if ens.M > BRUTE_FORCE_MAX_SITES:
        raise ValueError(f"brute force enumeration capped at M <= {BRUTE_FORCE_MAX_SITES}")
    sites = tuple(int(s) for s in sites)
    if len(set(sites)) != len(sites):
        raise ValueError("sites must be distinct")
    if not all(1 <= s <= ens.M for s in sites):
        raise ValueError("sites must lie in 1..M")
    L = build_circulant(ens).entries
    base = [s - 1 for s in sites]
    rest = [s for s in range(ens.M) if s not in base]
    xi = brute_force_partition(ens)
    total = 0.0
    for extra in _gray_code_subsets(len(rest)):
        idx = base + [rest[e] for e in extra]
        sub = L[np.ix_(idx, idx)] if idx else np.zeros((0, 0))
        det = 1.0 if not idx else float(np.linalg.det(sub))
        total += ens.z ** len(idx) * det
    return total / xi


def cauchy_determinant_check(points, eps: float, L: float):
    """Determinant of the regularized 1/u kernel vs its closed product form.

    Returns (lhs, rhs): lhs is the dense complex determinant of
    i h((L/pi) sin(pi (X_j - X_k + 2 i eps)/L)) with h(u) = 1/u, rhs the
    factored product over pair sines (real and positive; the alternant sign
    (-1)^{N(N-1)/2} is part of the product). The two agree to ~1e-12 relative
    for well-separated points.
    """
    X = np.asarray(points, dtype=float)
    N = X.size
    if not 2 <= N <= 8:
        raise ValueError("need 2 <= N <= 8 points")
    if not eps > 0:
        raise ValueError("eps must be positive")
    sep = np.abs(np.sin(np.pi * (X[:, None] - X[None, :]) / L))
    np.fill_diagonal(sep, np.inf)
    if sep.min() < 1e-12:
        raise ValueError("coincident points")
    D = X[:, None] - X[None, :] + 2j * eps
    lhs = complex(np.linalg.det((1j * np.pi / L) / np.sin(np.pi * D / L)))
    iu, ju = np.triu_indices(N, k=1)
    num = np.prod(np.sin(np.pi * (X[ju] - X[iu]) / L) ** 2)
    den = complex(np.prod(np.sin(np.pi * D / L)))
    rhs = (1j * np.pi / L) ** N * (-1.0) ** (N * (N - 1) // 2) * num / den
    return lhs, rhs


def kernel_trace(ens: CirculantEnsemble) -> float:
    """Trace of the Macchi kernel from the spectral sum (analytic route)."""
    lam = _cached_eigenvalues(ens)
    return float(np.sum(ens.z * lam / (1.0 + ens.z * lam)))
