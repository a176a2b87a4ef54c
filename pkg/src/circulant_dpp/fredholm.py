"""Nystrom evaluation of Fredholm determinants on intervals, counting
distributions, the Toeplitz gap asymptote, the momentum-space equivalence of
the finite-temperature determinant, and residual checks of the associated
nonlinear ODE/PDE.

Every reported determinant passes a convergence gate: the quadrature order is
doubled until the determinant moves by less than 1e-10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import quadrature
from .limits import (ComplexOddFamily, CorrelationKernel, PRESSURE_AGREE,
                     RealEvenFamily, fermion_correlation_kernel,
                     gaudin_pressure, complex_thermo_spectral_density,
                     spectral_cutoff, spectral_density_values,
                     sine_correlation_kernel, thermo_pressure)

DET_GATE = 1e-10
MAX_DOUBLINGS = 4
EIG_LOW, EIG_HIGH = -1e-8, 1.0 + 1e-8


class FredholmConvergenceError(RuntimeError):
    """Determinant still moving after the allowed order doublings."""


@dataclass(frozen=True)
class FredholmProblem:
    """Kernel restricted to an interval with a thinning parameter xi."""

    kernel: CorrelationKernel
    interval: tuple
    xi: float = 1.0
    order: int = 48

    def __post_init__(self):
        a, b = self.interval
        if not b > a:
            raise ValueError("interval must have b > a")
        if self.order < 8:
            raise ValueError("quadrature order must be >= 8")
        if not 0.0 <= self.xi <= 1.0:
            raise ValueError("xi must lie in [0, 1]")


def _nystrom_eigs_at(problem: FredholmProblem, n: int) -> np.ndarray:
    a, b = problem.interval
    x, w = quadrature._leggauss(n)
    nodes = 0.5 * (a + b) + 0.5 * (b - a) * x
    wts = 0.5 * (b - a) * w
    K = np.asarray(problem.kernel.matrix(nodes))
    scale = max(1.0, float(np.max(np.abs(K))))
    if np.max(np.abs(K - K.conj().T)) > 1e-10 * scale:
        raise ValueError("kernel matrix is not Hermitian to 1e-10")
    sw = np.sqrt(wts)
    A = sw[:, None] * K * sw[None, :]
    eigs = np.linalg.eigvalsh(0.5 * (A + A.conj().T))
    if eigs.min() < EIG_LOW or eigs.max() > EIG_HIGH:
        raise ValueError(f"Nystrom eigenvalues outside (-1e-8, 1+1e-8): "
                         f"[{eigs.min():g}, {eigs.max():g}]")
    return eigs


def _det_from_eigs(eigs: np.ndarray, xi: float) -> float:
    return float(np.prod(1.0 - xi * eigs))


def nystrom_eigenvalues(problem: FredholmProblem) -> np.ndarray:
    """Eigenvalues of the symmetrized Nystrom matrix at a gated order.

    The order doubles (at most 4 times) until the xi = 1 determinant changes
    by less than 1e-10; the eigenvalues of the final order are returned.
    """
    n = problem.order
    eigs = _nystrom_eigs_at(problem, n)
    prev = _det_from_eigs(eigs, 1.0)
    for _ in range(MAX_DOUBLINGS):
        n *= 2
        eigs = _nystrom_eigs_at(problem, n)
        cur = _det_from_eigs(eigs, 1.0)
        if abs(cur - prev) < DET_GATE:
            return eigs
        prev = cur
    raise FredholmConvergenceError(
        f"determinant still moving by {abs(cur - prev):g} after {MAX_DOUBLINGS} doublings")


def fredholm_det(problem: FredholmProblem) -> float:
    """det(I - xi K_J) as the gated product over Nystrom eigenvalues."""
    return _det_from_eigs(nystrom_eigenvalues(problem), problem.xi)


def log_fredholm_det(problem: FredholmProblem) -> float:
    """log det(I - xi K_J); factors must stay positive."""
    eigs = nystrom_eigenvalues(problem)
    factors = 1.0 - problem.xi * eigs
    if factors.min() <= 0:
        raise ValueError("log determinant undefined: a factor is nonpositive")
    return float(np.sum(np.log(factors)))


def gap_probability(problem: FredholmProblem) -> float:
    """Probability that the interval holds no particles (xi = 1 determinant)."""
    return _det_from_eigs(nystrom_eigenvalues(problem), 1.0)


@dataclass(frozen=True)
class CountingDistribution:
    """Probabilities of exactly n particles in the interval, n = 0..n_max."""

    probabilities: np.ndarray
    tail: float

    def __post_init__(self):
        if np.min(self.probabilities) < -1e-10:
            raise ValueError("counting probabilities must be nonnegative")
        if float(np.sum(self.probabilities)) > 1.0 + 1e-8:
            raise ValueError("counting probabilities exceed total probability")


def counting_distribution(problem: FredholmProblem, n_max: int) -> CountingDistribution:
    """Exact polynomial convolution of the factors ((1-lambda_j) + eta lambda_j).

    The coefficient of eta^n is the probability of exactly n particles; the
    xi = 0 evaluation (eta = 1) certifies total probability one.
    """
    eigs = nystrom_eigenvalues(problem)
    if n_max > eigs.size:
        raise ValueError("n_max exceeds the number of quadrature eigenvalues")
    poly = np.zeros(eigs.size + 1)
    poly[0] = 1.0
    for lam in eigs:
        new = (1.0 - lam) * poly
        new[1:] += lam * poly[:-1]
        poly = new
    probs = poly[:n_max + 1].copy()
    return CountingDistribution(probabilities=probs, tail=float(1.0 - probs.sum()))


def counting_mean(problem: FredholmProblem) -> float:
    """Expected count = trace of the restricted kernel (spectral sum)."""
    return float(np.sum(nystrom_eigenvalues(problem)))


def fredholm_det_series(kernel: CorrelationKernel, interval, xi: float,
                        terms: int = 3, order: int = 16) -> float:
    """Truncated correlation-function expansion of the determinant.

    1 + sum_{j<=terms} (-xi)^j/j! * j-fold integrals of the j-point
    determinant; independent oracle for small intervals, terms <= 3.
    """
    if terms > 3:
        raise ValueError("series oracle supports terms <= 3")
    a, b = interval
    x, w = quadrature._leggauss(order)
    nodes = 0.5 * (a + b) + 0.5 * (b - a) * x
    wts = 0.5 * (b - a) * w
    K = np.asarray(kernel.matrix(nodes))
    total = 1.0
    diag = np.real(np.diag(K))
    if terms >= 1:
        total += -xi * float(wts @ diag)
    if terms >= 2:
        # det [[K_ii, K_ij], [K_ji, K_jj]]
        rho2 = np.outer(diag, diag) - np.abs(K) ** 2
        total += (xi ** 2 / 2.0) * float(wts @ rho2 @ wts)
    if terms >= 3:
        Kij, Kji = K, K.conj().T
        d3 = (np.einsum("i,j,k->ijk", diag, diag, diag)
              + 2.0 * np.real(np.einsum("ij,jk,ki->ijk", Kij, Kij, Kij))
              - np.einsum("i,jk,kj->ijk", diag, Kij, Kji)
              - np.einsum("j,ik,ki->ijk", diag, Kij, Kji)
              - np.einsum("k,ij,ji->ijk", diag, Kij, Kji))
        total += (-xi ** 3 / 6.0) * float(np.einsum("i,j,k,ijk->", wts, wts, wts, np.real(d3)))
    return total


def gap_asymptote(family, z: float, length: float, xi: float) -> float:
    """Szego-type large-interval asymptote of the thinned determinant.

    exp(length * int log(1 - xi z lambda/(1+z lambda)) ds); at xi = 1 this is
    exactly exp(-length * pressure).
    """
    if z < 0:
        raise ValueError("z must be nonnegative")
    if not 0.0 <= xi <= 1.0:
        raise ValueError("xi must lie in [0, 1]")
    if xi == 0.0 or z == 0.0:
        return 1.0
    if isinstance(family, RealEvenFamily):
        S = spectral_cutoff(family, z)

        def f(s):
            lam = spectral_density_values(family, s)
            return np.log1p(-xi * z * lam / (1.0 + z * lam))

        integral = 2.0 * quadrature.integrate(f, 0.0, S, min_panels=8,
                                              agree_rel=PRESSURE_AGREE)
    elif isinstance(family, ComplexOddFamily):
        eps = family.eps
        arg = math.log(max(2.0 * math.pi * z, 1e-16)) - math.log(1e-16)
        S = max(arg, 1.0) / (4.0 * math.pi * eps)

        def f(s):
            lam = complex_thermo_spectral_density(eps, s)
            return np.log1p(-xi * z * lam / (1.0 + z * lam))

        integral = quadrature.integrate(f, 0.0, S, min_panels=8,
                                        agree_rel=PRESSURE_AGREE)
    else:
        raise TypeError("gap_asymptote needs a real even or complex odd family")
    return float(np.exp(length * float(integral)))


# ---------------------------------------------------------------------------
# momentum-space route for the finite-temperature kernel
# ---------------------------------------------------------------------------

def _fermi_weight(beta, mu, k):
    return 1.0 / (np.exp(np.minimum(beta * (k * k - mu), 700.0)) + 1.0)


def _momentum_cutoff(beta, mu, tol=1e-14):
    arg = mu + math.log(1.0 / tol) / beta
    if not np.isfinite(arg):
        raise FredholmConvergenceError("momentum truncation bound unreachable")
    return math.sqrt(max(arg, 1.0 / beta))


def _sinc_matrix(k: np.ndarray, x: float) -> np.ndarray:
    D = k[:, None] - k[None, :]
    out = np.empty_like(D)
    mask = D == 0.0
    out[mask] = x / np.pi
    out[~mask] = np.sin(x * D[~mask]) / (np.pi * D[~mask])
    return out


def _momentum_eigs_at(beta, mu, x, n):
    kmax = _momentum_cutoff(beta, mu)
    gl, w = quadrature._leggauss(n)
    k = kmax * gl
    wts = kmax * w
    sq = np.sqrt(_fermi_weight(beta, mu, k))
    A = sq[:, None] * _sinc_matrix(k, x) * sq[None, :]
    sw = np.sqrt(wts)
    A = sw[:, None] * A * sw[None, :]
    return np.linalg.eigvalsh(0.5 * (A + A.T))


def momentum_log_det(beta: float, mu: float, x: float, xi: float,
                     order: int = 48) -> float:
    """log det(I - xi K~) for the momentum-space integrable kernel on the line,
    truncated where the Fermi weight drops below 1e-14; order-doubled to the
    1e-10 determinant gate."""
    n = order
    eigs = _momentum_eigs_at(beta, mu, x, n)
    prev = float(np.prod(1.0 - eigs))
    for _ in range(MAX_DOUBLINGS):
        n *= 2
        eigs = _momentum_eigs_at(beta, mu, x, n)
        cur = float(np.prod(1.0 - eigs))
        if abs(cur - prev) < DET_GATE:
            factors = 1.0 - xi * eigs
            if factors.min() <= 0:
                raise ValueError("log determinant undefined")
            return float(np.sum(np.log(factors)))
        prev = cur
    raise FredholmConvergenceError("momentum-route determinant did not converge")


def iik_equivalence(beta: float, mu: float, x: float, xi: float):
    """Two independent routes to the thinned determinant on (-x, x).

    det_direct restricts the position-space finite-temperature kernel;
    det_momentum uses the symmetrized momentum-space kernel on the line.
    Both are gated Nystrom products; they agree to ~1e-6 relative.
    """
    if not x > 0:
        raise ValueError("x must be positive")
    direct = fredholm_det(FredholmProblem(
        kernel=fermion_correlation_kernel(beta, mu),
        interval=(-x, x), xi=xi, order=48))
    momentum = float(np.exp(momentum_log_det(beta, mu, x, xi)))
    return direct, momentum


def fermi_weight_integral(t: float) -> float:
    """I(t) = int dk / (1 + e^{k^2 - t}), the small-interval rate constant."""
    kmax = _momentum_cutoff(1.0, t, tol=1e-18)

    def f(k):
        return _fermi_weight(1.0, t, k)

    return float(2.0 * quadrature.integrate(f, 0.0, kmax, min_panels=8))


def sigma_small_x_check(t: float, xi: float, x_grid: Sequence[float]) -> float:
    """Max deviation of log det(I - xi K~) from its two-term small-x expansion.

    The expansion is -(xi/pi) I(t) x - (xi^2/2 pi^2) I(t)^2 x^2 with I(t) the
    Fermi weight integral; valid for x <= 0.05.
    """
    x_grid = np.asarray(x_grid, dtype=float)
    if np.any(x_grid > 0.05):
        raise ValueError("small-x check is specified for x <= 0.05")
    I_t = fermi_weight_integral(t)
    worst = 0.0
    for x in x_grid:
        if x == 0:
            continue
        sigma = momentum_log_det(1.0, t, float(x), xi)
        expansion = -(xi / math.pi) * I_t * x - (xi ** 2 / (2.0 * math.pi ** 2)) * I_t ** 2 * x ** 2
        worst = max(worst, abs(sigma - expansion))
    return worst


def sigma_linear_coefficient(t: float, xi: float, h: float = 0.005) -> float:
    """Richardson slope of sigma at 0: 2 sigma(h)/h - sigma(2h)/(2h)."""
    s1 = momentum_log_det(1.0, t, h, xi) / h
    s2 = momentum_log_det(1.0, t, 2.0 * h, xi) / (2.0 * h)
    return 2.0 * s1 - s2


# ---------------------------------------------------------------------------
# sine-kernel sigma ODE and the finite-temperature PDE (residual checks)
# ---------------------------------------------------------------------------

def _sine_log_det(tau: float, xi: float, order: int = 48) -> float:
    problem = FredholmProblem(kernel=sine_correlation_kernel(tau),
                              interval=(-1.0, 1.0), xi=xi, order=order)
    return log_fredholm_det(problem)


def _validated_derivs(F, tau: float, h: float):
    """5-point first/second/third derivatives with step-halving validation."""
    def stencil(step):
        vals = np.array([F(tau + k * step) for k in (-2, -1, 0, 1, 2)])
        d1 = (vals[0] - 8 * vals[1] + 8 * vals[3] - vals[4]) / (12 * step)
        d2 = (-vals[0] + 16 * vals[1] - 30 * vals[2] + 16 * vals[3] - vals[4]) / (12 * step ** 2)
        d3 = (-vals[0] + 2 * vals[1] - 2 * vals[3] + vals[4]) / (2 * step ** 3)
        return np.array([d1, d2, d3])

    coarse = stencil(h)
    fine = stencil(h / 2.0)
    scale = np.maximum(np.abs(fine), 1e-8)
    if np.any(np.abs(fine - coarse) > 0.1 * scale):
        raise FredholmConvergenceError(
            "finite-difference derivatives disagree by more than 10% under step halving")
    return fine


def sine_sigma_ode_residual(tau_grid: Sequence[float], xi: float,
                            h: float = 0.005) -> np.ndarray:
    """Normalized residual of the nonlinear second-order ODE for sigma0.

    sigma0(tau) = tau d/dtau log det(I - xi K_sine^(tau) on (-1,1)); the
    residual (tau s'')^2 + 4 (tau s' - s)(4 tau s' + (s')^2 - 4 s), normalized
    by (tau s'')^2 + 1, vanishes on solutions.
    """
    if not 0 < h <= 1e-2:
        raise ValueError("derivative step must satisfy 0 < h <= 1e-2")
    if xi == 0.0:
        return np.zeros(len(list(tau_grid)))
    res = []
    for tau in np.asarray(tau_grid, dtype=float):
        if not tau > 0:
            raise ValueError("tau grid must be positive")
        d1, d2, d3 = _validated_derivs(lambda u: _sine_log_det(u, xi), tau, h)
        s0 = tau * d1
        s1 = d1 + tau * d2
        s2 = 2.0 * d2 + tau * d3
        lhs = (tau * s2) ** 2
        rhs = 4.0 * (tau * s1 - s0) * (4.0 * tau * s1 + s1 ** 2 - 4.0 * s0)
        res.append((lhs + rhs) / (lhs + 1.0))
    return np.abs(np.asarray(res))


def _stencil_1d(vals: np.ndarray, h: float, axis: int, order: int) -> np.ndarray:
    """5-point first or second derivative along an axis (interior shrinks by 2)."""
    v = np.moveaxis(vals, axis, 0)
    if order == 1:
        out = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / (12 * h)
    elif order == 2:
        out = (-v[:-4] + 16 * v[1:-3] - 30 * v[2:-2] + 16 * v[3:-1] - v[4:]) / (12 * h ** 2)
    else:
        raise ValueError("order must be 1 or 2")
    return np.moveaxis(out, 0, axis)


def sigma_pde_residual(x_grid: Sequence[float], t_grid: Sequence[float], xi: float):
    """Normalized residual field of the finite-temperature sigma PDE (diagnostic).

    Returns (residual, x_interior, t_interior, noisy_flags): the residual of
    (d_t d_x^2 s)^2 + 4 (d_x^2 s)(2 x d_t d_x s + (d_t d_x s)^2 - 2 d_t s),
    normalized by (d_t d_x^2 s)^2 + 1, on the interior grid; flags mark points
    where coarsened stencils disagree by more than 50%.
    """
    x = np.asarray(x_grid, dtype=float)
    t = np.asarray(t_grid, dtype=float)
    if x.size < 9 or t.size < 9:
        raise ValueError("stencils need at least 9 points per axis")
    hx = x[1] - x[0]
    ht = t[1] - t[0]
    if not (np.allclose(np.diff(x), hx) and np.allclose(np.diff(t), ht)):
        raise ValueError("grids must be uniform")
    if xi == 0.0:
        shape = (x.size - 4, t.size - 4)
        return (np.zeros(shape), x[2:-2], t[2:-2], np.zeros(shape, dtype=bool))

    sigma = np.array([[momentum_log_det(1.0, float(tt), float(xx), xi)
                       for tt in t] for xx in x])

    def residual_from(sig, hx_, ht_, xs):
        # interior shrinks by 2 points per axis; residual[i, j] sits at
        # (xs[2+i], ts[2+j])
        dx = _stencil_1d(sig, hx_, 0, 1)
        dxx = _stencil_1d(sig, hx_, 0, 2)
        dt = _stencil_1d(sig, ht_, 1, 1)[2:-2, :]
        dtdx = _stencil_1d(dx, ht_, 1, 1)
        dtdxx = _stencil_1d(dxx, ht_, 1, 1)
        dxx_i = dxx[:, 2:-2]
        xs_i = xs[2:-2][:, None]
        lhs = dtdxx ** 2
        rhs = 4.0 * dxx_i * (2.0 * xs_i * dtdx + dtdx ** 2 - 2.0 * dt)
        return (lhs + rhs) / (lhs + 1.0)

    res = residual_from(sigma, hx, ht, x)
    coarse = residual_from(sigma[::2, ::2], 2 * hx, 2 * ht, x[::2])
    # coarse residual [m, n] sits at (x[4 + 2m], t[4 + 2n]); the matching fine
    # residual entry is res[2 + 2m, 2 + 2n]
    flags = np.zeros_like(res, dtype=bool)
    res_c = res[2::2, 2::2][:coarse.shape[0], :coarse.shape[1]]
    mism = np.abs(coarse - res_c) > 0.5 * np.maximum(np.abs(res_c), 1e-3)
    flags[2::2, 2::2][:coarse.shape[0], :coarse.shape[1]] |= mism
    return np.abs(res), x[2:-2], t[2:-2], flags
