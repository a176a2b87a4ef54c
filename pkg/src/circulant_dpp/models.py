"""Entry-function families, periodic ensembles, and thermodynamic parameter maps.

A translation-invariant L-ensemble on a periodic lattice is specified by an
entry function evaluated at chord distances. Three families are supported:

* real even g(u), one argument (the generic one-dimensional case);
* real even g(u1, ..., ud) for tensor lattices in d dimensions;
* odd h(u) shifted by a regularizer eps, giving a complex Hermitian operator
  on the continuum circle (the conductor-regularized log-gas).

Builtins: the Gaussian (free fermions at finite temperature under the map
c = 4 pi beta, z = e^{beta mu}) and h(u) = 1/u (the Poisson/unitary
interpolating model).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

#: |g| below this is treated as identically zero past the declared radius.
DECAY_THRESHOLD = 1e-18


@dataclass(frozen=True)
class RealEvenFamily:
    """Real even entry function with a declared decay radius.

    Parameters
    ----------
    g : callable
        Vectorized real even function of one real argument.
    decay_radius : float
        Radius R with |g(u)| < 1e-18 for |u| > R; enables safe truncation of
        sums and integrals. Builtins compute it analytically.
    density : callable, optional
        Closed-form spectral density s -> Fourier transform of g, if known.
    density_cutoff : callable, optional
        ``(z, tol) -> s_max`` with z * density(s) < tol beyond s_max.
    c : float, optional
        Gaussian scale parameter, set only by the Gaussian builtin (used where
        closed forms in c are required).
    """

    g: Callable
    decay_radius: float
    name: str = "custom"
    density: Optional[Callable] = None
    density_cutoff: Optional[Callable] = None
    c: Optional[float] = None

    def __post_init__(self):
        if not self.decay_radius > 0:
            raise ValueError("decay_radius must be positive")


@dataclass(frozen=True)
class RealEvenDFamily:
    """Real entry function of d arguments for tensor lattices (d >= 1)."""

    g: Callable  # maps (..., d) arrays to (...) values
    dim: int
    decay_radius: float
    name: str = "custom"
    density: Optional[Callable] = None  # closed-form density of the d-vector s
    c: Optional[float] = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if not self.decay_radius > 0:
            raise ValueError("decay_radius must be positive")


@dataclass(frozen=True)
class ComplexOddFamily:
    """Odd h(u) with positive regularizer eps (continuum-only family)."""

    h: Callable
    eps: float
    name: str = "custom"
    density: Optional[Callable] = None  # one-sided closed form when known

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")


def _gaussian_radius(c: float) -> float:
    # solve e^{-pi R^2/c}/sqrt(c) = DECAY_THRESHOLD
    arg = -math.log(DECAY_THRESHOLD) - 0.5 * math.log(c)
    return math.sqrt(c / math.pi * max(arg, 1.0))


def gaussian_family(c: float) -> RealEvenFamily:
    """Gaussian entries g(u) = c^{-1/2} e^{-pi u^2/c}, spectral density e^{-pi c s^2}."""
    if not c > 0:
        raise ValueError("c must be positive")

    def g(u):
        return np.exp(-np.pi * np.square(u) / c) / math.sqrt(c)

    def density(s):
        return np.exp(-np.pi * c * np.square(s))

    def density_cutoff(z, tol):
        # z e^{-pi c s^2} < tol
        return math.sqrt(max(math.log(max(z, tol)) - math.log(tol), 1.0) / (math.pi * c))

    return RealEvenFamily(g=g, decay_radius=_gaussian_radius(c), name="gaussian",
                          density=density, density_cutoff=density_cutoff, c=c)


def gaussian_family_d(c: float, dim: int) -> RealEvenDFamily:
    """d-dimensional Gaussian g(u) = c^{-d/2} e^{-pi |u|^2/c}."""
    if not c > 0:
        raise ValueError("c must be positive")

    def g(u):
        u = np.asarray(u, dtype=float)
        return np.exp(-np.pi * np.sum(np.square(u), axis=-1) / c) / c ** (dim / 2.0)

    def density(s):
        s = np.asarray(s, dtype=float)
        return np.exp(-np.pi * c * np.sum(np.square(s), axis=-1))

    return RealEvenDFamily(g=g, dim=dim, decay_radius=_gaussian_radius(c),
                           name="gaussian", density=density, c=c)


def inverse_argument_family(eps: float) -> ComplexOddFamily:
    """h(u) = 1/u with regularizer eps; spectral density 2 pi e^{-4 pi eps s} on s >= 0."""

    def h(u):
        return 1.0 / u

    def density(s):
        s = np.asarray(s, dtype=float)
        # abs() keeps the masked branch from overflowing at very negative s
        return np.where(s >= 0, 2.0 * np.pi * np.exp(-4.0 * np.pi * eps * np.abs(s)), 0.0)

    return ComplexOddFamily(h=h, eps=eps, name="inverse-argument", density=density)


def user_family(g, decay_radius, name="custom", density=None):
    """Wrap a user-supplied even g, checking evenness on a probe grid (1e-12)."""
    probes = np.linspace(0.0, decay_radius, 17)[1:]
    diff = np.max(np.abs(np.asarray(g(probes)) - np.asarray(g(-probes))))
    if diff > 1e-12:
        raise ValueError(f"g is not even: max |g(u)-g(-u)| = {diff:g} on the probe grid")
    return RealEvenFamily(g=g, decay_radius=float(decay_radius), name=name, density=density)


def momentum_indices(M: int) -> np.ndarray:
    """Momentum labels floor(-M/2)+1 .. floor(M/2) (the global phase convention)."""
    lo = -((M + 1) // 2) + 1
    return np.arange(lo, M // 2 + 1)


@dataclass(frozen=True)
class CirculantEnsemble:
    """Finite periodic system: M sites on a circle of circumference L, fugacity z.

    Entries of the L-matrix are g evaluated at chord distances, so the matrix
    is a real symmetric circulant. Complex odd families live on the continuum
    circle only and are rejected here.
    """

    M: int
    L: float
    z: float
    family: RealEvenFamily

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("M must be >= 1")
        if not self.L > 0:
            raise ValueError("L must be positive")
        if self.z < 0:
            raise ValueError("z must be nonnegative")
        if isinstance(self.family, ComplexOddFamily):
            raise TypeError("complex odd families are continuum-only; "
                            "no lattice ensemble can be built from them")
        if not isinstance(self.family, RealEvenFamily):
            raise TypeError("CirculantEnsemble requires a RealEvenFamily")

    @property
    def tau(self) -> float:
        """Lattice spacing L/M."""
        return self.L / self.M


@dataclass(frozen=True)
class FermionParams:
    """Inverse temperature and chemical potential of the free-fermion picture."""

    beta: float
    mu: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")

    def to_gas(self):
        """Map to (c, z) via c = 4 pi beta, z = e^{beta mu}."""
        return 4.0 * math.pi * self.beta, math.exp(self.beta * self.mu)

    @classmethod
    def from_gas(cls, c: float, z: float) -> "FermionParams":
        if not (c > 0 and z > 0):
            raise ValueError("need c > 0 and z > 0")
        beta = c / (4.0 * math.pi)
        return cls(beta=beta, mu=math.log(z) / beta)


def fermion_to_gas(params: FermionParams):
    """Free-fermion parameters to lattice-gas parameters (c, z)."""
    return params.to_gas()


def generating_function(family: RealEvenFamily, M: int, L: float, zeta: complex) -> complex:
    """Laurent generating function of the circulant entries at zeta on the unit circle.

    Sums g((L/pi) sin(pi s/M)) zeta^s over s = floor(-M/2)+1 .. floor(M/2).
    At zeta = e^{2 pi i p/M} this is the p-th eigenvalue of the circulant
    L-matrix and is real.
    """
    if isinstance(family, ComplexOddFamily):
        raise TypeError("generating_function is defined for real even families only")
    zeta = complex(zeta)
    if abs(abs(zeta) - 1.0) > 1e-9:
        raise ValueError("zeta must lie on the unit circle")
    s = momentum_indices(M)
    coeffs = np.asarray(family.g((L / np.pi) * np.sin(np.pi * s / M)), dtype=float)
    return complex(np.sum(coeffs * np.power(zeta, s)))
