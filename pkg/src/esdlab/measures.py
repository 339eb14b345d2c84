"""Empirical spectral distributions, transforms, and distances.

The 1/sqrt(n) spectral normalization is applied exactly once, inside
``esd_eigen`` / ``esd_gram`` / ``dilation_esd``; everything downstream
works with already-normalized atoms.

Vague convergence is operationalized by ``bl_distance`` against a fixed,
versioned dictionary of bounded 1-Lipschitz bump functions; the grid
extent, the three dyadic spacings and the member ordering are part of
the external contract so distances are comparable across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, SingularityError
from .numerics import as_matrix, eigenvalues, singular_values

ATOM_COLLISION_TOL = 1e-12


@dataclass(frozen=True)
class EmpiricalMeasure2D:
    """Finite atomic probability measure on the complex plane, weight 1/n each."""

    atoms: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.atoms, dtype=np.complex128))
        if a.ndim != 1 or a.size == 0:
            raise ConfigurationError("measure needs a nonempty 1-D atom array")
        if not np.all(np.isfinite(a)):
            raise ConfigurationError("measure atoms must be finite")
        object.__setattr__(self, "atoms", a)

    @property
    def size(self):
        return self.atoms.size


@dataclass(frozen=True)
class EmpiricalMeasure1D:
    """Finite atomic probability measure on the real line, weight 1/n each.

    Squared-singular-value ESDs have nonnegative atoms; Hermitian
    dilation spectra are supported on all of R (signed atoms).
    """

    atoms: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.atoms, dtype=np.float64))
        if a.ndim != 1 or a.size == 0:
            raise ConfigurationError("measure needs a nonempty 1-D atom array")
        if not np.all(np.isfinite(a)):
            raise ConfigurationError("measure atoms must be finite")
        object.__setattr__(self, "atoms", a)

    @property
    def size(self):
        return self.atoms.size


def esd_eigen(a):
    """Eigenvalue ESD of A/sqrt(n)."""
    m = as_matrix(a)
    n = m.shape[0]
    return EmpiricalMeasure2D(eigenvalues(m / math.sqrt(n)))


def esd_gram(a, z):
    """ESD of the squared singular values of (A/sqrt(n) - zI)."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ConfigurationError("gram ESD requires a square matrix")
    n = m.shape[0]
    shifted = m / math.sqrt(n) - complex(z) * np.eye(n)
    s = singular_values(shifted)
    return EmpiricalMeasure1D(s * s)


def dilation_esd(a):
    """ESD of the 2n-by-2n Hermitian dilation [[0, A/sqrt(n)], [*, 0]].

    The atoms are exactly the positive and negative singular values of
    A/sqrt(n), each with weight 1/(2n); the set is negation-symmetric by
    construction.
    """
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ConfigurationError("dilation requires a square matrix")
    s = singular_values(m / math.sqrt(m.shape[0]))
    return EmpiricalMeasure1D(np.concatenate([-s, s[::-1]]))


def second_moment(mu):
    """Integral of |z|^2 against the measure (tightness gauge)."""
    return float(np.mean(np.abs(mu.atoms) ** 2))


def characteristic_function(mu, u, v):
    """(1/n) sum_j exp(i u Re atom_j + i v Im atom_j); bounded by 1."""
    a = mu.atoms
    return complex(np.mean(np.exp(1j * (u * a.real + v * a.imag))))


def stieltjes_g(mu, z):
    """Girko's real transform (2/n) Re sum (z - atom) / |z - atom|^2.

    The point z must stay away from every atom; collisions raise rather
    than regularize so derivative checks are never silently corrupted.
    """
    z = complex(z)
    diff = z - mu.atoms
    dist2 = diff.real**2 + diff.imag**2
    if np.min(dist2) <= ATOM_COLLISION_TOL**2:
        raise SingularityError(f"z={z} collides with an atom of the measure")
    return float(2.0 * np.mean(diff.real / dist2))


@dataclass(frozen=True)
class TestFunctionDictionary:
    """Products of triangular bumps on a fixed grid at dyadic spacings.

    Member (h, cx, cy) evaluates to (h/sqrt(2)) tri((x-cx)/h) tri((y-cy)/h)
    with tri(t) = max(0, 1-|t|); the amplitude h/sqrt(2) makes every
    member exactly 1-Lipschitz on the plane with sup at most 1.
    Ordering: coarsest spacing first, centers lexicographic in (cx, cy).
    """

    __test__ = False  # not a pytest class despite the name

    extent: float = 3.0
    spacings: tuple = (1.0, 0.5, 0.25)

    def centers(self, h):
        k = int(round(2.0 * self.extent / h))
        return np.linspace(-self.extent, self.extent, k + 1)

    @property
    def size(self):
        return sum(self.centers(h).size ** 2 for h in self.spacings)

    def member_means(self, mu):
        """Integral of every member against mu, in dictionary order."""
        x = mu.atoms.real
        y = mu.atoms.imag
        out = []
        for h in self.spacings:
            cs = self.centers(h)
            amp = h / math.sqrt(2.0)
            tx = np.clip(1.0 - np.abs((x[None, :] - cs[:, None]) / h), 0.0, None)
            ty = np.clip(1.0 - np.abs((y[None, :] - cs[:, None]) / h), 0.0, None)
            means = amp * (tx @ ty.T) / mu.size   # [cx, cy] -> mean_j tx*ty
            out.append(means.ravel())
        return np.concatenate(out)

    def evaluate(self, h, cx, cy, z):
        z = np.asarray(z, dtype=np.complex128)
        tx = np.clip(1.0 - np.abs((z.real - cx) / h), 0.0, None)
        ty = np.clip(1.0 - np.abs((z.imag - cy) / h), 0.0, None)
        return (h / math.sqrt(2.0)) * tx * ty


def bl_distance(mu1, mu2, dictionary=None):
    """Max over dictionary members of |int f dmu1 - int f dmu2|."""
    dictionary = dictionary or TestFunctionDictionary()
    return float(np.max(np.abs(dictionary.member_means(mu1) - dictionary.member_means(mu2))))


def ks_vs_cdf(samples, cdf):
    """One-sample Kolmogorov-Smirnov statistic against a CDF callable."""
    x = np.sort(np.asarray(samples, dtype=np.float64))
    n = x.size
    f = np.asarray(cdf(x), dtype=np.float64)
    i = np.arange(1, n + 1)
    return float(max(np.max(np.abs(f - i / n)), np.max(np.abs(f - (i - 1) / n))))


def ks_two_sample(a, b):
    """Two-sample Kolmogorov-Smirnov statistic between atom sets."""
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def radial_angular_ks(mu, radial_cdf, center=0j):
    """KS statistics of |atom-center| against radial_cdf and of the
    argument against the uniform law on (-pi, pi]."""
    rel = mu.atoms - complex(center)
    radial = ks_vs_cdf(np.abs(rel), radial_cdf)
    angular = ks_vs_cdf(np.angle(rel), lambda t: (t + math.pi) / (2.0 * math.pi))
    return radial, angular
