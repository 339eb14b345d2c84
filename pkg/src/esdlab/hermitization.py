"""Girko's hermitization program as executable numerics.

The central objects are the log-determinant field
f_n(z) = (1/n) log |det(A/sqrt(n) - zI)|, its eps-regularized variant,
log-potentials of candidate limits, and Girko's identity relating the
plane ESD to the field through a contour-integral kernel.

The closed-form kernel of the inner t-integral requires v > 0; the
printed formula diverges for v < 0 and callers needing that half-plane
should use conjugate symmetry instead.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, NumericalFailureError, SingularityError
from .measures import ATOM_COLLISION_TOL, EmpiricalMeasure1D, EmpiricalMeasure2D
from .numerics import MINUS_INFINITY, as_matrix, singular_values


@dataclass(frozen=True)
class LatticeSpec:
    """Rectangular lattice of complex shifts around a center.

    Points sit at half-step offsets, (k + 1/2) step - extent in each
    coordinate, so integer-valued spectra cannot collide with the
    lattice; ordering is row-major with the real coordinate fastest.
    """

    center: complex = 0j
    extent: float = 2.5
    step: float = 0.25

    def __post_init__(self):
        if self.extent <= 0.0 or self.step <= 0.0 or self.step > 2.0 * self.extent:
            raise ConfigurationError("lattice needs 0 < step <= 2*extent")

    def offsets(self):
        k = int(math.ceil(2.0 * self.extent / self.step))
        return (np.arange(k) + 0.5) * self.step - self.extent

    def points(self):
        o = self.offsets()
        re, im = np.meshgrid(o, o, indexing="xy")
        return (complex(self.center) + re + 1j * im).ravel()

    def to_dict(self):
        return {"center_re": complex(self.center).real, "center_im": complex(self.center).imag,
                "extent": self.extent, "step": self.step}

    @classmethod
    def from_dict(cls, d):
        return cls(center=complex(d["center_re"], d["center_im"]),
                   extent=float(d["extent"]), step=float(d["step"]))


@dataclass(frozen=True)
class LogPotentialGrid:
    """Values of f_n over a lattice; exactly-singular shifts hold -inf."""

    spec: LatticeSpec
    values: np.ndarray

    @property
    def singular_points(self):
        return int(np.sum(np.isneginf(self.values)))


def log_det_at(a, z):
    """f_n(z) = (1/n) log |det(A/sqrt(n) - zI)|, via singular values."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ConfigurationError("log-determinant field requires a square matrix")
    n = m.shape[0]
    s = singular_values(m / math.sqrt(n) - complex(z) * np.eye(n))
    if s[0] == 0.0 or s[-1] < 1e-300 * s[0]:
        return MINUS_INFINITY
    return float(np.sum(np.log(s))) / n


def log_det_field(a, spec):
    """Evaluate f_n over a whole lattice; singular shifts record -inf."""
    points = spec.points()
    values = np.empty(points.size)
    for i, z in enumerate(points):
        values[i] = log_det_at(a, z)
    return LogPotentialGrid(spec, values)


def regularized_log_det(a, z, eps):
    """(1/2n) log det((A/sqrt(n) - zI)(A/sqrt(n) - zI)* + eps I).

    Always finite for eps > 0, monotone increasing in eps, and at least
    the unregularized value.
    """
    if eps <= 0.0:
        raise ConfigurationError("regularization eps must be positive")
    m = as_matrix(a)
    n = m.shape[0]
    s = singular_values(m / math.sqrt(n) - complex(z) * np.eye(n))
    return float(np.sum(np.log(s * s + eps))) / (2.0 * n)


def log_potential(mu, z):
    """int log|w - z| dmu(w) for an empirical measure or a reference law."""
    z = complex(z)
    if isinstance(mu, (EmpiricalMeasure2D, EmpiricalMeasure1D)):
        atoms = np.asarray(mu.atoms, dtype=np.complex128)
        dist = np.abs(atoms - z)
        if np.min(dist) <= ATOM_COLLISION_TOL:
            raise SingularityError(f"z={z} collides with an atom of the measure")
        return float(np.mean(np.log(dist)))
    if hasattr(mu, "log_potential"):
        return float(mu.log_potential(z))
    raise ConfigurationError("unsupported measure type for log_potential")


# ------------------------------------------------------------ Girko identity

def girko_kernel(w, s, u, v):
    """Closed form of the inner t-integral of Girko's identity:
    pi sgn(s - Re w) e^{-v |s - Re w|} e^{ius} e^{iv Im w}, valid for v > 0."""
    if v <= 0.0:
        raise ConfigurationError("girko_kernel requires v > 0 (printed kernel diverges otherwise)")
    w = complex(w)
    gap = s - w.real
    if gap == 0.0:
        raise SingularityError("kernel is singular at s = Re(w)")
    sign = 1.0 if gap > 0.0 else -1.0
    return complex(math.pi * sign * math.exp(-v * abs(gap)) * cmath.exp(1j * (u * s + v * w.imag)))


def _smooth_cutoff(x):
    """C-infinity cutoff: 1 on [-1, 1], 0 outside (-2, 2)."""
    ax = np.abs(np.asarray(x, dtype=np.float64))
    out = np.zeros_like(ax)
    out[ax <= 1.0] = 1.0
    mid = (ax > 1.0) & (ax < 2.0)
    t = ax[mid]
    phi_in = np.exp(-1.0 / (2.0 - t))
    phi_out = np.exp(-1.0 / (t - 1.0))
    out[mid] = phi_in / (phi_in + phi_out)
    return out


@dataclass(frozen=True)
class GirkoQuadrature:
    """Outer-integral quadrature: smooth truncation at |s| ~ r^2, composite
    trapezoid split at every atom's real part, two refinement levels with
    a Richardson check."""

    r: float = 4.0
    coarse_step: float = 1.0 / 8.0
    fine_step: float = 1.0 / 16.0
    rel_tol: float = 1e-2


def _girko_outer_integral(mu, u, v, step, r):
    """Trapezoid of the cutoff kernel sum, exact one-sided limits at jumps."""
    atoms = mu.atoms
    r2 = r * r
    lo, hi = -2.0 * r2, 2.0 * r2
    breaks = np.unique(np.clip(atoms.real, lo, hi))
    nodes = np.unique(np.concatenate([np.arange(lo, hi + step / 2, step), breaks]))
    total = 0.0 + 0.0j
    phase_im = np.exp(1j * v * atoms.imag)          # e^{iv Im w_j}, fixed per atom
    for a, b in zip(nodes[:-1], nodes[1:]):
        if b - a <= 1e-15:
            continue
        count = max(int(math.ceil((b - a) / step)), 1)
        s = np.linspace(a, b, count + 1)
        mid = 0.5 * (a + b)
        sign = np.where(mid - atoms.real > 0.0, 1.0, -1.0)   # constant on the segment
        gap = sign[:, None] * (s[None, :] - atoms.real[:, None])
        kernel = (math.pi * sign[:, None] * phase_im[:, None]) * np.exp(-v * gap)
        g = (2.0 / atoms.size) * kernel.sum(axis=0) * np.exp(1j * u * s)
        g *= _smooth_cutoff(s / r2)
        total += np.trapezoid(g, s)
    return total


def girko_reconstruct(mu, u, v, quad=GirkoQuadrature()):
    """Recover the characteristic function of mu at (u, v) from its
    Stieltjes-like transform through Girko's identity.

    Requires nonzero u and v > 0.  The two refinement levels must agree
    to ``quad.rel_tol``; the returned value is the Richardson
    extrapolation of the two trapezoid levels.
    """
    if u == 0.0:
        raise ConfigurationError("girko_reconstruct requires u != 0")
    if v <= 0.0:
        raise ConfigurationError("girko_reconstruct requires v > 0")
    coarse = _girko_outer_integral(mu, u, v, quad.coarse_step, quad.r)
    fine = _girko_outer_integral(mu, u, v, quad.fine_step, quad.r)
    prefactor = (u * u + v * v) / (4.0j * math.pi * u)
    value = prefactor * (4.0 * fine - coarse) / 3.0
    drift = abs(prefactor * (fine - coarse))
    if drift > quad.rel_tol * (1.0 + abs(value)):
        raise NumericalFailureError(
            f"girko quadrature not converged: levels differ by {drift:.3e} at (u={u}, v={v})")
    return complex(value)
