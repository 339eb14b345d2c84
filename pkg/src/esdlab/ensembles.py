"""Random-matrix ensembles: entry distributions, base matrices, assembly.

All built-in scalar distributions are normalized at construction to mean
zero and unit variance, so matrix-level normalization is purely the
global 1/sqrt(n) applied when spectra are measured.  Matrix entries are
always drawn in row-major order from the supplied stream; the order is
contractual because reordering changes realizations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DegenerateInputError
from .rng import RngStream

SCALAR_KINDS = (
    "bernoulli",
    "real_gaussian",
    "complex_gaussian",
    "uniform_centered",
    "two_point_asymmetric",
    "pareto_symmetrized",
)

BASE_KINDS = ("zero", "two_block_diagonal", "low_rank", "diagonal_from_measure", "explicit")


@dataclass(frozen=True)
class ScalarDistribution:
    """A named, seedable complex random variable with declared moments."""

    kind: str
    params: tuple = ()
    declared_mean: complex = 0j
    declared_variance: float = 1.0

    @property
    def complex_valued(self):
        return self.kind == "complex_gaussian"


def scalar_distribution(kind, **params):
    """Construct a built-in ScalarDistribution, validating parameters.

    Supported kinds and parameters:
      bernoulli                      +1/-1 with probability 1/2 each
      real_gaussian                  N(0, 1), Marsaglia polar method
      complex_gaussian               (g1 + i g2)/sqrt(2), E|z|^2 = 1
      uniform_centered               uniform on [-sqrt(3), sqrt(3)]
      two_point_asymmetric(p=0.9)    sqrt((1-p)/p) w.p. p, -sqrt(p/(1-p)) w.p. 1-p
      pareto_symmetrized(exponent=2.5)
                                     symmetric Pareto tail, rescaled to unit
                                     variance; finite variance needs exponent > 2
    """
    if kind not in SCALAR_KINDS:
        raise ConfigurationError(f"unknown scalar distribution kind {kind!r}")
    if kind == "two_point_asymmetric":
        p = float(params.pop("p", 0.9))
        if params:
            raise ConfigurationError(f"unexpected parameters for {kind}: {sorted(params)}")
        if not 0.0 < p < 1.0:
            raise ConfigurationError("two_point_asymmetric requires 0 < p < 1")
        return ScalarDistribution(kind, (p,))
    if kind == "pareto_symmetrized":
        alpha = float(params.pop("exponent", 2.5))
        if params:
            raise ConfigurationError(f"unexpected parameters for {kind}: {sorted(params)}")
        if alpha <= 2.0:
            raise ConfigurationError("pareto_symmetrized needs exponent > 2 for finite variance")
        return ScalarDistribution(kind, (alpha,))
    if params:
        raise ConfigurationError(f"{kind} takes no parameters, got {sorted(params)}")
    return ScalarDistribution(kind)


def _polar_pairs(rng, count):
    """Accepted Marsaglia polar pairs (z0, z1), in exact stream order.

    Each attempt consumes two words; the j-th accepted attempt feeds the
    j-th output pair, and the stream is left positioned right after the
    final accepting attempt, so the vectorized path is bit-identical to
    a scalar rejection loop.
    """
    z0 = np.empty(count)
    z1 = np.empty(count)
    got = 0
    while got < count:
        need = count - got
        batch = max(32, int(need * 1.35) + 8)
        words = rng.raw(2 * batch)
        u = ((words[0::2] >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53 * 2.0 - 1.0
        v = ((words[1::2] >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53 * 2.0 - 1.0
        s = u * u + v * v
        accepted = np.flatnonzero(s < 1.0)
        if accepted.size >= need:
            # stream must stop right after the accepting attempt of the
            # final pair, exactly as a scalar rejection loop would
            last = accepted[need - 1]
            rng.rewind(2 * (batch - (int(last) + 1)))
            accepted = accepted[:need]
        f = np.sqrt(-2.0 * np.log(s[accepted]) / s[accepted])
        z0[got:got + accepted.size] = u[accepted] * f
        z1[got:got + accepted.size] = v[accepted] * f
        got += accepted.size
    return z0, z1


def sample_array(dist, rng, count):
    """Draw ``count`` iid copies; float64 for real kinds, complex128 otherwise."""
    if not isinstance(dist, ScalarDistribution):
        raise ConfigurationError("dist must be a ScalarDistribution")
    kind = dist.kind
    if kind == "bernoulli":
        words = rng.raw(count)
        return np.where((words >> np.uint64(63)).astype(bool), 1.0, -1.0)
    if kind == "uniform_centered":
        return (2.0 * rng.uniforms(count) - 1.0) * math.sqrt(3.0)
    if kind == "two_point_asymmetric":
        (p,) = dist.params
        hi = math.sqrt((1.0 - p) / p)
        lo = -math.sqrt(p / (1.0 - p))
        return np.where(rng.uniforms(count) < p, hi, lo)
    if kind == "pareto_symmetrized":
        (alpha,) = dist.params
        u = rng.uniforms(count)
        mag_lo = (2.0 * u) ** (-1.0 / alpha)
        mag_hi = (2.0 * (1.0 - u)) ** (-1.0 / alpha)
        x = np.where(u < 0.5, -mag_lo, mag_hi)
        return x * math.sqrt((alpha - 2.0) / alpha)
    if kind == "real_gaussian":
        z0, _ = _polar_pairs(rng, count)
        return z0
    if kind == "complex_gaussian":
        z0, z1 = _polar_pairs(rng, count)
        return (z0 + 1j * z1) / math.sqrt(2.0)
    raise ConfigurationError(f"unknown scalar distribution kind {kind!r}")


def sample_scalar(dist, rng):
    """One draw from ``dist`` as a complex number."""
    return complex(sample_array(dist, rng, 1)[0])


def build_iid_matrix(n, dist, rng):
    """n-by-n matrix of iid entries, filled row-major from the stream."""
    if n < 1:
        raise ConfigurationError("matrix size must be at least 1")
    return sample_array(dist, rng, n * n).reshape(n, n)


@dataclass(frozen=True)
class BaseMatrixSpec:
    """Deterministic base matrix family M_n.

    ``hs_bound`` declares a bound on (1/n^2) ||M_n||_2^2 that every
    realization must satisfy, for every n.  With ``scale_by_sqrt_n`` the
    two-block diagonal realizes sqrt(n) * diag(a,..,a,b,..,b), the form
    that survives the global 1/sqrt(n) normalization as an O(1) shift.
    """

    kind: str
    a: float = 0.0
    b: float = 0.0
    split: float = 0.5
    rank: int = 0
    magnitude: float = 0.0
    atoms: tuple = ()
    entries: tuple = ()
    scale_by_sqrt_n: bool = False

    @property
    def hs_bound(self):
        if self.kind == "zero":
            return 0.0
        if self.kind == "two_block_diagonal":
            return self.split * self.a**2 + (1.0 - self.split) * self.b**2
        if self.kind == "low_rank":
            return self.magnitude**2
        if self.kind == "diagonal_from_measure":
            return max(abs(t) ** 2 for t in self.atoms)
        if self.kind == "explicit":
            m = np.asarray(self.entries)
            return float(np.sum(np.abs(m) ** 2)) / m.shape[0] ** 2
        raise ConfigurationError(f"unknown base matrix kind {self.kind!r}")


def base_zero():
    return BaseMatrixSpec("zero")


def base_two_block(a, b, split=0.5, scale_by_sqrt_n=False):
    if not 0.0 <= split <= 1.0:
        raise ConfigurationError("split fraction must lie in [0, 1]")
    return BaseMatrixSpec("two_block_diagonal", a=float(a), b=float(b), split=float(split),
                          scale_by_sqrt_n=bool(scale_by_sqrt_n))


def base_low_rank(rank, magnitude):
    if rank < 1:
        raise ConfigurationError("low_rank requires rank >= 1")
    return BaseMatrixSpec("low_rank", rank=int(rank), magnitude=float(magnitude))


def base_diagonal_from_measure(atoms):
    atoms = tuple(complex(t) for t in atoms)
    if not atoms:
        raise ConfigurationError("diagonal_from_measure needs a nonempty atom list")
    return BaseMatrixSpec("diagonal_from_measure", atoms=atoms)


def base_explicit(entries):
    m = np.asarray(entries)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ConfigurationError("explicit base matrix must be square")
    return BaseMatrixSpec("explicit", entries=tuple(map(tuple, m.tolist())))


def build_base_matrix(spec, n, rng=None):
    """Realize a BaseMatrixSpec at size n.

    diagonal_from_measure draws n iid atoms from the supplied list and
    scales the diagonal by sqrt(n); it therefore requires an RngStream.
    All other kinds are deterministic in (spec, n).
    """
    if n < 1:
        raise ConfigurationError("matrix size must be at least 1")
    if spec.kind == "zero":
        return np.zeros((n, n))
    if spec.kind == "two_block_diagonal":
        n_a = int(round(spec.split * n))
        d = np.concatenate([np.full(n_a, spec.a), np.full(n - n_a, spec.b)])
        if spec.scale_by_sqrt_n:
            d = d * math.sqrt(n)
        return np.diag(d)
    if spec.kind == "low_rank":
        if spec.rank > n:
            raise ConfigurationError("low_rank rank exceeds matrix size")
        i = np.arange(n)
        m = np.zeros((n, n))
        # blocks of constant entries with disjoint supports: rank exactly `rank`
        for k in range(spec.rank):
            mask = (i % spec.rank) == k
            m[np.ix_(mask, mask)] = spec.magnitude
        return m
    if spec.kind == "diagonal_from_measure":
        if rng is None:
            raise ConfigurationError("diagonal_from_measure requires an RngStream")
        atoms = np.asarray(spec.atoms)
        idx = (rng.uniforms(n) * len(atoms)).astype(np.int64)
        return np.diag(atoms[idx] * math.sqrt(n))
    if spec.kind == "explicit":
        m = np.asarray(spec.entries)
        if m.shape != (n, n):
            raise ConfigurationError(f"explicit entries have shape {m.shape}, expected {(n, n)}")
        return m.copy()
    raise ConfigurationError(f"unknown base matrix kind {spec.kind!r}")


ASSEMBLY_MODES = ("shift", "sandwich", "hadamard_profile")


def _require_invertible(name, m):
    s = np.linalg.svd(m, compute_uv=False)
    scale = np.linalg.norm(m)  # Hilbert-Schmidt
    if scale == 0.0 or s[-1] < 1e-12 * scale:
        raise DegenerateInputError(f"{name} is numerically singular (smallest sv {s[-1]:.3e})")


def assemble(m_base, x, mode, k=None, l=None, c=None):
    """Combine base and noise matrices; no 1/sqrt(n) is applied here.

    shift             -> M + X
    sandwich          -> M + K X L       (K, L invertible)
    hadamard_profile  -> M + C * X       (entrywise; C positive entries)
    """
    m_base = np.asarray(m_base)
    x = np.asarray(x)
    if mode not in ASSEMBLY_MODES:
        raise ConfigurationError(f"unknown assembly mode {mode!r}")
    if m_base.shape != x.shape or m_base.ndim != 2 or m_base.shape[0] != m_base.shape[1]:
        raise ConfigurationError("base and noise must be square matrices of equal size")
    if mode == "shift":
        return m_base + x
    if mode == "sandwich":
        if k is None or l is None:
            raise ConfigurationError("sandwich mode requires K and L")
        k = np.asarray(k)
        l = np.asarray(l)
        if k.shape != x.shape or l.shape != x.shape:
            raise ConfigurationError("K and L must match the noise matrix size")
        _require_invertible("K", k)
        _require_invertible("L", l)
        return m_base + k @ x @ l
    if c is None:
        raise ConfigurationError("hadamard_profile mode requires a profile matrix C")
    c = np.asarray(c)
    if c.shape != x.shape:
        raise ConfigurationError("profile C must match the noise matrix size")
    if np.iscomplexobj(c) or np.min(c) <= 0.0:
        raise ConfigurationError("profile C must have real entries in [a, b] with a > 0")
    return m_base + c * x


@dataclass(frozen=True)
class KappaPoint:
    z: complex
    w: complex
    truncated_moment: float
    lower_bound: float
    margin: float
    margin_sigma: float


@dataclass(frozen=True)
class KappaReport:
    """Monte Carlo audit of the kappa-controlled second moment condition."""

    kind: str
    kappa: float
    n_samples: int
    second_moment: float
    points: tuple
    worst_margin: float
    worst_margin_sigma: float

    @property
    def second_moment_ok(self):
        return self.second_moment <= self.kappa

    @property
    def all_margins_nonnegative(self):
        return self.worst_margin >= 0.0


def kappa_controlled_estimate(dist, kappa, n_samples, zw_pairs, rng):
    """Estimate E|a|^2 and E Re(z a - w)^2 1{|a| <= kappa} over a (z, w) grid.

    The margin at each grid point is the estimate minus the lower bound
    Re(z)^2 / kappa; ``margin_sigma`` is the Monte Carlo standard error
    of that estimate, so a trustworthy pass needs margin >= -3 sigma.
    """
    if kappa < 1.0:
        raise ConfigurationError("kappa must be at least 1")
    if n_samples < 10_000:
        raise ConfigurationError("kappa audit needs at least 10^4 samples")
    a = sample_array(dist, rng, n_samples).astype(np.complex128)
    second_moment = float(np.mean(np.abs(a) ** 2))
    inside = np.abs(a) <= kappa
    points = []
    worst = None
    for z, w in zw_pairs:
        z = complex(z)
        w = complex(w)
        y = np.real(z * a - w) ** 2 * inside
        est = float(np.mean(y))
        sigma = float(np.std(y) / math.sqrt(n_samples))
        bound = (z.real**2) / kappa
        point = KappaPoint(z, w, est, bound, est - bound, sigma)
        points.append(point)
        if worst is None or point.margin < worst.margin:
            worst = point
    return KappaReport(dist.kind, float(kappa), int(n_samples), second_moment,
                       tuple(points), worst.margin, worst.margin_sigma)
