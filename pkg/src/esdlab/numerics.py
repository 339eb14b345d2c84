"""Dense complex linear algebra kernels and exact identity verifiers.

Eigenvalues and singular values are delegated to LAPACK through numpy;
the row-distance and leave-one-out kernels are implemented directly so
that the determinant and negative-second-moment identities are checked
through genuinely distinct computational routes.

Singular matrices never yield a fake large-negative log-determinant:
``log_abs_det`` returns the explicit IEEE -inf marker (MINUS_INFINITY)
whenever a singular value underflows the representable range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DegenerateInputError, NumericalFailureError

MINUS_INFINITY = float("-inf")


def as_matrix(a):
    """Validate and return a 2-D matrix with finite entries."""
    m = np.asarray(a)
    if m.dtype.kind not in "fc":
        m = m.astype(np.complex128 if np.iscomplexobj(m) else np.float64)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ConfigurationError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ConfigurationError("matrix entries must be finite (no NaN/Inf)")
    return m


def _require_square(m):
    if m.shape[0] != m.shape[1]:
        raise ConfigurationError(f"operation requires a square matrix, got {m.shape}")


def eigenvalues(a):
    """All eigenvalues with multiplicity, unsorted (multiset semantics)."""
    m = as_matrix(a)
    _require_square(m)
    try:
        return np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigenvalue iteration failed: {exc}") from exc


def singular_values(a):
    """Singular values sorted decreasing, clamped at zero."""
    m = as_matrix(a)
    try:
        s = np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"singular value iteration failed: {exc}") from exc
    return np.maximum(s, 0.0)


def hs_norm(a):
    """Hilbert-Schmidt (Frobenius) norm."""
    return float(np.linalg.norm(as_matrix(a)))


def row_distances(a):
    """d_i = distance from row i to the span of rows 1..i-1.

    Modified Gram-Schmidt with one reorthogonalization pass; d_1 is the
    norm of the first row.  Rank-deficient prefixes produce d_i near 0,
    which is data, not an error; such rows contribute no new direction.
    """
    m = as_matrix(a).astype(np.complex128, copy=False)
    _require_square(m)
    n = m.shape[0]
    scale = np.linalg.norm(m)
    q = np.empty((n, n), dtype=np.complex128)
    used = 0
    d = np.empty(n)
    for i in range(n):
        v = m[i].copy()
        for _ in range(2):  # one reorthogonalization pass
            if used:
                v -= (q[:used].conj() @ v) @ q[:used]
        d[i] = np.linalg.norm(v)
        if d[i] > 1e-14 * max(scale, 1e-300):
            q[used] = v / d[i]
            used += 1
    return d


def leave_one_out_distances(a):
    """dist(row_j, span of the other rows) for a full-rank n'-by-n matrix.

    Computed by orthogonal projection against a QR basis of the other
    rows, independently of any singular value computation.
    """
    m = as_matrix(a).astype(np.complex128, copy=False)
    rows, cols = m.shape
    if rows > cols:
        raise ConfigurationError("leave-one-out requires n' <= n (wide or square matrix)")
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0.0 or s[-1] <= 1e-10 * s[0]:
        raise DegenerateInputError("leave-one-out identity requires a full-rank matrix")
    d = np.empty(rows)
    idx = np.arange(rows)
    for j in range(rows):
        others = m[idx != j]
        qmat, _ = np.linalg.qr(others.T)  # orthonormal basis of the row span
        v = m[j]
        d[j] = np.linalg.norm(v - qmat @ (qmat.conj().T @ v))
    return d


def log_abs_det(a, method="via_singular"):
    """log|det A| as a sum of log singular values or log row distances.

    Returns MINUS_INFINITY when the matrix is singular to working
    precision (any factor below 1e-300 times the largest).
    """
    if method == "via_singular":
        factors = singular_values(a)
    elif method == "via_distances":
        factors = np.sort(row_distances(a))[::-1]
    else:
        raise ConfigurationError(f"unknown method {method!r}")
    top = factors[0]
    if top == 0.0 or factors[-1] < 1e-300 * top:
        return MINUS_INFINITY
    return float(np.sum(np.log(factors)))


@dataclass(frozen=True)
class ResidualReport:
    """Worst slack-adjusted violation of a chained inequality."""

    name: str
    worst_violation: float
    slack: float

    @property
    def ok(self):
        return self.worst_violation <= self.slack


def verify_interlacing(a, k):
    """Check sigma_i(A) >= sigma_i(A') >= sigma_{i+k}(A) for the first n-k rows."""
    m = as_matrix(a)
    _require_square(m)
    n = m.shape[0]
    if not 1 <= k < n:
        raise ConfigurationError("interlacing requires 1 <= k < n")
    s = singular_values(m)
    s_sub = singular_values(m[: n - k])
    slack = 1e-9 * s[0]
    upper = np.max(s_sub - s[: n - k])        # sigma_i(A') <= sigma_i(A)
    lower = np.max(s[k:] - s_sub)             # sigma_{i+k}(A) <= sigma_i(A')
    return ResidualReport("cauchy_interlacing", float(max(upper, lower)), slack)


def _log_cumsum(values):
    with np.errstate(divide="ignore"):
        return np.cumsum(np.log(values))


@dataclass(frozen=True)
class WeylReport:
    """Violations of the eigenvalue/singular-value comparison inequalities.

    ``second_moment_violation`` is relative to ||A||_2^2; the product
    violations are measured in log space.
    """

    second_moment_violation: float
    product_violation: float
    second_moment_slack: float
    product_slack: float

    @property
    def ok(self):
        return (self.second_moment_violation <= self.second_moment_slack
                and self.product_violation <= self.product_slack)


def verify_weyl(a):
    """Check the second-moment and product comparison inequalities.

    Second moment: sum |lambda_j|^2 <= sum sigma_j^2 = ||A||_2^2.
    Products, with |lambda| ascending and sigma descending: every prefix
    product of |lambda| is at most the prefix product of sigma, and every
    suffix product of sigma is at most the suffix product of |lambda|.
    """
    m = as_matrix(a)
    _require_square(m)
    n = m.shape[0]
    lam = np.sort(np.abs(eigenvalues(m)))     # ascending
    sig = singular_values(m)                  # descending
    hs2 = hs_norm(m) ** 2
    mom_scale = max(hs2, 1.0)
    second_moment_violation = float(max(
        (np.sum(lam**2) - np.sum(sig**2)) / mom_scale,
        abs(np.sum(sig**2) - hs2) / mom_scale,
    ))
    with np.errstate(invalid="ignore"):
        pre = _log_cumsum(lam) - _log_cumsum(sig)    # log prefix(lam) - log prefix(sig)
        suf = _log_cumsum(sig[::-1]) - _log_cumsum(lam[::-1])
    # An exact-zero eigenvalue suffix forces a zero determinant, so the
    # matching sigma suffix vanishes up to rounding; those comparisons
    # (and -inf/NaN prefixes from zero products) are trivially satisfied.
    suf = suf[np.isfinite(_log_cumsum(lam[::-1]))]
    pre = pre[np.isfinite(pre)]
    suf = suf[np.isfinite(suf)]
    product_violation = 0.0
    if pre.size:
        product_violation = max(product_violation, float(np.max(pre)))
    if suf.size:
        product_violation = max(product_violation, float(np.max(suf)))
    return WeylReport(second_moment_violation, product_violation,
                      second_moment_slack=1e-8, product_slack=1e-8 * n)
