"""Symmetric-matrix domain: determinant powers with controlled branches,
Wishart density and sampling, Monte Carlo over the matrix space, and
low-dimensional eigenvalue integrals.

Measure convention, used consistently across this package: integrals over
d x d real symmetric matrices are taken against Lebesgue measure on the
d(d+1)/2 independent upper-triangle entries, dT = prod_{i<=j} dT_ij.  The
multivariate gamma function and every matrix closed form in `identities`
are normalized under this convention; silent factor-of-2 errors between
conventions are the classic failure mode, hence the single fixed choice.

Branch handling: det(I + i S T)^(-a) is evaluated through the eigenvalues
l_j of S^(1/2) T S^(1/2), as -a * sum_j log(1 + i l_j) with each factor in
the right half-plane, so the principal logarithm per factor is globally
continuous in T.  This is the load-bearing correctness decision for every
matrix-variate integrand here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (DegenerateProposalError, DivergentHintError, DomainError)
from .quadrature import (DecayHint, IntegralEstimate, integrate_half_line,
                         integrate_real_line)
from .special import log_multivariate_gamma

__all__ = [
    "SymMatrix", "ComplexSymMatrix", "MCEstimate", "is_positive_definite",
    "log_det_power", "det_power", "log_det_complex_sym", "wishart_log_density",
    "sample_wishart", "sample_wishart_batch", "GaussianEntriesProposal",
    "StudentTEntriesProposal", "WishartProposal", "mc_integrate_sym",
    "eigen_integrate", "orthogonal_invariance_reduce", "vandermonde",
]


class SymMatrix:
    """Dense real symmetric d x d matrix, exact symmetry by construction.

    Entries are stored as the upper triangle (row-major, diagonal included);
    the reconstructed array mirrors them, so T[i, j] == T[j, i] bitwise.
    """

    __slots__ = ("d", "_upper")

    def __init__(self, entries):
        a = np.asarray(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError(f"SymMatrix needs a square array, got {a.shape}")
        scale = max(1.0, float(np.abs(a).max()))
        if np.abs(a - a.T).max() > 1e-12 * scale:
            raise DomainError("SymMatrix input is not symmetric")
        self.d = a.shape[0]
        self._upper = a[np.triu_indices(self.d)].copy()

    @classmethod
    def identity(cls, d: int) -> "SymMatrix":
        return cls(np.eye(d))

    @classmethod
    def diag(cls, values) -> "SymMatrix":
        return cls(np.diag(np.asarray(values, dtype=float)))

    @classmethod
    def from_upper(cls, d: int, coords) -> "SymMatrix":
        out = np.zeros((d, d))
        iu = np.triu_indices(d)
        out[iu] = coords
        out.T[iu] = coords
        return cls(out)

    @property
    def array(self) -> np.ndarray:
        out = np.zeros((self.d, self.d))
        iu = np.triu_indices(self.d)
        out[iu] = self._upper
        out.T[iu] = self._upper
        return out

    @property
    def upper(self) -> np.ndarray:
        return self._upper.copy()

    def __repr__(self) -> str:
        return f"SymMatrix(d={self.d})"


@dataclass
class ComplexSymMatrix:
    """Complex symmetric matrix S = real + i*imag with both parts symmetric."""
    real: SymMatrix
    imag: SymMatrix

    def __post_init__(self):
        if self.real.d != self.imag.d:
            raise DomainError("ComplexSymMatrix parts must share the dimension")

    @property
    def d(self) -> int:
        return self.real.d

    @property
    def array(self) -> np.ndarray:
        return self.real.array + 1j * self.imag.array


@dataclass
class MCEstimate:
    """Importance-sampling estimate with its standard error."""
    value: complex
    standard_error: float
    samples: int
    seed: int


def _as_sym(S) -> SymMatrix:
    return S if isinstance(S, SymMatrix) else SymMatrix(S)


def is_positive_definite(S) -> bool:
    """True iff the symmetric factorization has all positive pivots."""
    try:
        np.linalg.cholesky(_as_sym(S).array)
        return True
    except np.linalg.LinAlgError:
        return False


def _sqrt_pd(S: SymMatrix) -> np.ndarray:
    w, v = np.linalg.eigh(S.array)
    if w[0] <= 0:
        raise DomainError("matrix is not positive definite")
    return (v * np.sqrt(w)) @ v.T


def _log1p_i(lam: np.ndarray, sign: float) -> complex:
    """sum_j log(1 + i*sign*lam_j), principal per factor (Re = 1 > 0)."""
    re = 0.5 * np.log1p(lam * lam).sum()
    im = sign * np.arctan(lam).sum()
    return complex(re, im)


def log_det_power(Sigma, T, alpha, sign: int = 1) -> complex:
    """log of det(I + sign*i*Sigma*T)^(-alpha) with the continuous branch."""
    Sigma = _as_sym(Sigma)
    T = _as_sym(T)
    if Sigma.d != T.d:
        raise DomainError("dimension mismatch between Sigma and T")
    root = _sqrt_pd(Sigma)
    lam = np.linalg.eigvalsh(root @ T.array @ root)
    return -complex(alpha) * _log1p_i(lam, float(sign))


def det_power(Sigma, T, alpha, sign: int = 1) -> complex:
    return complex(np.exp(log_det_power(Sigma, T, alpha, sign)))


def _log_det_power_batch(root: np.ndarray, Ts: np.ndarray, alpha: complex,
                         sign: float) -> np.ndarray:
    """Batched log det(I + sign*i*Sigma*T)^(-alpha); root = Sigma^(1/2)."""
    W = np.einsum("ij,njk,kl->nil", root, Ts, root)
    lam = np.linalg.eigvalsh(W)
    logs = 0.5 * np.log1p(lam * lam).sum(axis=1) + 1j * sign * np.arctan(lam).sum(axis=1)
    return -complex(alpha) * logs


def log_det_complex_sym(S) -> complex:
    """log det S for complex symmetric S with Re(S) positive definite.

    Factoring det S = det A * prod(1 + i mu_j) with mu_j the (real)
    eigenvalues of A^(-1/2) B A^(-1/2) keeps every factor in the right
    half-plane, which pins the continuous branch.
    """
    if isinstance(S, SymMatrix):
        sign, logdet = np.linalg.slogdet(S.array)
        if sign <= 0:
            raise DomainError("matrix is not positive definite")
        return complex(logdet)
    if not isinstance(S, ComplexSymMatrix):
        raise DomainError("expected SymMatrix or ComplexSymMatrix")
    A, B = S.real.array, S.imag.array
    w, v = np.linalg.eigh(A)
    if w[0] <= 0:
        raise DomainError("Re(S) is not positive definite")
    inv_root = (v / np.sqrt(w)) @ v.T
    mu = np.linalg.eigvalsh(inv_root @ B @ inv_root)
    return complex(np.log(w).sum()) + _log1p_i(mu, 1.0)


# ----------------------------------------------------------------------
# Wishart distribution
# ----------------------------------------------------------------------

def wishart_log_density(alpha: float, Sigma, X) -> float:
    """Log density -a logdet(S) + (a-(d+1)/2) logdet(X) - tr(S^-1 X) - log G_d(a)."""
    Sigma = _as_sym(Sigma)
    X = _as_sym(X)
    d = Sigma.d
    if X.d != d:
        raise DomainError("dimension mismatch between Sigma and X")
    alpha = float(alpha)
    if alpha <= (d - 1) / 2:
        raise DomainError(f"wishart density needs alpha > (d-1)/2, got {alpha}")
    sgn_s, logdet_s = np.linalg.slogdet(Sigma.array)
    sgn_x, logdet_x = np.linalg.slogdet(X.array)
    if sgn_s <= 0 or not is_positive_definite(Sigma):
        raise DomainError("Sigma must be positive definite")
    if sgn_x <= 0 or not is_positive_definite(X):
        raise DomainError("X must be positive definite")
    trace = float(np.trace(np.linalg.solve(Sigma.array, X.array)))
    lg = log_multivariate_gamma(d, alpha).real
    return (-alpha * logdet_s + (alpha - (d + 1) / 2) * logdet_x - trace - lg)


def _wishart_log_density_batch(alpha: float, Sigma: SymMatrix,
                               Xs: np.ndarray) -> np.ndarray:
    d = Sigma.d
    _, logdet_s = np.linalg.slogdet(Sigma.array)
    sign_x, logdet_x = np.linalg.slogdet(Xs)
    inv_s = np.linalg.inv(Sigma.array)
    trace = np.einsum("ij,nji->n", inv_s, Xs)
    lg = log_multivariate_gamma(d, alpha).real
    out = -alpha * logdet_s + (alpha - (d + 1) / 2) * logdet_x - trace - lg
    out[sign_x <= 0] = -np.inf
    return out


def sample_wishart_batch(alpha: float, Sigma, rng, n: int) -> np.ndarray:
    """n draws from the density above via the Bartlett construction.

    Lower-triangular L with chi-square diagonal (2*alpha - (j-1) degrees of
    freedom on row j, 1-based) and standard normal subdiagonal entries;
    X = Sigma^(1/2) L L' Sigma^(1/2) / 2.  The 1/2 matches the etr(-S^-1 X)
    exponential rate; the d = 1 case reduces to Gamma(alpha, scale=Sigma).
    """
    Sigma = _as_sym(Sigma)
    d = Sigma.d
    alpha = float(alpha)
    if alpha <= (d - 1) / 2:
        raise DomainError(f"sample_wishart needs alpha > (d-1)/2, got {alpha}")
    dfs = 2.0 * alpha - np.arange(d)
    L = np.zeros((n, d, d))
    idx = np.arange(d)
    L[:, idx, idx] = np.sqrt(rng.chisquare(dfs, size=(n, d)))
    il = np.tril_indices(d, -1)
    if il[0].size:
        L[:, il[0], il[1]] = rng.standard_normal((n, il[0].size))
    A = _sqrt_pd(Sigma) / math.sqrt(2.0)
    AL = np.einsum("ij,njk->nik", A, L)
    X = np.einsum("nik,njk->nij", AL, AL)
    return 0.5 * (X + np.swapaxes(X, 1, 2))


def sample_wishart(alpha: float, Sigma, seed) -> SymMatrix:
    """One draw; seed may be an integer or a numpy Generator."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return SymMatrix(sample_wishart_batch(alpha, Sigma, rng, 1)[0])


# ----------------------------------------------------------------------
# Monte Carlo over the space of symmetric matrices
# ----------------------------------------------------------------------

def _coords_to_sym(coords: np.ndarray, d: int) -> np.ndarray:
    n, m = coords.shape
    out = np.zeros((n, d, d))
    iu = np.triu_indices(d)
    out[:, iu[0], iu[1]] = coords
    out[:, iu[1], iu[0]] = coords
    return out


@dataclass(frozen=True)
class GaussianEntriesProposal:
    """Independent N(0, scale^2) on each of the d(d+1)/2 coordinates."""
    scale: float

    def sample(self, rng, n: int, d: int) -> np.ndarray:
        m = d * (d + 1) // 2
        return _coords_to_sym(rng.standard_normal((n, m)) * self.scale, d)

    def logpdf(self, Ts: np.ndarray) -> np.ndarray:
        d = Ts.shape[1]
        iu = np.triu_indices(d)
        coords = Ts[:, iu[0], iu[1]]
        m = coords.shape[1]
        return (-0.5 * (coords / self.scale) ** 2
                - math.log(self.scale * math.sqrt(2 * math.pi))).sum(axis=1)


@dataclass(frozen=True)
class StudentTEntriesProposal:
    """Independent scaled Student-t (default 3 dof) on each coordinate.

    The heavy tail keeps importance weights bounded for integrands with
    algebraic decay, which a Gaussian proposal would underweight.
    """
    scale: float
    df: float = 3.0

    def _log_norm(self) -> float:
        v = self.df
        return (math.lgamma(0.5 * (v + 1)) - math.lgamma(0.5 * v)
                - 0.5 * math.log(v * math.pi) - math.log(self.scale))

    def sample(self, rng, n: int, d: int) -> np.ndarray:
        m = d * (d + 1) // 2
        return _coords_to_sym(rng.standard_t(self.df, (n, m)) * self.scale, d)

    def logpdf(self, Ts: np.ndarray) -> np.ndarray:
        d = Ts.shape[1]
        iu = np.triu_indices(d)
        x = Ts[:, iu[0], iu[1]] / self.scale
        v = self.df
        return (self._log_norm()
                - 0.5 * (v + 1) * np.log1p(x * x / v)).sum(axis=1)


@dataclass(frozen=True)
class WishartProposal:
    """Wishart importance law supported on the positive definite cone."""
    alpha: float
    Sigma: SymMatrix

    def sample(self, rng, n: int, d: int) -> np.ndarray:
        if self.Sigma.d != d:
            raise DomainError("WishartProposal dimension mismatch")
        return sample_wishart_batch(self.alpha, self.Sigma, rng, n)

    def logpdf(self, Ts: np.ndarray) -> np.ndarray:
        return _wishart_log_density_batch(self.alpha, self.Sigma, Ts)


_MC_CHUNK = 65_536


def mc_integrate_sym(g, d: int, proposal, n: int, seed: int,
                     batched: bool = False) -> MCEstimate:
    """Importance-sampling estimate of int g(T) dT over d x d symmetric T.

    dT is Lebesgue measure on the d(d+1)/2 upper-triangle coordinates.  The
    proposal must be strictly positive wherever g is nonzero; cone-supported
    proposals (WishartProposal) pair with cone-supported integrands.  With
    batched=True, g receives arrays of shape (k, d, d) and returns (k,).
    Chunking is fixed, so results are reproducible for a given (seed, n).
    """
    n = int(n)
    if n < 1000:
        raise DomainError("mc_integrate_sym requires n >= 1000")
    rng = np.random.default_rng(seed)
    sum_w = 0.0 + 0.0j
    sum_abs2 = 0.0
    done = 0
    while done < n:
        k = min(_MC_CHUNK, n - done)
        Ts = proposal.sample(rng, k, d)
        logq = proposal.logpdf(Ts)
        if batched:
            gv = np.asarray(g(Ts), dtype=complex)
        else:
            gv = np.array([g(Ts[i]) for i in range(k)], dtype=complex)
        w = gv * np.exp(-logq)
        if not np.all(np.isfinite(w.real) & np.isfinite(w.imag)):
            raise DegenerateProposalError(
                "non-finite importance weight; proposal does not cover g")
        sum_w += w.sum()
        sum_abs2 += float((w.real ** 2 + w.imag ** 2).sum())
        done += k
    mean = sum_w / n
    var = max(sum_abs2 / n - abs(mean) ** 2, 0.0)
    se = math.sqrt(var / n)
    if not math.isfinite(se):
        raise DegenerateProposalError("variance estimate is not finite")
    return MCEstimate(complex(mean), se, n, int(seed))


# ----------------------------------------------------------------------
# Eigenvalue integrals
# ----------------------------------------------------------------------

def vandermonde(ts) -> float:
    """prod_{j<k} |t_j - t_k| (empty product = 1)."""
    out = 1.0
    ts = tuple(ts)
    for j in range(len(ts)):
        for k in range(j + 1, len(ts)):
            out *= abs(ts[j] - ts[k])
    return out


def eigen_integrate(h, d: int, rel_tol: float = 1e-6, decay_p: float = 4.0,
                    abs_tol: float = 0.0,
                    budget: int = 2_000_000) -> IntegralEstimate:
    """Integral over R^d of a symmetric integrand h(t_1, ..., t_d), d <= 3.

    Exploits permutation symmetry by integrating the ordered sector
    t_1 < ... < t_d and multiplying by d!.  decay_p is the per-coordinate
    algebraic decay of h's non-Vandermonde factors and must exceed d (the
    absolute-convergence condition once Vandermonde growth is accounted).
    Nested adaptive quadrature; cost grows geometrically with d.
    """
    if d not in (1, 2, 3):
        raise DomainError("eigen_integrate supports d in {1, 2, 3}")
    if not decay_p > d:
        raise DivergentHintError(
            f"eigen integral needs per-factor decay p > d, got p={decay_p}, d={d}")
    if d == 1:
        est = integrate_real_line(lambda t: h((t,)), DecayHint(p=decay_p),
                                  rel_tol=rel_tol, abs_tol=abs_tol, budget=budget)
        return est

    inner_rel = max(rel_tol / 20.0, 1e-12)
    evals = 0

    if d == 2:
        def outer(t2: float) -> complex:
            nonlocal evals
            inner = integrate_half_line(
                lambda u: h((t2 - u, t2)),
                DecayHint(p=decay_p - 1.0, endpoint_exponent=1.0),
                rel_tol=inner_rel, budget=budget)
            evals += inner.evaluations
            return inner.value

        est = integrate_real_line(outer, DecayHint(p=decay_p - 1.0),
                                  rel_tol=rel_tol, abs_tol=abs_tol, budget=budget)
        return IntegralEstimate(2.0 * est.value, 2.0 * est.error_estimate,
                                evals, est.converged)

    def outer3(t3: float) -> complex:
        nonlocal evals

        def middle(u2: float) -> complex:
            t2 = t3 - u2
            inner = integrate_half_line(
                lambda u1: h((t2 - u1, t2, t3)),
                DecayHint(p=decay_p - 2.0, endpoint_exponent=1.0),
                rel_tol=inner_rel * 3, budget=budget)
            return inner.value

        mid = integrate_half_line(middle,
                                  DecayHint(p=decay_p - 2.0, endpoint_exponent=1.0),
                                  rel_tol=inner_rel, budget=budget)
        evals += mid.evaluations
        return mid.value

    est = integrate_real_line(outer3, DecayHint(p=decay_p - 2.0),
                              rel_tol=rel_tol, abs_tol=abs_tol, budget=budget)
    return IntegralEstimate(6.0 * est.value, 6.0 * est.error_estimate,
                            evals, est.converged)


@dataclass
class ReducedIntegrand:
    """Eigenvalue form of an orthogonally invariant matrix integrand."""
    constant: float
    h: Callable[[tuple], complex]
    weighted: Callable[[tuple], complex]  # h times the Vandermonde factor


def orthogonal_invariance_reduce(g, d: int) -> ReducedIntegrand:
    """Reduce int g(T) dT, g(HTH') = g(T), to an eigenvalue integral.

    Returns constant and h with  int g dT = constant * int h(t) prod|t_j-t_k| dt,
    constant = pi^(d^2/2) / (d! Gamma_d(d/2)).
    """
    if d < 1:
        raise DomainError("orthogonal_invariance_reduce requires d >= 1")
    log_c = (0.5 * d * d * math.log(math.pi) - math.lgamma(d + 1)
             - log_multivariate_gamma(d, d / 2.0).real)
    constant = math.exp(log_c)

    def h(ts) -> complex:
        return complex(g(SymMatrix(np.diag(np.asarray(ts, dtype=float)))))

    def weighted(ts) -> complex:
        return vandermonde(ts) * h(ts)

    return ReducedIntegrand(constant, h, weighted)
