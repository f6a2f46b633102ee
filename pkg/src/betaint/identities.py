"""Identity registry: closed-form right-hand sides, case validation, LHS
dispatch to the integration engines, and pass/fail verdicts.

Thirteen identity ids are registered.  Scalar ids integrate over the real
line or half line; matrix ids use Monte Carlo over symmetric matrices and
eigenvalue quadrature.  Ids ending in "-0" are vanishing integrals whose
right-hand side is identically zero; they are judged against an absolute
floor (quadrature) or a standard-error multiple (Monte Carlo), because
relative error is meaningless at zero.

    CB-1  Cauchy's beta integral
    CB-0  Cauchy beta companion, vanishing
    F11-1 Kummer 1F1 Parseval integral (beta-density pair)
    F11-0 Kummer 1F1 companion, vanishing
    F21-1 Gauss 2F1-weighted Cauchy beta integral
    BK-1  Modified-Bessel product moment (Basset pair)
    WS-1  Weber-Schafheitlin J-product integral
    GD-1  Cone gamma function vs its defining integral
    WI-1  Wishart normalization integral
    MC-1  Cauchy beta integral on the positive definite cone
    MC-0  Matrix companion, vanishing
    CS-1  Cauchy-Selberg eigenvalue integral
    CS-0  Cauchy-Selberg companion, vanishing

All gamma-ratio right-hand sides are evaluated in log space with a single
final exponentiation; multivariate gamma factors overflow doubles already
at moderate dimension, ratios do not.
"""

from __future__ import annotations

import cmath
import hashlib
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BetaIntError, DomainError
from .matrix import (ComplexSymMatrix, StudentTEntriesProposal, SymMatrix,
                     WishartProposal, _log_det_power_batch, _sqrt_pd,
                     eigen_integrate, is_positive_definite,
                     log_det_complex_sym, mc_integrate_sym, vandermonde)
from .quadrature import DecayHint, integrate_half_line, integrate_real_line
from .special import (bessel_j, bessel_k, gauss_2f1, is_nonpositive_integer,
                      kummer_1f1, log_gamma, log_multivariate_gamma)

IDENTITY_ORDER = ("CB-1", "CB-0", "F11-1", "F11-0", "F21-1", "BK-1", "WS-1",
                  "GD-1", "WI-1", "MC-1", "MC-0", "CS-1", "CS-0")

_DEFAULT_SAMPLES = {
    "GD-1": 400_000, "WI-1": 400_000, "MC-1": 400_000, "MC-0": 200_000,
    "CS-1": 400_000, "CS-0": 200_000,
}


# ----------------------------------------------------------------------
# Closed-form right-hand sides (log space)
# ----------------------------------------------------------------------

def _clog(z) -> complex:
    z = complex(z)
    if z == 0:
        raise DomainError("log of zero in a closed-form evaluation")
    return cmath.log(z)


def rhs_cauchy_beta(alpha1, alpha2, sigma1, sigma2) -> complex:
    """2 pi G(a1+a2-1)/(G(a1)G(a2)) s1^(a2-1) s2^(a1-1) / (s1+s2)^(a1+a2-1)."""
    a1, a2 = complex(alpha1), complex(alpha2)
    s1, s2 = complex(sigma1), complex(sigma2)
    _require((a1 + a2).real > 1, "Re(alpha1+alpha2) > 1")
    _require(s1.real > 0 and s2.real > 0, "Re(sigma1) > 0 and Re(sigma2) > 0")
    log = (math.log(2 * math.pi) + log_gamma(a1 + a2 - 1)
           - log_gamma(a1) - log_gamma(a2)
           + (a2 - 1) * _clog(s1) + (a1 - 1) * _clog(s2)
           - (a1 + a2 - 1) * _clog(s1 + s2))
    return cmath.exp(log)


def rhs_f11_parseval(alpha1, sigma1, alpha2, sigma2) -> complex:
    """Gamma ratio of the beta-density Parseval identity."""
    a1, s1 = complex(alpha1), complex(sigma1)
    a2, s2 = complex(alpha2), complex(sigma2)
    _require((a1 + a2).real > 1, "Re(alpha1+alpha2) > 1")
    _require((s1 + s2).real > 1, "Re(sigma1+sigma2) > 1")
    _require((a1 + s1).real > 0 and (a2 + s2).real > 0,
             "Re(alpha_j+sigma_j) > 0")
    log = (log_gamma(a1 + a2 - 1) + log_gamma(s1 + s2 - 1)
           + log_gamma(a1 + s1) + log_gamma(a2 + s2)
           - log_gamma(a1 + a2 + s1 + s2 - 2)
           - log_gamma(a1) - log_gamma(s1) - log_gamma(a2) - log_gamma(s2))
    return cmath.exp(log)


def rhs_f21_weighted(alpha1, alpha2, sigma1, sigma2, gamma1, gamma2, theta) -> complex:
    """(1/2pi) rhs_cauchy_beta times 2F1(g1, a1+a2-1; g2; (1/th)/(1/s1+1/s2))."""
    a1, a2 = complex(alpha1), complex(alpha2)
    s1, s2 = complex(sigma1), complex(sigma2)
    g1, g2, th = complex(gamma1), complex(gamma2), complex(theta)
    _require(not is_nonpositive_integer(g2),
             "gamma2 must not be a nonpositive integer")
    _require(th.real > s2.real > 0, "Re(theta) > Re(sigma2) > 0")
    w = (1 / th) / (1 / s1 + 1 / s2)
    core = rhs_cauchy_beta(a1, a2, s1, s2) / (2 * math.pi)
    return core * gauss_2f1(g1, a1 + a2 - 1, g2, w)


def rhs_bessel_k_product(nu1, nu2) -> complex:
    """2^(n1+n2-2) sqrt(pi) G(n1+n2+1/2)/G(n1+n2+1) G(n1+1/2) G(n2+1/2)."""
    n1, n2 = complex(nu1), complex(nu2)
    _require(n1.real > -0.5 and n2.real > -0.5, "Re(nu_j) > -1/2")
    _require((n1 + n2).real > -1, "Re(nu1+nu2) > -1")
    log = ((n1 + n2 - 2) * math.log(2) + 0.5 * math.log(math.pi)
           + log_gamma(n1 + n2 + 0.5) - log_gamma(n1 + n2 + 1)
           + log_gamma(n1 + 0.5) + log_gamma(n2 + 0.5))
    return cmath.exp(log)


def rhs_weber_schafheitlin(nu1, nu2) -> complex:
    """sqrt(pi) G(n1+n2) / (2^(n1+n2) G(n1+n2+1/2) G(n1+1/2) G(n2+1/2))."""
    n1, n2 = complex(nu1), complex(nu2)
    _require((n1 + n2).real > 0, "Re(nu1+nu2) > 0")
    log = (0.5 * math.log(math.pi) + log_gamma(n1 + n2)
           - (n1 + n2) * math.log(2) - log_gamma(n1 + n2 + 0.5)
           - log_gamma(n1 + 0.5) - log_gamma(n2 + 0.5))
    return cmath.exp(log)


def _log_det_sym_or_complex(S) -> complex:
    return log_det_complex_sym(S)


def log_rhs_matrix_cauchy_beta(d: int, alpha1, alpha2, Sigma1, Sigma2) -> complex:
    """Log of the cone Cauchy beta closed form, 2^d pi^(d(d+1)/2) times the
    Gamma_d ratio times the det-power ratio.

    The constant is normalized for dT = Lebesgue measure on the d(d+1)/2
    upper-triangle coordinates; see the decomposition constant in
    `matrix.orthogonal_invariance_reduce` for the consistency relation.
    """
    a1, a2 = complex(alpha1), complex(alpha2)
    _require((a1 + a2).real > d, "Re(alpha1+alpha2) > d")
    h = (d + 1) / 2
    lds1 = _log_det_sym_or_complex(Sigma1)
    lds2 = _log_det_sym_or_complex(Sigma2)
    if isinstance(Sigma1, ComplexSymMatrix) or isinstance(Sigma2, ComplexSymMatrix):
        s_sum = ComplexSymMatrix(
            SymMatrix(_re_part(Sigma1) + _re_part(Sigma2)),
            SymMatrix(_im_part(Sigma1) + _im_part(Sigma2)))
        lds12 = log_det_complex_sym(s_sum)
    else:
        lds12 = log_det_complex_sym(SymMatrix(Sigma1.array + Sigma2.array))
    return (d * math.log(2) + 0.5 * d * (d + 1) * math.log(math.pi)
            + log_multivariate_gamma(d, a1 + a2 - h)
            - log_multivariate_gamma(d, a1) - log_multivariate_gamma(d, a2)
            + (a2 - h) * lds1 + (a1 - h) * lds2 - (a1 + a2 - h) * lds12)


def _re_part(S) -> np.ndarray:
    return S.real.array if isinstance(S, ComplexSymMatrix) else S.array


def _im_part(S) -> np.ndarray:
    return S.imag.array if isinstance(S, ComplexSymMatrix) else np.zeros_like(S.array)


def rhs_matrix_cauchy_beta(d: int, alpha1, alpha2, Sigma1, Sigma2) -> complex:
    return cmath.exp(log_rhs_matrix_cauchy_beta(d, alpha1, alpha2, Sigma1, Sigma2))


def log_rhs_cauchy_selberg(d: int, alpha1, alpha2, sigma1, sigma2) -> complex:
    """Log of the Cauchy-Selberg closed form,
    d! 2^d pi^(d/2) Gamma_d(d/2) times the Gamma_d ratio times sigma powers."""
    a1, a2 = complex(alpha1), complex(alpha2)
    s1, s2 = complex(sigma1), complex(sigma2)
    _require((a1 + a2).real > d, "Re(alpha1+alpha2) > d")
    _require(s1.real > 0 and s2.real > 0, "Re(sigma_j) > 0")
    h = (d + 1) / 2
    m = d * (d + 1) / 2
    return (math.lgamma(d + 1) + d * math.log(2) + 0.5 * d * math.log(math.pi)
            + log_multivariate_gamma(d, d / 2)
            + log_multivariate_gamma(d, a1 + a2 - h)
            - log_multivariate_gamma(d, a1) - log_multivariate_gamma(d, a2)
            + (a2 * d - m) * _clog(s1) + (a1 * d - m) * _clog(s2)
            - ((a1 + a2) * d - m) * _clog(s1 + s2))


def rhs_cauchy_selberg(d: int, alpha1, alpha2, sigma1, sigma2) -> complex:
    return cmath.exp(log_rhs_cauchy_selberg(d, alpha1, alpha2, sigma1, sigma2))


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise DomainError(f"hypothesis violated: {what}")


# ----------------------------------------------------------------------
# Cases, tolerances, records
# ----------------------------------------------------------------------

@dataclass
class ToleranceSpec:
    """Verdict tolerances; engines run tighter than these by a fixed margin."""
    rel_tol: float = 1e-6
    abs_floor: float = 1e-8
    mc_sigma_multiplier: float = 4.0

    def __post_init__(self):
        if min(self.rel_tol, self.abs_floor, self.mc_sigma_multiplier) <= 0:
            raise DomainError("tolerances must be positive")


_SCALAR_PARAMS = {
    "CB-1": ("alpha1", "alpha2", "sigma1", "sigma2"),
    "CB-0": ("alpha1", "alpha2", "sigma1", "sigma2"),
    "F11-1": ("alpha1", "sigma1", "alpha2", "sigma2"),
    "F11-0": ("alpha1", "sigma1", "alpha2", "sigma2"),
    "F21-1": ("alpha1", "alpha2", "sigma1", "sigma2", "gamma1", "gamma2", "theta"),
    "BK-1": ("nu1", "nu2"),
    "WS-1": ("nu1", "nu2"),
    "GD-1": ("d", "alpha"),
    "WI-1": ("d", "alpha", "Sigma"),
    "MC-1": ("d", "alpha1", "alpha2", "Sigma1", "Sigma2"),
    "MC-0": ("d", "alpha1", "alpha2", "Sigma1", "Sigma2"),
    "CS-1": ("d", "alpha1", "alpha2", "sigma1", "sigma2"),
    "CS-0": ("d", "alpha1", "alpha2", "sigma1", "sigma2"),
}


def _coerce_scalar(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise DomainError(f"complex value needs [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _coerce_matrix(v, d: int) -> SymMatrix:
    if isinstance(v, SymMatrix):
        return v
    if isinstance(v, (int, float)):
        return SymMatrix(float(v) * np.eye(d))
    return SymMatrix(np.asarray(v, dtype=float))


@dataclass
class IdentityCase:
    """One identity id with a concrete, hypothesis-checked parameter set."""
    id: str
    params: dict
    rel_tol: Optional[float] = None     # per-case verdict override
    samples: Optional[int] = None       # per-case MC sample override
    ordinal: int = 0

    def __post_init__(self):
        if self.id not in _SCALAR_PARAMS:
            raise DomainError(f"unknown identity id {self.id!r}")
        want = _SCALAR_PARAMS[self.id]
        missing = [k for k in want if k not in self.params]
        if missing:
            raise DomainError(f"{self.id}: missing parameters {missing}")
        extra = [k for k in self.params
                 if k not in want and k not in ("samples", "rel_tol")]
        if extra:
            raise DomainError(f"{self.id}: unknown parameters {extra}")
        p = {}
        d = int(self.params.get("d", 1)) if "d" in want else None
        if d is not None:
            if d < 1:
                raise DomainError("d must be a positive integer")
            p["d"] = d
        for k in want:
            if k == "d":
                continue
            if k.startswith("Sigma"):
                p[k] = _coerce_matrix(self.params[k], d)
                if p[k].d != d:
                    raise DomainError(f"{self.id}: {k} has dimension {p[k].d}, d={d}")
                if not is_positive_definite(p[k]):
                    raise DomainError(f"{self.id}: {k} must be positive definite")
            else:
                p[k] = _coerce_scalar(self.params[k])
        self.params = p
        _HYPOTHESES[self.id](p)


def _hyp_cb(p):
    _require((p["alpha1"] + p["alpha2"]).real > 1, "Re(alpha1+alpha2) > 1")
    _require(p["sigma1"].real > 0 and p["sigma2"].real > 0, "Re(sigma_j) > 0")


def _hyp_f11(p):
    _require((p["alpha1"] + p["alpha2"]).real > 1, "Re(alpha1+alpha2) > 1")
    _require((p["sigma1"] + p["sigma2"]).real > 1, "Re(sigma1+sigma2) > 1")
    _require((p["alpha1"] + p["sigma1"]).real > 0, "Re(alpha1+sigma1) > 0")
    _require((p["alpha2"] + p["sigma2"]).real > 0, "Re(alpha2+sigma2) > 0")


def _hyp_f21(p):
    _require((p["alpha1"] + p["alpha2"]).real > 1, "Re(alpha1+alpha2) > 1")
    _require(p["sigma1"].real > 0, "Re(sigma1) > 0")
    _require(p["theta"].real > p["sigma2"].real > 0, "Re(theta) > Re(sigma2) > 0")
    _require(not is_nonpositive_integer(p["gamma2"]),
             "gamma2 not a nonpositive integer")


def _hyp_bk(p):
    n1, n2 = p["nu1"], p["nu2"]
    _require(n1.imag == 0 and n2.imag == 0, "real nu for numerical verification")
    _require(n1.real > -0.5 and n2.real > -0.5, "Re(nu_j) > -1/2")
    _require((n1 + n2).real > -1, "Re(nu1+nu2) > -1")


def _hyp_ws(p):
    n1, n2 = p["nu1"], p["nu2"]
    _require(n1.imag == 0 and n2.imag == 0, "real nu for numerical verification")
    _require(n1.real >= 0 and n2.real >= 0, "nu_j >= 0 for J evaluation")
    _require((n1 + n2).real > 0, "Re(nu1+nu2) > 0")


def _hyp_gd(p):
    _require(p["alpha"].imag == 0, "real alpha")
    _require(p["alpha"].real > (p["d"] - 1) / 2, "alpha > (d-1)/2")


def _hyp_wi(p):
    _hyp_gd(p)


def _hyp_mc(p):
    _require((p["alpha1"] + p["alpha2"]).real > p["d"], "Re(alpha1+alpha2) > d")


def _hyp_cs(p):
    _require((p["alpha1"] + p["alpha2"]).real > p["d"], "Re(alpha1+alpha2) > d")
    _require(p["sigma1"].real > 0 and p["sigma2"].real > 0, "Re(sigma_j) > 0")


_HYPOTHESES = {
    "CB-1": _hyp_cb, "CB-0": _hyp_cb, "F11-1": _hyp_f11, "F11-0": _hyp_f11,
    "F21-1": _hyp_f21, "BK-1": _hyp_bk, "WS-1": _hyp_ws, "GD-1": _hyp_gd,
    "WI-1": _hyp_wi, "MC-1": _hyp_mc, "MC-0": _hyp_mc, "CS-1": _hyp_cs,
    "CS-0": _hyp_cs,
}


@dataclass
class VerificationRecord:
    case: IdentityCase
    engine: str                 # "quadrature" | "mc"
    lhs: Optional[complex]
    lhs_err: float              # error estimate (quadrature) or SE (mc)
    rhs: Optional[complex]
    abs_error: Optional[float]
    rel_error: Optional[float]  # None when rhs == 0
    verdict: str                # pass | fail | engine-error
    evals_or_samples: int
    seed: int
    wall_ms: Optional[float]
    message: str = ""


def derive_case_seed(master_seed: int, case_id: str, ordinal: int) -> int:
    """Stable per-case seed, identical for serial and parallel runs."""
    digest = hashlib.sha256(f"{master_seed}:{case_id}:{ordinal}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


# ----------------------------------------------------------------------
# LHS dispatch
# ----------------------------------------------------------------------

def _engine_tols(case: IdentityCase, tol: ToleranceSpec):
    """Engine tolerances, a fixed factor tighter than the verdict tolerance."""
    rel = case.rel_tol if case.rel_tol is not None else tol.rel_tol
    vanishing = case.id.endswith("-0")
    if vanishing:
        return 1e-12, 0.25 * tol.abs_floor, rel
    return max(rel / 50.0, 1e-11), 0.0, rel


def _lhs_cb_like(p, sign2: float, rel: float, abs_t: float):
    a1, a2 = p["alpha1"], p["alpha2"]
    s1, s2 = p["sigma1"], p["sigma2"]

    def f(t: float) -> complex:
        return cmath.exp(-a1 * cmath.log(1 + 1j * s1 * t)
                         - a2 * cmath.log(1 + sign2 * 1j * s2 * t))

    hint = DecayHint(p=(a1 + a2).real)
    return integrate_real_line(f, hint, rel_tol=rel, abs_tol=abs_t)


def _lhs_f11_like(p, sign1: float, rel: float, abs_t: float):
    a1, s1 = p["alpha1"], p["sigma1"]
    a2, s2 = p["alpha2"], p["sigma2"]

    def f(t: float) -> complex:
        return (kummer_1f1(a1, a1 + s1, sign1 * 1j * t)
                * kummer_1f1(a2, a2 + s2, 1j * t))

    decay = (min(a1.real, s1.real) + min(a2.real, s2.real))
    hint = DecayHint(p=decay, wavelength=2 * math.pi)
    est = integrate_real_line(f, hint, rel_tol=rel, abs_tol=abs_t * 2 * math.pi)
    est.value /= 2 * math.pi
    est.error_estimate /= 2 * math.pi
    return est


def _lhs_f21(p, rel: float, abs_t: float):
    a1, a2 = p["alpha1"], p["alpha2"]
    s1, s2 = p["sigma1"], p["sigma2"]
    g1, g2, th = p["gamma1"], p["gamma2"], p["theta"]

    def f(t: float) -> complex:
        den = 1 - 1j * s2 * t
        return (cmath.exp(-a1 * cmath.log(1 + 1j * s1 * t) - a2 * cmath.log(den))
                * gauss_2f1(g1, a2, g2, (s2 / th) / den))

    hint = DecayHint(p=(a1 + a2).real)
    est = integrate_real_line(f, hint, rel_tol=rel, abs_tol=abs_t * 2 * math.pi)
    est.value /= 2 * math.pi
    est.error_estimate /= 2 * math.pi
    return est


def _lhs_bk(p, rel: float, abs_t: float):
    n1, n2 = p["nu1"].real, p["nu2"].real

    def f(t: float) -> complex:
        return t ** (n1 + n2) * bessel_k(n1, t) * bessel_k(n2, t)

    e0 = n1 + n2 - abs(n1) - abs(n2)
    hint = DecayHint(p=math.inf, endpoint_exponent=e0, exp_rate=2.0)
    return integrate_half_line(f, hint, rel_tol=rel, abs_tol=abs_t)


def _lhs_ws(p, rel: float, abs_t: float):
    n1, n2 = p["nu1"].real, p["nu2"].real

    def f(t: float) -> complex:
        return t ** (-n1 - n2) * bessel_j(n1, t) * bessel_j(n2, t)

    hint = DecayHint(p=n1 + n2 + 1.0, wavelength=math.pi, endpoint_exponent=0.0)
    return integrate_half_line(f, hint, rel_tol=rel, abs_tol=abs_t)


def _cone_power_integrand(d: int, alpha: float, Sigma_inv: np.ndarray):
    """(det X)^(alpha-(d+1)/2) etr(-Sigma^-1 X) on the cone, batched."""
    expo = alpha - (d + 1) / 2

    def g(Xs: np.ndarray) -> np.ndarray:
        sign, logdet = np.linalg.slogdet(Xs)
        tr = np.einsum("ij,nji->n", Sigma_inv, Xs)
        out = np.where(sign > 0, np.exp(expo * logdet - tr), 0.0)
        return out

    return g


def _lhs_gd(p, samples: int, seed: int):
    d, alpha = p["d"], p["alpha"].real
    g = _cone_power_integrand(d, alpha, np.eye(d))
    proposal = WishartProposal(alpha + 0.5, SymMatrix(1.25 * np.eye(d)))
    return mc_integrate_sym(g, d, proposal, samples, seed, batched=True)


def _lhs_wi(p, samples: int, seed: int):
    d, alpha = p["d"], p["alpha"].real
    S = p["Sigma"]
    g = _cone_power_integrand(d, alpha, np.linalg.inv(S.array))
    proposal = WishartProposal(alpha + 0.5, SymMatrix(1.25 * S.array))
    return mc_integrate_sym(g, d, proposal, samples, seed, batched=True)


def _matrix_cauchy_integrand(p, sign2: float):
    a1, a2 = p["alpha1"], p["alpha2"]
    r1 = _sqrt_pd(p["Sigma1"])
    r2 = _sqrt_pd(p["Sigma2"])

    def g(Ts: np.ndarray) -> np.ndarray:
        return np.exp(_log_det_power_batch(r1, Ts, a1, 1.0)
                      + _log_det_power_batch(r2, Ts, a2, sign2))

    return g


def _mc_proposal_scale(p) -> float:
    diag = np.concatenate([np.diag(p["Sigma1"].array), np.diag(p["Sigma2"].array)])
    sbar = float(diag.mean())
    abar = 0.5 * (p["alpha1"] + p["alpha2"]).real
    return 1.0 / (sbar * math.sqrt(max(abar, 0.5)))


def _lhs_mc(p, sign2: float, samples: int, seed: int):
    # heavy-tailed proposal throughout: the integrand decays algebraically,
    # so Gaussian proposals give unbounded importance weights
    proposal = StudentTEntriesProposal(_mc_proposal_scale(p))
    g = _matrix_cauchy_integrand(p, sign2)
    return mc_integrate_sym(g, p["d"], proposal, samples, seed, batched=True)


def _cs_scalar_factor(a1, a2, s1, s2, sign2):
    def w(t: float) -> complex:
        return cmath.exp(-a1 * cmath.log(1 + 1j * s1 * t)
                         - a2 * cmath.log(1 + sign2 * 1j * s2 * t))
    return w


def _lhs_cs(p, sign2: float, rel: float, abs_t: float, samples: int, seed: int):
    """Cauchy-Selberg LHS: quadrature for d <= 2 (d = 2 only for the
    non-vanishing id), matrix Monte Carlo through the eigenvalue
    decomposition constant otherwise.  Returns (engine, estimate)."""
    d = p["d"]
    a1, a2 = p["alpha1"], p["alpha2"]
    s1, s2 = p["sigma1"], p["sigma2"]
    w = _cs_scalar_factor(a1, a2, s1, s2, sign2)
    vanishing = sign2 > 0
    if d == 1:
        est = integrate_real_line(lambda t: w(t), DecayHint(p=(a1 + a2).real),
                                  rel_tol=rel, abs_tol=abs_t)
        return "quadrature", est
    if d == 2 and not vanishing:
        def h(ts) -> complex:
            out = vandermonde(ts) + 0.0j
            for t in ts:
                out *= w(t)
            return out
        est = eigen_integrate(h, d, rel_tol=rel, decay_p=(a1 + a2).real,
                              abs_tol=abs_t)
        return "quadrature", est
    # Monte Carlo route: the matrix integral at Sigma_j = sigma_j I equals
    # the eigenvalue integral times pi^(d^2/2) / (d! Gamma_d(d/2))
    mp = {"d": d, "alpha1": a1, "alpha2": a2,
          "Sigma1": SymMatrix(s1.real * np.eye(d)),
          "Sigma2": SymMatrix(s2.real * np.eye(d))}
    if s1.imag != 0 or s2.imag != 0:
        raise DomainError("CS Monte Carlo route requires real sigma")
    est = _lhs_mc(mp, sign2, samples, seed)
    log_c = (0.5 * d * d * math.log(math.pi) - math.lgamma(d + 1)
             - log_multivariate_gamma(d, d / 2).real)
    c = math.exp(log_c)
    est.value /= c
    est.standard_error /= c
    return "mc", est


# ----------------------------------------------------------------------
# Verification
# ----------------------------------------------------------------------

def _compute_rhs(case: IdentityCase) -> complex:
    p = case.params
    cid = case.id
    if cid.endswith("-0"):
        return 0.0 + 0.0j
    if cid == "CB-1":
        return rhs_cauchy_beta(p["alpha1"], p["alpha2"], p["sigma1"], p["sigma2"])
    if cid == "F11-1":
        return rhs_f11_parseval(p["alpha1"], p["sigma1"], p["alpha2"], p["sigma2"])
    if cid == "F21-1":
        return rhs_f21_weighted(p["alpha1"], p["alpha2"], p["sigma1"],
                                p["sigma2"], p["gamma1"], p["gamma2"], p["theta"])
    if cid == "BK-1":
        return rhs_bessel_k_product(p["nu1"], p["nu2"])
    if cid == "WS-1":
        return rhs_weber_schafheitlin(p["nu1"], p["nu2"])
    if cid == "GD-1":
        return cmath.exp(log_multivariate_gamma(p["d"], p["alpha"]))
    if cid == "WI-1":
        sgn, logdet = np.linalg.slogdet(p["Sigma"].array)
        return cmath.exp(log_multivariate_gamma(p["d"], p["alpha"])
                         + p["alpha"] * logdet)
    if cid == "MC-1":
        return rhs_matrix_cauchy_beta(p["d"], p["alpha1"], p["alpha2"],
                                      p["Sigma1"], p["Sigma2"])
    if cid == "CS-1":
        return rhs_cauchy_selberg(p["d"], p["alpha1"], p["alpha2"],
                                  p["sigma1"], p["sigma2"])
    raise DomainError(f"no RHS registered for {cid}")


def _compute_lhs(case: IdentityCase, tol: ToleranceSpec, seed: int):
    """Returns (engine_kind, value, err, count)."""
    p = case.params
    cid = case.id
    engine_rel, engine_abs, _ = _engine_tols(case, tol)
    samples = case.samples or _DEFAULT_SAMPLES.get(cid, 200_000)
    if cid in ("CB-1", "CB-0"):
        est = _lhs_cb_like(p, -1.0 if cid == "CB-1" else +1.0, engine_rel, engine_abs)
        return "quadrature", est.value, est.error_estimate, est.evaluations
    if cid in ("F11-1", "F11-0"):
        est = _lhs_f11_like(p, -1.0 if cid == "F11-1" else +1.0,
                            engine_rel, engine_abs)
        return "quadrature", est.value, est.error_estimate, est.evaluations
    if cid == "F21-1":
        est = _lhs_f21(p, engine_rel, engine_abs)
        return "quadrature", est.value, est.error_estimate, est.evaluations
    if cid == "BK-1":
        est = _lhs_bk(p, engine_rel, engine_abs)
        return "quadrature", est.value, est.error_estimate, est.evaluations
    if cid == "WS-1":
        est = _lhs_ws(p, engine_rel, engine_abs)
        return "quadrature", est.value, est.error_estimate, est.evaluations
    if cid == "GD-1":
        est = _lhs_gd(p, samples, seed)
        return "mc", est.value, est.standard_error, est.samples
    if cid == "WI-1":
        est = _lhs_wi(p, samples, seed)
        return "mc", est.value, est.standard_error, est.samples
    if cid in ("MC-1", "MC-0"):
        est = _lhs_mc(p, -1.0 if cid == "MC-1" else +1.0, samples, seed)
        return "mc", est.value, est.standard_error, est.samples
    if cid in ("CS-1", "CS-0"):
        engine, est = _lhs_cs(p, -1.0 if cid == "CS-1" else +1.0,
                              engine_rel, engine_abs, samples, seed)
        if engine == "quadrature":
            return engine, est.value, est.error_estimate, est.evaluations
        return engine, est.value, est.standard_error, est.samples
    raise DomainError(f"no LHS dispatch for {cid}")


def verify_case(case: IdentityCase, tol: ToleranceSpec,
                master_seed: int = 0) -> VerificationRecord:
    """Run one case end to end; engine failures become verdict=engine-error."""
    seed = derive_case_seed(master_seed, case.id, case.ordinal)
    t0 = time.perf_counter()
    rel = case.rel_tol if case.rel_tol is not None else tol.rel_tol
    try:
        rhs = _compute_rhs(case)
        engine, lhs, err, count = _compute_lhs(case, tol, seed)
    except BetaIntError as exc:
        return VerificationRecord(
            case=case, engine="none", lhs=None, lhs_err=math.nan, rhs=None,
            abs_error=None, rel_error=None, verdict="engine-error",
            evals_or_samples=0, seed=seed, wall_ms=None, message=str(exc))
    wall_ms = (time.perf_counter() - t0) * 1e3
    abs_err = abs(lhs - rhs)
    rel_err = abs_err / abs(rhs) if rhs != 0 else None
    if engine == "mc":
        passed = abs_err <= tol.mc_sigma_multiplier * err
    else:
        passed = abs_err <= max(tol.abs_floor, rel * abs(rhs))
    return VerificationRecord(
        case=case, engine=engine, lhs=lhs, lhs_err=err, rhs=rhs,
        abs_error=abs_err, rel_error=rel_err,
        verdict="pass" if passed else "fail",
        evals_or_samples=count, seed=seed, wall_ms=wall_ms)


def _verify_worker(args):
    case, tol, master_seed = args
    return verify_case(case, tol, master_seed)


def run_suite(cases, tol: ToleranceSpec, parallelism: int = 1,
              master_seed: int = 0):
    """Verify all cases; records come back ordered by (identity, ordinal).

    Per-case seeds are derived from (master_seed, id, ordinal), so parallel
    and serial runs produce identical records.
    """
    cases = list(cases)
    for k, case in enumerate(cases):
        if case.ordinal == 0:
            case.ordinal = k
    if parallelism > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            records = list(pool.map(_verify_worker,
                                    [(c, tol, master_seed) for c in cases]))
    else:
        records = [verify_case(c, tol, master_seed) for c in cases]
    order = {cid: k for k, cid in enumerate(IDENTITY_ORDER)}
    records.sort(key=lambda r: (order[r.case.id], r.case.ordinal))
    return records


def summarize(records) -> dict:
    out = {"pass": 0, "fail": 0, "engine-error": 0, "total": len(records)}
    for r in records:
        out[r.verdict] += 1
    return out
