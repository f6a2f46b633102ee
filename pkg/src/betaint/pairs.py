"""Density / Fourier-transform pairs and their closed-form inner products.

Each pair bundles the three ingredients of a Parseval-based identity: a
time-domain density f, its transform f^(t) = int e^{-itx} f(x) dx, and the
closed form of <f1, f2> for the supported combinations.  Complex parameters
are admitted wherever the closed forms are analytic; density evaluation is
restricted to real parameters (densities are integrated only as oracles).
Transform evaluators for the Bessel-backed pairs additionally require a real
order, since complex-order Bessel functions are out of scope.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import DomainError, UnsupportedCombinationError
from .special import (bessel_j, bessel_k, beta_fn, gauss_2f1, gamma_fn,
                      is_nonpositive_integer, kummer_1f1, log_gamma,
                      principal_power)

_SMALL_T = 1e-6


@dataclass
class TransformPair:
    """A density, its Fourier transform, and decay metadata for quadrature."""
    kind: str                      # gamma | beta | kummer_gamma | student_t | semicircle
    params: dict
    support: str                   # half-line | unit-interval | real-line | symmetric-interval
    density: Callable[[float], complex] = field(repr=False)
    transform: Callable[[float], complex] = field(repr=False)
    transform_decay_p: float = 2.0
    transform_wavelength: Optional[float] = None
    transform_exp_rate: Optional[float] = None


def _real_or_raise(value: complex, name: str) -> float:
    value = complex(value)
    if value.imag != 0:
        raise DomainError(f"{name} must be real for this evaluation")
    return value.real


def gamma_pair(alpha, sigma) -> TransformPair:
    """Gamma density x^(a-1) e^(-x/s) / (s^a Gamma(a)) with transform (1+ist)^-a."""
    alpha, sigma = complex(alpha), complex(sigma)
    if alpha.real <= 0 or sigma.real <= 0:
        raise DomainError("gamma_pair requires Re(alpha) > 0 and Re(sigma) > 0")
    log_norm = alpha * cmath.log(sigma) + log_gamma(alpha)

    def density(x: float) -> complex:
        a = _real_or_raise(alpha, "alpha")
        s = _real_or_raise(sigma, "sigma")
        if x <= 0:
            return 0.0
        return math.exp((a - 1) * math.log(x) - x / s - log_norm.real)

    def transform(t: float) -> complex:
        return principal_power(1 + 1j * sigma * t, -alpha)

    return TransformPair("gamma", {"alpha": alpha, "sigma": sigma}, "half-line",
                         density, transform, transform_decay_p=alpha.real)


def beta_pair(alpha, sigma) -> TransformPair:
    """Beta density on (0,1) with transform 1F1(a; a+s; -it)."""
    alpha, sigma = complex(alpha), complex(sigma)
    if alpha.real <= 0 or sigma.real <= 0:
        raise DomainError("beta_pair requires Re(alpha) > 0 and Re(sigma) > 0")
    log_norm = (log_gamma(alpha) + log_gamma(sigma) - log_gamma(alpha + sigma)).real

    def density(x: float) -> complex:
        a = _real_or_raise(alpha, "alpha")
        s = _real_or_raise(sigma, "sigma")
        if not 0 < x < 1:
            return 0.0
        return math.exp((a - 1) * math.log(x) + (s - 1) * math.log1p(-x) - log_norm)

    def transform(t: float) -> complex:
        return kummer_1f1(alpha, alpha + sigma, -1j * t)

    return TransformPair("beta", {"alpha": alpha, "sigma": sigma}, "unit-interval",
                         density, transform,
                         transform_decay_p=min(alpha.real, sigma.real),
                         transform_wavelength=2 * math.pi)


def kummer_weighted_gamma_pair(alpha2, sigma2, gamma1, gamma2, theta) -> TransformPair:
    """Gamma density tilted by a 1F1 weight; transform carries a 2F1 factor.

    The normalizer c with 1/c = Gamma(a2) s2^a2 2F1(g1, a2; g2; s2/th) is
    computed once here and cancels identically between density and transform.
    """
    alpha2, sigma2, theta = complex(alpha2), complex(sigma2), complex(theta)
    g1 = _real_or_raise(gamma1, "gamma1")
    g2 = _real_or_raise(gamma2, "gamma2")
    if alpha2.real <= 0:
        raise DomainError("kummer_weighted_gamma_pair requires Re(alpha2) > 0")
    if not theta.real > sigma2.real > 0:
        raise DomainError(
            "kummer_weighted_gamma_pair requires Re(theta) > Re(sigma2) > 0")
    if not (g2 >= g1 > 0):
        raise DomainError("kummer_weighted_gamma_pair requires gamma2 >= gamma1 > 0")
    f21_at_base = gauss_2f1(g1, alpha2, g2, sigma2 / theta)
    # 1/c without the 2F1 factor, kept in log space
    log_gs = log_gamma(alpha2) + alpha2 * cmath.log(sigma2)

    def density(x: float) -> complex:
        a2 = _real_or_raise(alpha2, "alpha2")
        s2 = _real_or_raise(sigma2, "sigma2")
        th = _real_or_raise(theta, "theta")
        if x <= 0:
            return 0.0
        c_inv = (cmath.exp(log_gs) * f21_at_base).real
        return (math.exp((a2 - 1) * math.log(x) - x / s2)
                * kummer_1f1(g1, g2, x / th).real / c_inv)

    def transform(t: float) -> complex:
        z = (sigma2 / theta) / (1 + 1j * sigma2 * t)
        return (principal_power(1 + 1j * sigma2 * t, -alpha2)
                * gauss_2f1(g1, alpha2, g2, z) / f21_at_base)

    return TransformPair("kummer_gamma",
                         {"alpha2": alpha2, "sigma2": sigma2, "gamma1": g1,
                          "gamma2": g2, "theta": theta},
                         "half-line", density, transform,
                         transform_decay_p=alpha2.real)


def student_t_pair(nu) -> TransformPair:
    """Renormalized Student-t density (1+x^2)^-(nu+1/2) / B(nu, 1/2).

    Transform |t|^nu K_nu(|t|) / (2^(nu-1) Gamma(nu)), piecewise 1 at t = 0;
    for |t| < 1e-6 the evaluator switches to the series limit to avoid K_nu
    cancellation near the removable singularity.
    """
    nu_c = complex(nu)
    if nu_c.real <= 0:
        raise DomainError("student_t_pair requires Re(nu) > 0")
    log_norm = (log_gamma(nu_c) + 0.5 * math.log(math.pi)
                - log_gamma(nu_c + 0.5)).real

    def density(x: float) -> complex:
        n = _real_or_raise(nu_c, "nu")
        return math.exp(-(n + 0.5) * math.log1p(x * x) - log_norm)

    def transform(t: float) -> complex:
        n = _real_or_raise(nu_c, "nu")
        at = abs(t)
        if at == 0.0:
            return 1.0 + 0.0j
        if at < _SMALL_T:
            if abs(n - round(n)) < 1e-12:
                return 1.0 + 0.0j
            corr = (gamma_fn(1 - n) / gamma_fn(1 + n)).real * (0.5 * at) ** (2 * n)
            return 1.0 + (0.5 * at) ** 2 / (1 - n) - corr
        return (math.exp(n * math.log(at) - (n - 1) * math.log(2)
                         - log_gamma(n).real) * bessel_k(n, at))

    return TransformPair("student_t", {"nu": nu_c}, "real-line", density,
                         transform, transform_decay_p=math.inf,
                         transform_exp_rate=1.0)


def semicircle_power_pair(nu) -> TransformPair:
    """Power of the semicircle: f(x) = (1-x^2)^(nu-1/2) on (-1, 1), unnormalized.

    Transform sqrt(pi) Gamma(nu+1/2) (|t|/2)^-nu J_nu(|t|); the t -> 0 limit
    sqrt(pi) Gamma(nu+1/2) / Gamma(nu+1) is taken by series for tiny |t|.
    """
    nu_c = complex(nu)
    if nu_c.real <= 0.5:
        raise DomainError("semicircle_power_pair requires Re(nu) > 1/2")

    def density(x: float) -> complex:
        n = _real_or_raise(nu_c, "nu")
        if not -1 < x < 1:
            return 0.0
        return (1 - x * x) ** (n - 0.5)

    def transform(t: float) -> complex:
        n = _real_or_raise(nu_c, "nu")
        at = abs(t)
        front = math.exp(0.5 * math.log(math.pi) + log_gamma(n + 0.5).real)
        if at < _SMALL_T:
            limit = front * math.exp(-log_gamma(n + 1).real)
            return limit * (1 - 0.25 * at * at / (n + 1))
        return front * math.exp(-n * math.log(0.5 * at)) * bessel_j(n, at)

    return TransformPair("semicircle", {"nu": nu_c}, "symmetric-interval",
                         density, transform,
                         transform_decay_p=nu_c.real + 0.5,
                         transform_wavelength=2 * math.pi)


# ----------------------------------------------------------------------
# Closed-form inner products <f1, f2>
# ----------------------------------------------------------------------

def _ip_gamma_gamma(pg1: dict, pg2: dict) -> complex:
    a1, s1 = pg1["alpha"], pg1["sigma"]
    a2, s2 = pg2["alpha"], pg2["sigma"]
    if (a1 + a2).real <= 1:
        raise DomainError("gamma x gamma inner product needs Re(a1+a2) > 1")
    log = (log_gamma(a1 + a2 - 1) - log_gamma(a1) - log_gamma(a2)
           - (a1 + a2 - 1) * cmath.log(1 / s1 + 1 / s2)
           - a1 * cmath.log(s1) - a2 * cmath.log(s2))
    return cmath.exp(log)


def _ip_gamma_kummer(pg: dict, pk: dict) -> complex:
    a1, s1 = pg["alpha"], pg["sigma"]
    a2, s2 = pk["alpha2"], pk["sigma2"]
    g1, g2, th = pk["gamma1"], pk["gamma2"], pk["theta"]
    if (a1 + a2).real <= 1:
        raise DomainError("gamma x kummer inner product needs Re(a1+a2) > 1")
    rho = 1 / s1 + 1 / s2
    c_inv = cmath.exp(log_gamma(a2) + a2 * cmath.log(s2)) * gauss_2f1(g1, a2, g2, s2 / th)
    log = (log_gamma(a1 + a2 - 1) - log_gamma(a1) - a1 * cmath.log(s1)
           - (a1 + a2 - 1) * cmath.log(rho))
    return cmath.exp(log) * gauss_2f1(g1, a1 + a2 - 1, g2, (1 / th) / rho) / c_inv


def _ip_beta_beta(p1: dict, p2: dict) -> complex:
    a1, s1 = p1["alpha"], p1["sigma"]
    a2, s2 = p2["alpha"], p2["sigma"]
    if (a1 + a2).real <= 1 or (s1 + s2).real <= 1:
        raise DomainError("beta x beta inner product needs Re(a1+a2) > 1, Re(s1+s2) > 1")
    return beta_fn(a1 + a2 - 1, s1 + s2 - 1) / (beta_fn(a1, s1) * beta_fn(a2, s2))


def _ip_t_t(p1: dict, p2: dict) -> complex:
    n1, n2 = p1["nu"], p2["nu"]
    return beta_fn(n1 + n2 + 0.5, 0.5) / (beta_fn(n1, 0.5) * beta_fn(n2, 0.5))


def _ip_semi_semi(p1: dict, p2: dict) -> complex:
    n1, n2 = p1["nu"], p2["nu"]
    s = n1 + n2
    return principal_power(2, 2 * s - 1) * beta_fn(s, s)


def inner_product_closed_form(p1: TransformPair, p2: TransformPair) -> complex:
    """<f1, f2> for the supported pair combinations.

    Supported: gamma x gamma, gamma x kummer_gamma (either order),
    beta x beta, student_t x student_t, semicircle x semicircle.
    """
    k1, k2 = p1.kind, p2.kind
    if (k1, k2) == ("gamma", "gamma"):
        return _ip_gamma_gamma(p1.params, p2.params)
    if (k1, k2) == ("gamma", "kummer_gamma"):
        return _ip_gamma_kummer(p1.params, p2.params)
    if (k1, k2) == ("kummer_gamma", "gamma"):
        return _ip_gamma_kummer(p2.params, p1.params)
    if (k1, k2) == ("beta", "beta"):
        return _ip_beta_beta(p1.params, p2.params)
    if (k1, k2) == ("student_t", "student_t"):
        return _ip_t_t(p1.params, p2.params)
    if (k1, k2) == ("semicircle", "semicircle"):
        return _ip_semi_semi(p1.params, p2.params)
    raise UnsupportedCombinationError(
        f"no closed-form inner product for {k1} x {k2}")
