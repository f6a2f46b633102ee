"""Scalar special-function kernels over real and complex arguments.

All fractional powers and logarithms are principal: arg in (-pi, pi].  Gamma
and Bessel kernels are backed by scipy.special behind the domain/branch
contracts enforced here; the hypergeometric evaluators are implemented
directly because complex parameters and large oscillatory arguments are
required.  Every function is pure and thread-safe.

Route map for 1F1(a; c; z):

  * terminating polynomial        a a nonpositive integer
  * Maclaurin series (Kahan)      cancellation bound 4*eps*sum|t_k| meets tol
  * large-|z| Poincare expansion  |z| >= 28 and optimal truncation meets tol
  * arbitrary-precision bridge    otherwise (mpmath, confined to the narrow
                                  band where doubles cannot deliver)

2F1(a, b; c; z) uses the Maclaurin series for |z| <= 1/2, and for larger
moduli the linear fractional transformations z -> z/(z-1) and z -> 1-z,
choosing the candidate with the smallest mapped modulus.
"""

from __future__ import annotations

import cmath
import math

import mpmath
import numpy as np
from scipy import special as _sp

from .errors import ConvergenceError, DomainError, OverflowRangeError, PoleError

_EPS = float(np.finfo(float).eps)
_SERIES_MAX_TERMS = 2000
_ASYM_MIN_ABS = 28.0
# |z| - Re z beyond which the Maclaurin route cannot reach 1e-11 in doubles
_SERIES_CANCEL_LIMIT = 38.0


def _c(z) -> complex:
    return complex(z)


def _check_finite(value: complex, what: str) -> complex:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise OverflowRangeError(f"{what} overflowed double precision")
    return value


def is_nonpositive_integer(z, tol: float = 1e-12) -> bool:
    """True if z is 0, -1, -2, ... within tol (the Gamma pole set)."""
    z = _c(z)
    if abs(z.imag) > tol or z.real > 0.5:
        return False
    return abs(z.real - round(z.real)) <= tol


def log_gamma(z) -> complex:
    """Principal branch of log Gamma(z); raises PoleError at 0, -1, -2, ..."""
    z = _c(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"log_gamma pole at z={z}")
    return _check_finite(complex(_sp.loggamma(z)), "log_gamma")


def gamma_fn(z) -> complex:
    """Gamma(z) via the log-gamma kernel."""
    return _check_finite(cmath.exp(log_gamma(z)), "gamma_fn")


def beta_fn(a, b) -> complex:
    """Classical beta function Gamma(a)Gamma(b)/Gamma(a+b)."""
    return _check_finite(
        cmath.exp(log_gamma(a) + log_gamma(b) - log_gamma(_c(a) + _c(b))), "beta_fn"
    )


def principal_power(base, exponent) -> complex:
    """base**exponent with the principal logarithm, arg in (-pi, pi].

    base == 0 is allowed only for Re(exponent) > 0 (the limit value 0).
    """
    base = _c(base)
    exponent = _c(exponent)
    if base == 0:
        if exponent.real > 0:
            return 0.0 + 0.0j
        raise DomainError("principal_power: zero base needs Re(exponent) > 0")
    return _check_finite(cmath.exp(exponent * cmath.log(base)), "principal_power")


def pochhammer(a, j: int) -> complex:
    """Rising factorial a (a+1) ... (a+j-1); j = 0 gives 1."""
    if j < 0 or j != int(j):
        raise DomainError("pochhammer: j must be a nonnegative integer")
    a = _c(a)
    out = 1.0 + 0.0j
    for k in range(int(j)):
        out *= a + k
    return _check_finite(out, "pochhammer")


# ----------------------------------------------------------------------
# Kummer 1F1
# ----------------------------------------------------------------------

def _series_1f1(a: complex, c: complex, z: complex, rel_tol: float,
                max_terms: int | None = None):
    """Maclaurin sum with Kahan compensation.

    Returns (value, error_bound); the bound covers truncation plus the
    round-off floor 4*eps*sum|terms| that measures cancellation loss.
    """
    limit = max_terms if max_terms is not None else _SERIES_MAX_TERMS
    s = 1.0 + 0.0j
    comp = 0.0 + 0.0j
    term = 1.0 + 0.0j
    absum = 1.0
    nmin = int(abs(z)) + 8
    k = 0
    trunc = math.inf
    while k < limit:
        term = term * (a + k) / (c + k) * z / (k + 1)
        absum += abs(term)
        y = term - comp
        t = s + y
        comp = (t - s) - y
        s = t
        k += 1
        if max_terms is not None and k >= limit:
            trunc = 0.0  # terminating polynomial: exact
            break
        if k >= nmin and abs(term) <= 0.25 * rel_tol * abs(s):
            ratio = abs(z) / (k + 1)
            trunc = abs(term) * (ratio / (1 - ratio) if ratio < 0.9 else 10.0)
            break
    cancel = 4.0 * _EPS * absum
    return s, cancel + (trunc if math.isfinite(trunc) else absum)


def _asym_2f0(p: complex, q: complex, w: complex, rel_tol: float):
    """sum_k (p)_k (q)_k w^k / k! truncated at the smallest term."""
    s = 1.0 + 0.0j
    term = 1.0 + 0.0j
    prev = 1.0
    err = 1.0
    for k in range(60):
        term = term * (p + k) * (q + k) * w / (k + 1)
        at = abs(term)
        if k >= 1 and at > prev:
            err = at
            break
        s += term
        prev = at
        err = at
        if at <= 0.1 * rel_tol * abs(s):
            break
    return s, err


def _asym_1f1(a: complex, c: complex, z: complex, rel_tol: float):
    """Large-|z| Poincare expansion of 1F1; returns (value, error_bound)."""
    argz = cmath.phase(z)
    sgn = 1.0 if argz > -math.pi / 2 else -1.0
    lz = cmath.log(z)
    s1, e1 = _asym_2f0(a, a - c + 1, -1.0 / z, rel_tol)
    s2, e2 = _asym_2f0(c - a, 1 - a, 1.0 / z, rel_tol)
    lg_c = log_gamma(c)
    g1 = cmath.exp(lg_c - log_gamma(c - a) + 1j * math.pi * a * sgn - a * lz) * s1
    g2 = cmath.exp(lg_c - log_gamma(a) + z + (a - c) * lz) * s2
    err = e1 * abs(g1 / s1 if s1 != 0 else g1) + e2 * abs(g2 / s2 if s2 != 0 else g2)
    return g1 + g2, err


def _mpmath_1f1(a: complex, c: complex, z: complex) -> complex:
    dps = 25 + int(0.5 * abs(z))
    with mpmath.workdps(dps):
        return complex(mpmath.hyp1f1(a, c, z))


def kummer_1f1(a, c, z, rel_tol: float = 1e-11) -> complex:
    """Confluent hypergeometric 1F1(a; c; z), complex parameters and argument.

    Raises PoleError when c is a nonpositive integer and ConvergenceError
    when no evaluation route can meet rel_tol.
    """
    a, c, z = _c(a), _c(c), _c(z)
    if is_nonpositive_integer(c):
        raise PoleError(f"kummer_1f1: c={c} is a nonpositive integer")
    if z == 0:
        return 1.0 + 0.0j
    if a == c:
        return _check_finite(cmath.exp(z), "kummer_1f1")
    if is_nonpositive_integer(a):
        nterms = int(round(-a.real))
        val, _ = _series_1f1(a, c, z, rel_tol, max_terms=nterms)
        return _check_finite(val, "kummer_1f1")
    if z.real < 0:
        # Kummer transform moves the argument to the closed right half-plane
        return _check_finite(cmath.exp(z) * kummer_1f1(c - a, c, -z, rel_tol),
                             "kummer_1f1")
    if abs(z) - z.real < _SERIES_CANCEL_LIMIT and abs(z) < 600.0:
        val, err = _series_1f1(a, c, z, rel_tol)
        if err <= rel_tol * abs(val):
            return _check_finite(val, "kummer_1f1")
    if abs(z) >= _ASYM_MIN_ABS:
        val, err = _asym_1f1(a, c, z, rel_tol)
        if err <= rel_tol * abs(val):
            return _check_finite(val, "kummer_1f1")
    if abs(z) < 600.0:
        return _check_finite(_mpmath_1f1(a, c, z), "kummer_1f1")
    raise ConvergenceError(f"kummer_1f1: no route converged at z={z}")


# ----------------------------------------------------------------------
# Gauss 2F1
# ----------------------------------------------------------------------

def _series_2f1(a: complex, b: complex, c: complex, z: complex, rel_tol: float,
                max_terms: int | None = None):
    limit = max_terms if max_terms is not None else _SERIES_MAX_TERMS
    s = 1.0 + 0.0j
    comp = 0.0 + 0.0j
    term = 1.0 + 0.0j
    absum = 1.0
    k = 0
    trunc = math.inf
    while k < limit:
        term = term * (a + k) * (b + k) / (c + k) * z / (k + 1)
        absum += abs(term)
        y = term - comp
        t = s + y
        comp = (t - s) - y
        s = t
        k += 1
        if max_terms is not None and k >= limit:
            trunc = 0.0
            break
        if k >= 8 and abs(term) <= 0.25 * rel_tol * abs(s):
            r = abs(z)
            trunc = abs(term) * (r / (1 - r) if r < 0.95 else 20.0)
            break
    cancel = 4.0 * _EPS * absum
    if not math.isfinite(trunc):
        raise ConvergenceError("gauss_2f1: series did not converge in budget")
    return s, cancel + trunc


def gauss_2f1(a, b, c, z, rel_tol: float = 1e-11) -> complex:
    """Gauss hypergeometric 2F1(a, b; c; z) for |z| < 1 (and z = 1, Gauss sum).

    Raises DomainError for |z| >= 1 away from the Gauss point, PoleError for
    nonpositive-integer c, ConvergenceError when no route meets rel_tol.
    """
    a, b, c, z = _c(a), _c(b), _c(c), _c(z)
    if is_nonpositive_integer(c):
        raise PoleError(f"gauss_2f1: c={c} is a nonpositive integer")
    if z == 0:
        return 1.0 + 0.0j
    if a == c:
        return principal_power(1 - z, -b)
    if b == c:
        return principal_power(1 - z, -a)
    if is_nonpositive_integer(a) or is_nonpositive_integer(b):
        n = int(round(-(a.real if is_nonpositive_integer(a) else b.real)))
        val, _ = _series_2f1(a, b, c, z, rel_tol, max_terms=n)
        return _check_finite(val, "gauss_2f1")
    if z == 1:
        if (c - a - b).real <= 0:
            raise DomainError("gauss_2f1 at z=1 needs Re(c-a-b) > 0")
        return _check_finite(
            cmath.exp(log_gamma(c) + log_gamma(c - a - b)
                      - log_gamma(c - a) - log_gamma(c - b)), "gauss_2f1")
    if abs(z) >= 1:
        raise DomainError(f"gauss_2f1: |z|={abs(z):.3g} outside the unit disc")
    if abs(z) <= 0.5:
        val, err = _series_2f1(a, b, c, z, rel_tol)
        if err <= rel_tol * abs(val):
            return _check_finite(val, "gauss_2f1")

    # transformation candidates, smallest mapped modulus first
    w_pfaff = z / (z - 1)
    cab = c - a - b
    candidates = [(abs(z), "direct")]
    if abs(w_pfaff) < 1:
        candidates.append((abs(w_pfaff), "pfaff"))
    euler_ok = abs(cab - round(cab.real)) > 0.05 or abs(cab.imag) > 0.05
    if euler_ok and abs(1 - z) < 1:
        candidates.append((abs(1 - z), "euler"))
    candidates.sort()
    for mapped, route in candidates:
        if mapped > 0.85:
            continue
        if route == "direct":
            val, err = _series_2f1(a, b, c, z, rel_tol)
        elif route == "pfaff":
            inner, err = _series_2f1(a, c - b, c, w_pfaff, rel_tol)
            val = principal_power(1 - z, -a) * inner
        else:
            f1, e1 = _series_2f1(a, b, a + b - c + 1, 1 - z, rel_tol)
            f2, e2 = _series_2f1(c - a, c - b, c - a - b + 1, 1 - z, rel_tol)
            t1 = cmath.exp(log_gamma(c) + log_gamma(cab)
                           - log_gamma(c - a) - log_gamma(c - b)) * f1
            t2 = (principal_power(1 - z, cab)
                  * cmath.exp(log_gamma(c) + log_gamma(-cab)
                              - log_gamma(a) - log_gamma(b)) * f2)
            val = t1 + t2
            err = e1 * abs(t1 / f1) + e2 * abs(t2 / f2)
        if err <= rel_tol * abs(val):
            return _check_finite(val, "gauss_2f1")
    raise ConvergenceError(f"gauss_2f1: no route met tolerance at z={z}")


# ----------------------------------------------------------------------
# Bessel kernels (real order, real argument)
# ----------------------------------------------------------------------

def bessel_k(nu: float, x: float) -> float:
    """Modified Bessel K_nu(x) for x > 0; K_{-nu} = K_nu normalized at entry."""
    nu = abs(float(nu))
    x = float(x)
    if not x > 0:
        raise DomainError(f"bessel_k requires x > 0, got {x}")
    val = float(_sp.kv(nu, x))
    if not math.isfinite(val):
        raise OverflowRangeError(f"bessel_k({nu}, {x}) overflowed")
    return val


def bessel_j(nu: float, x: float) -> float:
    """Bessel J_nu(x) for nu >= 0, x >= 0."""
    nu = float(nu)
    x = float(x)
    if nu < 0:
        raise DomainError(f"bessel_j requires nu >= 0, got {nu}")
    if x < 0:
        raise DomainError(f"bessel_j requires x >= 0, got {x}")
    val = float(_sp.jv(nu, x))
    if not math.isfinite(val):
        raise OverflowRangeError(f"bessel_j({nu}, {x}) is not finite")
    return val


# ----------------------------------------------------------------------
# Multivariate gamma for the positive definite cone
# ----------------------------------------------------------------------

def log_multivariate_gamma(d: int, alpha) -> complex:
    """log Gamma_d(alpha) = (d(d-1)/4) log pi + sum_j log Gamma(alpha-(j-1)/2).

    Normalized so that Gamma_d equals the integral of etr(-X) det(X)^(alpha)
    against det(X)^{-(d+1)/2} dX over the cone of positive definite d x d
    matrices, with dX the Lebesgue measure on the d(d+1)/2 upper-triangle
    entries (the convention used throughout this package).
    """
    d = int(d)
    if d < 1:
        raise DomainError("log_multivariate_gamma requires d >= 1")
    alpha = _c(alpha)
    if alpha.real <= (d - 1) / 2:
        raise DomainError(
            f"log_multivariate_gamma requires Re(alpha) > (d-1)/2, got {alpha}")
    out = 0.25 * d * (d - 1) * math.log(math.pi) + 0.0j
    for j in range(1, d + 1):
        out += log_gamma(alpha - (j - 1) / 2)
    return _check_finite(out, "log_multivariate_gamma")


def multivariate_gamma(d: int, alpha) -> complex:
    """Gamma_d(alpha), evaluated in log space."""
    return _check_finite(cmath.exp(log_multivariate_gamma(d, alpha)),
                         "multivariate_gamma")
