"""Complex special functions used by the asymptotic formulas.

log-Gamma and Airy come from scipy; log-Barnes-G is evaluated from its
asymptotic expansion plus the recursion G(z+1) = Gamma(z) G(z); the confluent
hypergeometric phi(a, c, z) switches between the ascending series, an
extended-precision series, and the large-|z| asymptotic expansion; zeta'(-1)
is computed once through the Glaisher-Kinkelin constant.

Everything here returns principal branches.  Phase unwrapping across products
is the caller's responsibility (the asymptotics module assembles logs
additively and never exponentiates intermediate products).
"""

import functools

import mpmath as mp
import numpy as np
from scipy.special import airy as _scipy_airy
from scipy.special import jv as _jv
from scipy.special import jvp as _jvp
from scipy.special import loggamma as _loggamma
from scipy.special import rgamma as _rgamma

from .errors import ParameterError, PoleError, ToeplitzAsyError, ZeroError


def _is_nonpositive_int(z, tol=0.0):
    z = complex(z)
    return abs(z.imag) <= tol and z.real <= 0.5 and abs(z.real - round(z.real)) <= tol


def _finite(value, what):
    v = complex(value)
    if not (np.isfinite(v.real) and np.isfinite(v.imag)):
        raise ToeplitzAsyError(f"{what} produced a non-finite value")
    return v


def log_gamma(z):
    """Principal branch of log Gamma(z)."""
    if _is_nonpositive_int(z):
        raise PoleError(f"Gamma pole at z={z}")
    return _finite(_loggamma(complex(z)), "log_gamma")


def gamma(z):
    if _is_nonpositive_int(z):
        raise PoleError(f"Gamma pole at z={z}")
    return _finite(np.exp(_loggamma(complex(z))), "gamma")


def reciprocal_gamma(z):
    """1/Gamma(z); entire, zero at nonpositive integers."""
    return complex(_rgamma(complex(z)))


# coefficients B_{2k+2} / (2k (2k+2)) of the ln G(1+w) expansion
_BARNES_TAIL = (
    -1.0 / 240,
    1.0 / 1008,
    -1.0 / 1440,
    1.0 / 1056,
    -691.0 / 327600,
    1.0 / 144,
    -3617.0 / 114240,
    43867.0 / 229824,
)


def _log_barnes_g_asymptotic(z):
    """ln G(z) for |z-1| >= 8 and Re z >= 1, via the w = z-1 expansion."""
    w = complex(z) - 1.0
    lw = np.log(w)
    out = (
        zeta_prime_minus1()
        + 0.5 * w * np.log(2.0 * np.pi)
        + (0.5 * w * w - 1.0 / 12.0) * lw
        - 0.75 * w * w
    )
    w2 = w * w
    p = w2
    for c in _BARNES_TAIL:
        out += c / p
        p *= w2
    return out


def log_barnes_g(z):
    """Principal branch of ln G(z), Barnes G-function.

    Consistent with G(z+1) = Gamma(z) G(z) and real on the positive axis.
    Raises ZeroError at z = 0, -1, -2, ... where G vanishes.
    """
    z = complex(z)
    if _is_nonpositive_int(z):
        raise ZeroError(f"Barnes G vanishes at z={z}")
    shift = 0
    while abs(z + shift - 1.0) < 8.0 or (z + shift).real < 1.0:
        shift += 1
        if shift > 64:
            raise ParameterError(f"log_barnes_g: cannot shift z={z} into the asymptotic region")
    out = _log_barnes_g_asymptotic(z + shift)
    for j in range(shift):
        out -= log_gamma(z + j)
    return _finite(out, "log_barnes_g")


@functools.lru_cache(maxsize=1)
def zeta_prime_minus1():
    """zeta'(-1) via the Glaisher-Kinkelin constant.

    zeta'(2) is summed with Euler-Maclaurin acceleration, then
    ln A = [gamma + ln(2 pi) - 6 zeta'(2)/pi^2] / 12 and
    zeta'(-1) = 1/12 - ln A.
    """
    n = 60
    k = np.arange(2, n)
    head = np.sum(np.log(k) / k**2)
    ln_n = np.log(n)
    tail = (
        (ln_n + 1.0) / n  # integral
        + 0.5 * ln_n / n**2
        - (1.0 - 2.0 * ln_n) / (12.0 * n**3)
        + (26.0 - 24.0 * ln_n) / (720.0 * n**5)
    )
    zp2 = -(head + tail)
    ln_a = (np.euler_gamma + np.log(2.0 * np.pi) - 6.0 * zp2 / np.pi**2) / 12.0
    return 1.0 / 12.0 - ln_a


def _phi_series(a, c, z, tol=1e-18, max_terms=700):
    term = 1.0 + 0.0j
    total = term
    peak = 1.0
    for n in range(1, max_terms):
        term *= (a + n - 1) / ((c + n - 1) * n) * z
        total += term
        peak = max(peak, abs(total))
        if abs(term) <= tol * (abs(total) + 1e-300) and n > 3:
            return total, peak
    return total, peak


def _phi_series_mp(a, c, z):
    extra = int(0.5 * abs(z)) + 12
    with mp.workdps(15 + extra):
        v = mp.hyp1f1(mp.mpmathify(complex(a)), mp.mpmathify(complex(c)), mp.mpmathify(complex(z)))
        return complex(v)


def _phi_asymptotic(a, c, z):
    # Kummer large-|z| expansion, optimally truncated
    a = complex(a)
    c = complex(c)
    z = complex(z)
    eps = 1.0 if np.angle(z) > -np.pi / 2 else -1.0

    def optimal_sum(p, q):
        # sum_n (p)_n (q)_n / n! * u^{-n}, u = -z (first series) or z (second)
        term = 1.0 + 0.0j
        total = term
        best = abs(term)
        for n in range(1, 200):
            term *= (p + n - 1) * (q + n - 1) / n
            term /= optimal_sum.u
            if abs(term) > best:
                break
            best = abs(term)
            total += term
        return total

    optimal_sum.u = -z
    s1 = optimal_sum(a, a - c + 1)
    optimal_sum.u = z
    s2 = optimal_sum(c - a, 1 - a)
    lg_c = _loggamma(c)
    t1 = np.exp(lg_c + 1j * np.pi * eps * a - a * np.log(z)) * reciprocal_gamma(c - a) * s1
    t2 = np.exp(lg_c + z + (a - c) * np.log(z)) * reciprocal_gamma(a) * s2
    return t1 + t2


def kummer_phi(a, c, z):
    """Confluent hypergeometric phi(a, c, z) = 1F1(a; c; z).

    Ascending series for small |z|; the series is rerun in extended precision
    when cancellation would eat more than ~4 digits; large-|z| asymptotic
    expansion beyond |z| = 30 (overlap agreement is exercised in the tests).
    """
    if _is_nonpositive_int(c):
        raise ParameterError(f"kummer_phi: c={c} is a nonpositive integer")
    a = complex(a)
    c = complex(c)
    z = complex(z)
    if z == 0:
        return 1.0 + 0.0j
    if abs(z) > 30.0:
        return _finite(_phi_asymptotic(a, c, z), "kummer_phi")
    if abs(z) <= 12.0:
        total, peak = _phi_series(a, c, z)
        if peak <= 1e4 * abs(total):
            return _finite(total, "kummer_phi")
    return _finite(_phi_series_mp(a, c, z), "kummer_phi")


def kummer_phi_prime(a, c, z):
    """d/dz phi(a, c, z) = (a/c) phi(a+1, c+1, z)."""
    return (complex(a) / complex(c)) * kummer_phi(complex(a) + 1, complex(c) + 1, z)


def airy_ai(x):
    """(Ai(x), Ai'(x)); accepts scalars or arrays."""
    ai, aip, _, _ = _scipy_airy(x)
    return ai, aip


def bessel_j(a, x):
    """Bessel J_a(x) for Re a > -1, x >= 0; complex order goes through mpmath."""
    if complex(a).real <= -1.0:
        raise ParameterError(f"bessel_j: Re a must exceed -1, got a={a}")
    if np.any(np.asarray(x) < 0):
        raise ParameterError("bessel_j: x must be nonnegative")
    if complex(a).imag == 0:
        return _jv(float(complex(a).real), x)
    return complex(mp.besselj(complex(a), complex(x)))


def bessel_j_prime(a, x):
    """J_a'(x) (derivative in x)."""
    if complex(a).real <= -1.0:
        raise ParameterError(f"bessel_j_prime: Re a must exceed -1, got a={a}")
    if complex(a).imag == 0:
        return _jvp(float(complex(a).real), x)
    am = complex(a)
    return 0.5 * (complex(mp.besselj(am - 1, complex(x))) - complex(mp.besselj(am + 1, complex(x))))
